#include "cubeknot/lattice.hpp"

#include <algorithm>

namespace cubeknot {

Window symmetric_window(int half, int dim) {
    Window w;
    w.dim = dim;
    for (int i = 0; i < dim; ++i) {
        w.lo[i] = -half;
        w.hi[i] = half;
    }
    return w;
}

CellKey make_cell(std::initializer_list<std::int32_t> anchor, std::initializer_list<int> axes) {
    if (anchor.size() > kMaxDim) throw InputError("make_cell: anchor longer than kMaxDim");
    CellKey c;
    int i = 0;
    for (auto a : anchor) c.anchor[i++] = a;
    for (int ax : axes) {
        if (ax < 0 || ax >= kMaxDim) throw InputError("make_cell: axis out of range");
        c.axes |= static_cast<std::uint8_t>(1u << ax);
    }
    return c;
}

CellKey make_cube(const GridVec& anchor, int dim) {
    CellKey c;
    c.anchor = anchor;
    c.axes = static_cast<std::uint8_t>((1u << dim) - 1u);
    return c;
}

Box cell_support(const CellKey& c, Scale s) {
    Box b;
    const double u = s.unit();
    for (int i = 0; i < kMaxDim; ++i) {
        b.lo[i] = c.anchor[i] * u;
        b.hi[i] = b.lo[i] + (c.spans(i) ? u : 0.0);
    }
    return b;
}

namespace {

std::array<int, kMaxDim> axis_list(std::uint8_t mask) {
    std::array<int, kMaxDim> out{};
    int n = 0;
    for (int i = 0; i < kMaxDim; ++i)
        if ((mask >> i) & 1u) out[n++] = i;
    return out;
}

} // namespace

std::vector<CellKey> faces_of(const CellKey& c, int k) {
    const int d = c.dim();
    if (k < 0 || k > d) throw InputError("faces_of: face dimension out of range");

    const auto axes = axis_list(c.axes);
    std::vector<CellKey> out;

    // Choose the k axes the face keeps, then a side for each dropped axis.
    for (std::uint32_t keep = 0; keep < (1u << d); ++keep) {
        if (std::popcount(keep) != k) continue;
        std::uint8_t face_axes = 0;
        std::array<int, kMaxDim> dropped{};
        int ndrop = 0;
        for (int i = 0; i < d; ++i) {
            if ((keep >> i) & 1u)
                face_axes |= static_cast<std::uint8_t>(1u << axes[i]);
            else
                dropped[ndrop++] = axes[i];
        }
        for (std::uint32_t side = 0; side < (1u << ndrop); ++side) {
            CellKey f;
            f.anchor = c.anchor;
            f.axes = face_axes;
            for (int j = 0; j < ndrop; ++j)
                if ((side >> j) & 1u) f.anchor[dropped[j]] += 1;
            out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CellKey> cofaces_of(const CellKey& c, int k, int ambient_dim) {
    if (ambient_dim < 1 || ambient_dim > kMaxDim) throw InputError("cofaces_of: ambient dimension out of range");
    const int d = c.dim();
    if (k < d || k > ambient_dim) throw InputError("cofaces_of: coface dimension out of range");
    if ((c.axes >> ambient_dim) != 0) throw InputError("cofaces_of: cell uses axes beyond ambient dimension");

    std::array<int, kMaxDim> free_axes{};
    int nfree = 0;
    for (int i = 0; i < ambient_dim; ++i)
        if (!c.spans(i)) free_axes[nfree++] = i;

    const int grow = k - d;
    std::vector<CellKey> out;

    // Choose which free axes the coface spans, then on each the coface may
    // sit on either side of c (anchor unchanged or shifted down by one).
    for (std::uint32_t pick = 0; pick < (1u << nfree); ++pick) {
        if (std::popcount(pick) != grow) continue;
        std::array<int, kMaxDim> grown{};
        int ngrow = 0;
        std::uint8_t coface_axes = c.axes;
        for (int i = 0; i < nfree; ++i) {
            if ((pick >> i) & 1u) {
                coface_axes |= static_cast<std::uint8_t>(1u << free_axes[i]);
                grown[ngrow++] = free_axes[i];
            }
        }
        for (std::uint32_t side = 0; side < (1u << ngrow); ++side) {
            CellKey f;
            f.anchor = c.anchor;
            f.axes = coface_axes;
            for (int j = 0; j < ngrow; ++j)
                if ((side >> j) & 1u) f.anchor[grown[j]] -= 1;
            out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace cubeknot
