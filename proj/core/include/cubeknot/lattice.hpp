#ifndef CUBEKNOT_LATTICE_HPP
#define CUBEKNOT_LATTICE_HPP

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

#include "cubeknot/error.hpp"

namespace cubeknot {

/// Maximum ambient dimension of the cubulation kernel. The incidence
/// combinatorics below are dimension-generic up to this bound; the geometric
/// pipeline only uses d = 3.
inline constexpr int kMaxDim = 4;

using GridVec = std::array<std::int32_t, kMaxDim>;

/// Subdivision scale: cubes of the subcubulation have side 1/m.
struct Scale {
    int m = 1;

    double unit() const { return 1.0 / m; }
};

/// A k-dimensional cell of the scaled lattice in canonical form: `anchor` is
/// the minimal corner in units of 1/m, `axes` is the bit set of axes the cell
/// extends along. Anchor entries above the ambient dimension must stay zero
/// so that equality and hashing are exact.
struct CellKey {
    GridVec anchor{};
    std::uint8_t axes = 0;

    int dim() const { return std::popcount(axes); }
    bool spans(int axis) const { return (axes >> axis) & 1u; }

    friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct CellKeyHash {
    std::size_t operator()(const CellKey& c) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ c.axes;
        for (int i = 0; i < kMaxDim; ++i) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.anchor[i])) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

/// Axis-aligned closed box, the geometric support of a cell. Degenerate
/// (lo == hi) along axes the cell does not span.
struct Box {
    std::array<double, kMaxDim> lo{};
    std::array<double, kMaxDim> hi{};
};

/// Integer box of cube anchors: a in [lo, hi) per axis, for the first `dim`
/// axes. The lattice sets of the construction are infinite; every
/// enumeration is restricted to an explicit window.
struct Window {
    GridVec lo{};
    GridVec hi{};
    int dim = 3;

    bool contains_anchor(const GridVec& a) const {
        for (int i = 0; i < dim; ++i)
            if (a[i] < lo[i] || a[i] >= hi[i]) return false;
        return true;
    }
    /// Vertex coordinates live in [lo, hi] (closed).
    bool contains_vertex(const GridVec& v) const {
        for (int i = 0; i < dim; ++i)
            if (v[i] < lo[i] || v[i] > hi[i]) return false;
        return true;
    }
    std::int64_t cube_count() const {
        std::int64_t n = 1;
        for (int i = 0; i < dim; ++i) n *= std::max<std::int64_t>(0, std::int64_t{hi[i]} - lo[i]);
        return n;
    }
    Window padded(int pad) const {
        Window w = *this;
        for (int i = 0; i < dim; ++i) {
            w.lo[i] -= pad;
            w.hi[i] += pad;
        }
        return w;
    }
};

/// Cube of side `half` in anchor units around the origin, d = 3.
Window symmetric_window(int half, int dim = 3);

CellKey make_cell(std::initializer_list<std::int32_t> anchor, std::initializer_list<int> axes);

/// Unit d-cube of the lattice with the given anchor.
CellKey make_cube(const GridVec& anchor, int dim);

/// Geometric support of `c` at scale `s`: extent 1/m along each spanned axis.
Box cell_support(const CellKey& c, Scale s);

/// All k-faces of `c`, canonical, deduplicated;
/// count = binom(dim, k) * 2^(dim-k). Throws InputError for k out of range.
std::vector<CellKey> faces_of(const CellKey& c, int k);

/// All k-cells of the ambient d-dimensional cubulation having `c` as a face;
/// count = binom(d - dim, k - dim) * 2^(k-dim). Throws InputError for k out
/// of range or d > kMaxDim.
std::vector<CellKey> cofaces_of(const CellKey& c, int k, int ambient_dim);

} // namespace cubeknot

#endif
