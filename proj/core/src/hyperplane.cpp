#include "cubeknot/hyperplane.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "cubeknot/geometry.hpp"
#include "cubeknot/voxel.hpp"

namespace cubeknot {

namespace {

double norm(const std::array<double, kMaxDim>& v, int dim) {
    double s = 0;
    for (int i = 0; i < dim; ++i) s += v[i] * v[i];
    return std::sqrt(s);
}

// min/max of <v, n> over the 2^d vertices of the unit cube at `a`, lattice
// units. Equivalent to the per-vertex enumeration: the extremes are attained
// by picking the corner per axis by the sign of n_i.
void cube_dot_range(const GridVec& a, const Hyperplane& p, double& mn, double& mx) {
    mn = mx = 0.0;
    for (int i = 0; i < p.dim; ++i) {
        const double base = p.normal[i] * a[i];
        if (p.normal[i] >= 0) {
            mn += base;
            mx += base + p.normal[i];
        } else {
            mn += base + p.normal[i];
            mx += base;
        }
    }
}

template <typename Fn>
void for_each_anchor(const Window& w, Fn&& fn) {
    GridVec a = w.lo;
    if (w.cube_count() == 0) return;
    for (;;) {
        fn(a);
        int i = 0;
        for (; i < w.dim; ++i) {
            if (++a[i] < w.hi[i]) break;
            a[i] = w.lo[i];
        }
        if (i == w.dim) return;
    }
}

} // namespace

Hyperplane make_plane(std::initializer_list<double> normal, double offset) {
    std::array<double, kMaxDim> n{};
    int i = 0;
    if (normal.size() > kMaxDim) throw InputError("make_plane: dimension above kMaxDim");
    for (double v : normal) n[i++] = v;
    return make_plane(n, offset, i);
}

Hyperplane make_plane(const std::array<double, kMaxDim>& normal, double offset, int dim) {
    if (dim < 1 || dim > kMaxDim) throw InputError("make_plane: bad dimension");
    const double len = norm(normal, dim);
    if (len < 1e-12) throw InputError("make_plane: zero normal");
    Hyperplane p;
    p.dim = dim;
    // Rescaling the equation keeps the same plane; a unit input keeps the
    // offset bit-exact.
    if (std::abs(len - 1.0) <= 1e-12) {
        for (int i = 0; i < dim; ++i) p.normal[i] = normal[i];
        p.offset = offset;
    } else {
        for (int i = 0; i < dim; ++i) p.normal[i] = normal[i] / len;
        p.offset = offset / len;
    }
    return p;
}

double lattice_vertex_side(const Hyperplane& p, const GridVec& v, Scale s) {
    double d = -p.offset * s.m;
    for (int i = 0; i < p.dim; ++i) d += p.normal[i] * v[i];
    return d;
}

std::vector<CellKey> plane_cubes(const Hyperplane& p, Scale s, const Window& w) {
    if (w.cube_count() <= 0) throw InputError("plane_cubes: empty window");
    const double off = p.offset * s.m;
    std::vector<CellKey> out;
    for_each_anchor(w, [&](const GridVec& a) {
        double mn, mx;
        cube_dot_range(a, p, mn, mx);
        if (mn <= off + kLatticeEps && mx >= off - kLatticeEps)
            out.push_back(make_cube(a, p.dim));
    });
    std::sort(out.begin(), out.end());
    return out;
}

CellKey nearest_face(const CellKey& cube, const Hyperplane& p, Scale s) {
    const int d = p.dim;
    if (cube.dim() != d) throw InputError("nearest_face: cell is not a top-dimensional cube");
    const double off = p.offset * s.m;

    const int nv = 1 << d;
    std::vector<double> side(nv);
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    for (int vbits = 0; vbits < nv; ++vbits) {
        double dot = -off;
        for (int i = 0; i < d; ++i) dot += p.normal[i] * (cube.anchor[i] + ((vbits >> i) & 1));
        side[vbits] = dot;
        mn = std::min(mn, dot);
        mx = std::max(mx, dot);
    }
    if (mn <= kLatticeEps && mx >= -kLatticeEps)
        throw InputError("nearest_face: cube meets the plane (distance is zero)");

    double best = std::numeric_limits<double>::infinity();
    for (int vbits = 0; vbits < nv; ++vbits) best = std::min(best, std::abs(side[vbits]));

    // Span of the argmin vertex set.
    GridVec lo = cube.anchor;
    std::uint8_t axes = 0;
    int count = 0;
    GridVec first{};
    for (int vbits = 0; vbits < nv; ++vbits) {
        if (std::abs(side[vbits]) > best + kLatticeEps) continue;
        GridVec v = cube.anchor;
        for (int i = 0; i < d; ++i) v[i] += (vbits >> i) & 1;
        if (count == 0) {
            first = v;
            lo = v;
        } else {
            for (int i = 0; i < d; ++i) {
                if (v[i] != first[i]) axes |= static_cast<std::uint8_t>(1u << i);
                lo[i] = std::min(lo[i], v[i]);
            }
        }
        ++count;
    }
    if (count != (1 << std::popcount(axes)))
        throw InvariantError("nearest_face: argmin vertex set is not a face of the cube");
    CellKey f;
    f.anchor = lo;
    f.axes = axes;
    return f;
}

CrossingInterval line_crossing_interval(const Hyperplane& p, const std::array<double, 3>& k,
                                        const std::vector<CellKey>& qp, Scale s) {
    if (p.dim != 3) throw InputError("line_crossing_interval: implemented for d = 3");
    const Eigen::Vector3d n(p.normal[0], p.normal[1], p.normal[2]);
    const Eigen::Vector3d origin(k[0] * s.m, k[1] * s.m, k[2] * s.m);

    if (std::abs(n.dot(origin) - p.offset * s.m) > 1e-6)
        throw InputError("line_crossing_interval: point is not on the plane");

    std::vector<Interval> pieces;
    pieces.reserve(64);
    const double reject2 = 0.75 * (1.0 + 1e-6);  // squared cube half-diagonal
    for (const CellKey& c : qp) {
        const Eigen::Vector3d center(c.anchor[0] + 0.5, c.anchor[1] + 0.5, c.anchor[2] + 0.5);
        const Eigen::Vector3d wvec = center - origin;
        const double perp2 = wvec.squaredNorm() - wvec.dot(n) * wvec.dot(n);
        if (perp2 > reject2) continue;
        if (auto iv = line_unit_cube_interval(origin, n, c.anchor)) pieces.push_back(*iv);
    }
    if (pieces.empty())
        throw InvariantError("line_crossing_interval: line misses the cube set (window too small?)");

    const auto merged = merge_intervals(std::move(pieces));
    if (merged.size() != 1)
        throw InvariantError("line_crossing_interval: crossing is disconnected (" +
                             std::to_string(merged.size()) + " components) — this should be impossible");
    const Interval j = merged.front();
    if (!(j.lo < 0.0 && j.hi > 0.0))
        throw InvariantError("line_crossing_interval: plane point is not interior to the crossing");
    return {j.lo / s.m, j.hi / s.m};
}

namespace {

struct GridVecHash {
    std::size_t operator()(const GridVec& v) const {
        std::uint64_t h = 0x12345678ULL;
        for (int i = 0; i < kMaxDim; ++i)
            h = h * 0x100000001b3ULL + static_cast<std::uint32_t>(v[i]);
        return static_cast<std::size_t>(h);
    }
};

} // namespace

LatticePath plane_pair_cycle(const Hyperplane& p1, const Hyperplane& p2, Scale s, const Window& w) {
    return plane_pair_cycle_artifacts(p1, p2, s, w).path;
}

PlanePairArtifacts plane_pair_cycle_artifacts(const Hyperplane& p1, const Hyperplane& p2, Scale s,
                                              const Window& w) {
    if (p1.dim != 3 || p2.dim != 3) throw InputError("plane_pair_cycle: implemented for d = 3");
    double dot = 0;
    for (int i = 0; i < 3; ++i) dot += p1.normal[i] * p2.normal[i];
    if (std::abs(dot) > 1e-9) throw InputError("plane_pair_cycle: planes are non-orthogonal");
    if (w.cube_count() <= 0) throw InputError("plane_pair_cycle: empty window");

    // Cube tube of P1 on a padded window, so that adjacency near the output
    // region is never clipped.
    const Window wp = w.padded(3);
    CubeSet q1{s, plane_cubes(p1, s, wp)};
    if (q1.cubes.empty()) throw InputError("plane_pair_cycle: window does not meet P1");

    auto comps = extract_boundary(q1, wp);
    if (comps.size() != 2)
        throw InvariantError("plane_pair_cycle: expected 2 boundary components, got " +
                             std::to_string(comps.size()) + " (window too small?)");

    // E = the component on the positive side of P1.
    const CubicalSurface* e = nullptr;
    for (const auto& comp : comps) {
        const Box b = cell_support(comp.squares.front(), Scale{1});
        double centroid = -p1.offset * s.m;
        for (int i = 0; i < 3; ++i) centroid += p1.normal[i] * 0.5 * (b.lo[i] + b.hi[i]);
        if (centroid > 0) e = &comp;
    }
    if (!e) throw InvariantError("plane_pair_cycle: no boundary component on the positive side of P1");

    // B = squares of E meeting P2 (vertex sign test, touching counts).
    const double off2 = p2.offset * s.m;
    std::vector<char> in_band(e->squares.size(), 0);
    for (std::size_t i = 0; i < e->squares.size(); ++i) {
        const CellKey& sq = e->squares[i];
        double mn = std::numeric_limits<double>::infinity(), mx = -mn;
        for (int corner = 0; corner < 4; ++corner) {
            GridVec v = sq.anchor;
            int bit = 0;
            for (int ax = 0; ax < 3; ++ax)
                if (sq.spans(ax)) {
                    v[ax] += (corner >> bit) & 1;
                    ++bit;
                }
            double sv = -off2;
            for (int ax = 0; ax < 3; ++ax) sv += p2.normal[ax] * v[ax];
            mn = std::min(mn, sv);
            mx = std::max(mx, sv);
        }
        if (mn <= kLatticeEps && mx >= -kLatticeEps) in_band[i] = 1;
    }
    if (std::none_of(in_band.begin(), in_band.end(), [](char c) { return c != 0; }))
        throw InputError("plane_pair_cycle: window does not meet P1 n P2");

    // Boundary edges of B inside E, kept only on the positive side of P2 and
    // clipped to the caller's window.
    std::vector<std::pair<GridVec, GridVec>> kept;
    std::vector<CellKey> kept_cells;
    for (std::size_t i = 0; i < e->squares.size(); ++i) {
        if (!in_band[i]) continue;
        for (int slot = 0; slot < 4; ++slot) {
            const std::int32_t nb = e->neighbors[i][slot];
            if (nb < 0 || in_band[nb]) continue;
            auto [v0, v1] = e->edge_vertices(static_cast<int>(i), slot);
            double mid = -off2;
            for (int ax = 0; ax < 3; ++ax) mid += p2.normal[ax] * 0.5 * (v0[ax] + v1[ax]);
            if (mid <= 0) continue;
            if (!w.contains_vertex(v0) || !w.contains_vertex(v1)) continue;
            kept.push_back({v0, v1});
            kept_cells.push_back(e->edge_cell(static_cast<int>(i), slot));
        }
    }
    if (kept.empty()) throw InputError("plane_pair_cycle: window too small to contain the path");

    // Order the edges into a path by walking vertex adjacency.
    std::unordered_map<GridVec, std::vector<int>, GridVecHash> at_vertex;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        at_vertex[kept[i].first].push_back(static_cast<int>(i));
        at_vertex[kept[i].second].push_back(static_cast<int>(i));
    }
    for (const auto& [v, es] : at_vertex)
        if (es.size() > 2)
            throw InvariantError("plane_pair_cycle: path is not simple at a vertex");

    // Start at the lexicographically smallest endpoint; if the in-window
    // part closed up into a loop, at the smallest vertex overall.
    GridVec start{};
    bool have_start = false;
    for (const auto& [v, es] : at_vertex) {
        if (es.size() != 1) continue;
        if (!have_start || v < start) {
            start = v;
            have_start = true;
        }
    }
    if (!have_start) {
        start = at_vertex.begin()->first;
        for (const auto& [v, es] : at_vertex)
            if (v < start) start = v;
    }

    PlanePairArtifacts result;
    LatticePath& path = result.path;
    std::vector<char> used(kept.size(), 0);
    GridVec cur = start;
    path.vertices.push_back(cur);
    for (;;) {
        int next_edge = -1;
        for (int ei : at_vertex[cur])
            if (!used[ei]) next_edge = next_edge < 0 ? ei : std::min(next_edge, ei);
        if (next_edge < 0) break;
        used[next_edge] = 1;
        const auto& [a, b] = kept[next_edge];
        cur = (a == cur) ? b : a;
        path.edges.push_back(kept_cells[next_edge]);
        path.vertices.push_back(cur);
    }
    if (path.edges.size() != kept.size())
        throw InvariantError("plane_pair_cycle: boundary edges form more than one path component");

    result.e_component = e->squares;
    for (std::size_t i = 0; i < e->squares.size(); ++i)
        if (in_band[i]) result.band.push_back(e->squares[i]);
    return result;
}

} // namespace cubeknot
