#include "cubeknot/voxel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "cubeknot/parallel.hpp"
#include "cubeknot/rng.hpp"

namespace cubeknot {

bool CubeSet::contains(const CellKey& c) const {
    return std::binary_search(cubes.begin(), cubes.end(), c);
}

bool CubeSet::contains_anchor(const GridVec& a) const {
    return contains(make_cube(a, 3));
}

CubeSet cubes_meeting(const TriMesh& mesh, Scale s, int threads) {
    if (mesh.triangles.empty()) throw InputError("cubes_meeting: empty mesh");

    const int nchunks = resolve_threads(threads);
    std::vector<std::vector<CellKey>> partial(std::min<std::size_t>(nchunks, mesh.triangles.size()));

    parallel_chunks(mesh.triangles.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        std::vector<CellKey>& out = partial[chunk];
        for (std::size_t t = begin; t < end; ++t) {
            const auto& tri = mesh.triangles[t];
            const Eigen::Vector3d a = mesh.vertices[tri[0]] * s.m;
            const Eigen::Vector3d b = mesh.vertices[tri[1]] * s.m;
            const Eigen::Vector3d c = mesh.vertices[tri[2]] * s.m;

            // A cube can meet the triangle only if its anchor lies in the
            // triangle's bounding box dilated by one lattice unit.
            GridVec lo{}, hi{};
            for (int i = 0; i < 3; ++i) {
                const double mn = std::min({a[i], b[i], c[i]});
                const double mx = std::max({a[i], b[i], c[i]});
                lo[i] = static_cast<std::int32_t>(std::ceil(mn - 1.0 - kLatticeEps));
                hi[i] = static_cast<std::int32_t>(std::floor(mx + kLatticeEps));
            }
            GridVec anchor{};
            for (anchor[0] = lo[0]; anchor[0] <= hi[0]; ++anchor[0])
                for (anchor[1] = lo[1]; anchor[1] <= hi[1]; ++anchor[1])
                    for (anchor[2] = lo[2]; anchor[2] <= hi[2]; ++anchor[2])
                        if (triangle_cube_overlap(a, b, c, anchor)) out.push_back(make_cube(anchor, 3));
        }
    });

    CubeSet set;
    set.scale = s;
    std::size_t total = 0;
    for (const auto& p : partial) total += p.size();
    set.cubes.reserve(total);
    for (const auto& p : partial) set.cubes.insert(set.cubes.end(), p.begin(), p.end());
    std::sort(set.cubes.begin(), set.cubes.end());
    set.cubes.erase(std::unique(set.cubes.begin(), set.cubes.end()), set.cubes.end());
    return set;
}

int CubicalSurface::find_square(const CellKey& sq) const {
    auto it = std::lower_bound(squares.begin(), squares.end(), sq);
    if (it == squares.end() || *it != sq) return -1;
    return static_cast<int>(it - squares.begin());
}

namespace {

// Spanned axes u < v of a square.
inline void square_axes(const CellKey& sq, int& u, int& v) {
    u = -1;
    v = -1;
    for (int i = 0; i < 3; ++i)
        if (sq.spans(i)) (u < 0 ? u : v) = i;
}

} // namespace

CellKey CubicalSurface::edge_cell(int i, int slot) const {
    const CellKey& sq = squares[i];
    int u, v;
    square_axes(sq, u, v);
    CellKey e;
    e.anchor = sq.anchor;
    switch (slot) {
        case 0: e.axes = static_cast<std::uint8_t>(1u << u); break;
        case 1: e.axes = static_cast<std::uint8_t>(1u << u); e.anchor[v] += 1; break;
        case 2: e.axes = static_cast<std::uint8_t>(1u << v); break;
        default: e.axes = static_cast<std::uint8_t>(1u << v); e.anchor[u] += 1; break;
    }
    return e;
}

std::pair<GridVec, GridVec> CubicalSurface::edge_vertices(int i, int slot) const {
    const CellKey e = edge_cell(i, slot);
    int axis = 0;
    while (!e.spans(axis)) ++axis;
    GridVec v0 = e.anchor, v1 = e.anchor;
    v1[axis] += 1;
    return {v0, v1};
}

bool CubicalSurface::adjacent(int i, int j) const {
    for (int slot = 0; slot < 4; ++slot)
        if (neighbors[i][slot] == j) return true;
    return false;
}

int CubicalSurface::partner_slot(int i, int slot) const {
    const std::int32_t j = neighbors[i][slot];
    if (j < 0) return -1;
    const CellKey edge = edge_cell(i, slot);
    for (int k = 0; k < 4; ++k)
        if (neighbors[j][k] == i && edge_cell(j, k) == edge) return k;
    throw InvariantError("CubicalSurface: asymmetric adjacency");
}

namespace {

struct BoundarySquare {
    CellKey cell;
    GridVec solid_anchor;
    std::uint8_t solid_up;
};

struct EdgeUse {
    CellKey edge;
    std::int32_t square;
    std::int8_t slot;
};

// Corner c in {0..3} of a square = anchor + (c&1)*e_u + (c>>1)*e_v.
inline GridVec corner_vertex(const CellKey& sq, int corner) {
    int u, v;
    square_axes(sq, u, v);
    GridVec out = sq.anchor;
    if (corner & 1) out[u] += 1;
    if (corner & 2) out[v] += 1;
    return out;
}

// The two corners covered by an edge slot (slot scheme of edge_cell).
inline std::pair<int, int> slot_corners(int slot) {
    switch (slot) {
        case 0: return {0, 1};
        case 1: return {2, 3};
        case 2: return {0, 2};
        default: return {1, 3};
    }
}

struct DisjointSet {
    std::vector<std::int32_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::int32_t find(std::int32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::int32_t a, std::int32_t b) { parent[find(a)] = find(b); }
};

} // namespace

int subcomplex_euler_characteristic(const CubicalSurface& surf, const std::vector<char>& mask) {
    const std::size_t total = surf.squares.size();
    if (mask.size() != total) throw InputError("subcomplex_euler_characteristic: mask size mismatch");

    std::size_t f = 0;
    for (char m : mask)
        if (m) ++f;

    DisjointSet corners(4 * total);
    std::size_t paired = 0, unpaired = 0, live_corners = 0;
    for (std::size_t i = 0; i < total; ++i) {
        if (!mask[i]) continue;
        live_corners += 4;
        for (int slot = 0; slot < 4; ++slot) {
            const std::int32_t j = surf.neighbors[i][slot];
            if (j < 0 || !mask[j]) {
                ++unpaired;
                continue;
            }
            if (static_cast<std::size_t>(j) < i) continue;  // counted from the other side
            if (static_cast<std::size_t>(j) == i)
                throw InvariantError("boundary extraction: square adjacent to itself");
            ++paired;
            const int jslot = surf.partner_slot(static_cast<int>(i), slot);
            auto [ia, ib] = slot_corners(slot);
            auto [ja, jb] = slot_corners(jslot);
            const GridVec va = corner_vertex(surf.squares[i], ia);
            const GridVec wa = corner_vertex(surf.squares[j], ja);
            if (va == wa) {
                corners.unite(static_cast<std::int32_t>(4 * i + ia), static_cast<std::int32_t>(4 * j + ja));
                corners.unite(static_cast<std::int32_t>(4 * i + ib), static_cast<std::int32_t>(4 * j + jb));
            } else {
                corners.unite(static_cast<std::int32_t>(4 * i + ia), static_cast<std::int32_t>(4 * j + jb));
                corners.unite(static_cast<std::int32_t>(4 * i + ib), static_cast<std::int32_t>(4 * j + ja));
            }
        }
    }
    std::size_t v = 0;
    for (std::size_t i = 0; i < total; ++i) {
        if (!mask[i]) continue;
        for (int c = 0; c < 4; ++c) {
            const auto id = static_cast<std::int32_t>(4 * i + c);
            if (corners.find(id) == id) ++v;
        }
    }
    if (v == 0 && live_corners > 0)
        throw InvariantError("subcomplex_euler_characteristic: lost corner orbits");
    const std::size_t e = paired + unpaired;
    return static_cast<int>(static_cast<std::int64_t>(v) - static_cast<std::int64_t>(e) +
                            static_cast<std::int64_t>(f));
}

std::vector<CubicalSurface> extract_boundary(const CubeSet& solid, const std::optional<Window>& window) {
    if (solid.cubes.empty()) throw InputError("extract_boundary: empty cube set");

    std::vector<BoundarySquare> squares;
    for (const CellKey& cube : solid.cubes) {
        for (int axis = 0; axis < 3; ++axis) {
            for (int side = 0; side < 2; ++side) {
                GridVec nb = cube.anchor;
                nb[axis] += side == 0 ? -1 : 1;
                if (solid.contains_anchor(nb)) continue;
                if (window && !window->contains_anchor(nb)) continue;  // clipped rim
                BoundarySquare bs;
                bs.cell.anchor = cube.anchor;
                if (side == 1) bs.cell.anchor[axis] += 1;
                bs.cell.axes = static_cast<std::uint8_t>(0b111u & ~(1u << axis));
                bs.solid_anchor = cube.anchor;
                bs.solid_up = side == 0 ? 1 : 0;
                squares.push_back(bs);
            }
        }
    }
    if (squares.empty()) throw InvariantError("extract_boundary: solid has no boundary inside the window");
    std::sort(squares.begin(), squares.end(),
              [](const BoundarySquare& a, const BoundarySquare& b) { return a.cell < b.cell; });

    // Resolve adjacency across every lattice edge of the complex.
    std::vector<EdgeUse> uses;
    uses.reserve(squares.size() * 4);
    CubicalSurface all;
    all.scale = solid.scale;
    all.squares.reserve(squares.size());
    for (const auto& bs : squares) all.squares.push_back(bs.cell);
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(squares.size()); ++i)
        for (int slot = 0; slot < 4; ++slot)
            uses.push_back({all.edge_cell(i, slot), i, static_cast<std::int8_t>(slot)});
    std::sort(uses.begin(), uses.end(), [](const EdgeUse& a, const EdgeUse& b) {
        if (a.edge != b.edge) return a.edge < b.edge;
        if (a.square != b.square) return a.square < b.square;
        return a.slot < b.slot;
    });

    std::vector<std::array<std::int32_t, 4>> neighbors(squares.size(), {-1, -1, -1, -1});
    auto link = [&](const EdgeUse& a, const EdgeUse& b) {
        neighbors[a.square][a.slot] = b.square;
        neighbors[b.square][b.slot] = a.square;
    };
    for (std::size_t i = 0; i < uses.size();) {
        std::size_t j = i;
        while (j < uses.size() && uses[j].edge == uses[i].edge) ++j;
        const std::size_t n = j - i;
        if (n == 2) {
            link(uses[i], uses[i + 1]);
        } else if (n == 4) {
            // Pinched edge: two diagonal solid cubes. Pair the squares that
            // bound the same solid cube so each sheet stays on its side.
            int matched = 0;
            for (std::size_t a = i; a < j; ++a)
                for (std::size_t b = a + 1; b < j; ++b)
                    if (squares[uses[a].square].solid_anchor == squares[uses[b].square].solid_anchor) {
                        link(uses[a], uses[b]);
                        ++matched;
                    }
            if (matched != 2)
                throw InvariantError("extract_boundary: unresolvable pinched edge");
        } else if (n == 3) {
            // Possible only when the window clipped one square of a pinch.
            for (std::size_t a = i; a < j; ++a)
                for (std::size_t b = a + 1; b < j; ++b)
                    if (squares[uses[a].square].solid_anchor == squares[uses[b].square].solid_anchor)
                        link(uses[a], uses[b]);
        } else if (n != 1) {
            throw InvariantError("extract_boundary: impossible edge multiplicity " + std::to_string(n));
        }
        i = j;
    }

    // Connected components under the resolved adjacency.
    std::vector<std::int32_t> comp_of(squares.size(), -1);
    std::int32_t ncomp = 0;
    std::vector<std::int32_t> stack;
    for (std::int32_t seed = 0; seed < static_cast<std::int32_t>(squares.size()); ++seed) {
        if (comp_of[seed] >= 0) continue;
        comp_of[seed] = ncomp;
        stack.push_back(seed);
        while (!stack.empty()) {
            const std::int32_t cur = stack.back();
            stack.pop_back();
            for (int slot = 0; slot < 4; ++slot) {
                const std::int32_t nb = neighbors[cur][slot];
                if (nb >= 0 && comp_of[nb] < 0) {
                    comp_of[nb] = ncomp;
                    stack.push_back(nb);
                }
            }
        }
        ++ncomp;
    }

    std::vector<CubicalSurface> out(ncomp);
    std::vector<std::int32_t> local_index(squares.size());
    for (std::int32_t c = 0; c < ncomp; ++c) out[c].scale = solid.scale;
    for (std::size_t i = 0; i < squares.size(); ++i) {
        CubicalSurface& comp = out[comp_of[i]];
        local_index[i] = static_cast<std::int32_t>(comp.squares.size());
        comp.squares.push_back(squares[i].cell);
        comp.solid_up.push_back(squares[i].solid_up);
    }
    for (std::int32_t c = 0; c < ncomp; ++c) out[c].neighbors.resize(out[c].squares.size());
    for (std::size_t i = 0; i < squares.size(); ++i) {
        auto& row = out[comp_of[i]].neighbors[local_index[i]];
        for (int slot = 0; slot < 4; ++slot) {
            const std::int32_t nb = neighbors[i][slot];
            row[slot] = nb < 0 ? -1 : local_index[nb];
        }
    }
    for (auto& comp : out)
        comp.chi = subcomplex_euler_characteristic(comp, std::vector<char>(comp.squares.size(), 1));

    // Deterministic component order: by smallest square.
    std::sort(out.begin(), out.end(),
              [](const CubicalSurface& a, const CubicalSurface& b) { return a.squares.front() < b.squares.front(); });
    return out;
}

std::vector<CubicalSurface> boundary_components(const CubeSet& solid) {
    auto comps = extract_boundary(solid);
    if (comps.size() != 2) {
        std::string diag = "boundary_components: not a bicollar at this scale (m=" +
                           std::to_string(solid.scale.m) + "): " + std::to_string(comps.size()) +
                           " components, sizes";
        for (const auto& c : comps) diag += " " + std::to_string(c.size());
        throw InvariantError(diag, /*retriable=*/true);
    }
    return comps;
}

namespace {

// Uniform hash grid over the curve segments, used to answer
// "is this point within distance r of the centerline".
class SegmentGrid {
public:
    SegmentGrid(const KnotCurve& k, double r) : k_(k), r_(r) {
        double max_len = 0.0;
        const int n = k.size();
        for (int i = 0; i < n; ++i)
            max_len = std::max(max_len, (k.samples[(i + 1) % n] - k.samples[i]).norm());
        cell_ = std::max(r, max_len) + 1e-12;
        for (int i = 0; i < n; ++i) {
            const Eigen::Vector3d a = k.samples[i];
            const Eigen::Vector3d b = k.samples[(i + 1) % n];
            Eigen::Vector3i lo, hi;
            for (int ax = 0; ax < 3; ++ax) {
                lo[ax] = static_cast<int>(std::floor((std::min(a[ax], b[ax]) - r) / cell_));
                hi[ax] = static_cast<int>(std::floor((std::max(a[ax], b[ax]) + r) / cell_));
            }
            for (int x = lo[0]; x <= hi[0]; ++x)
                for (int y = lo[1]; y <= hi[1]; ++y)
                    for (int z = lo[2]; z <= hi[2]; ++z) bins_[key(x, y, z)].push_back(i);
        }
    }

    bool within_r(const Eigen::Vector3d& p) const {
        const int x = static_cast<int>(std::floor(p[0] / cell_));
        const int y = static_cast<int>(std::floor(p[1] / cell_));
        const int z = static_cast<int>(std::floor(p[2] / cell_));
        auto it = bins_.find(key(x, y, z));
        if (it == bins_.end()) return false;
        const int n = k_.size();
        for (int i : it->second) {
            const Eigen::Vector3d& a = k_.samples[i];
            const Eigen::Vector3d& b = k_.samples[(i + 1) % n];
            if (point_segment_distance(p, a, b) < r_) return true;
        }
        return false;
    }

private:
    static std::uint64_t key(int x, int y, int z) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 42) ^
               (static_cast<std::uint64_t>(static_cast<std::uint32_t>(y)) << 21) ^
               static_cast<std::uint32_t>(z);
    }
    const KnotCurve& k_;
    double r_;
    double cell_;
    std::unordered_map<std::uint64_t, std::vector<int>> bins_;
};

} // namespace

void classify_sides(std::vector<CubicalSurface>& components, const KnotCurve& k, double r) {
    if (components.size() != 2) throw InputError("classify_sides: expected exactly 2 components");
    const SegmentGrid grid(k, r);

    for (auto& comp : components) {
        int inner_votes = 0;
        for (const CellKey& sq : comp.squares) {
            Eigen::Vector3d centroid;
            for (int ax = 0; ax < 3; ++ax)
                centroid[ax] = (sq.anchor[ax] + (sq.spans(ax) ? 0.5 : 0.0)) / comp.scale.m;
            if (grid.within_r(centroid)) ++inner_votes;
        }
        if (inner_votes != 0 && inner_votes != comp.size())
            throw InvariantError("classify_sides: mixed inner/outer labels within one component (" +
                                     std::to_string(inner_votes) + "/" + std::to_string(comp.size()) +
                                     ") — scale too coarse",
                                 /*retriable=*/true);
        comp.side = inner_votes ? -1 : +1;
    }
    if (components[0].side == components[1].side)
        throw InvariantError("classify_sides: both components classified as " +
                                 std::string(components[0].side < 0 ? "inner" : "outer"),
                             /*retriable=*/true);
}

Scale choose_scale(const KnotCurve& k, double r, const ScalePolicy& policy) {
    if (policy.kind == ScalePolicy::Kind::Fixed) {
        if (policy.fixed_m < 1) throw InputError("choose_scale: fixed m must be >= 1");
        return Scale{policy.fixed_m};
    }
    if (!(r > 0.0)) throw InputError("choose_scale: tube radius must be positive");
    if (!(k.min_curvature_radius > 0.0))
        throw InputError("choose_scale: curve has vanishing curvature radius; use a fixed scale");

    const double target = 6.0 * std::sqrt(3.0);
    const double need = std::max(target / r, target / k.min_curvature_radius);
    long m = 2;
    while (static_cast<double>(m) < need) {
        m *= 2;
        if (m > (1L << 20))
            throw InputError("choose_scale: required subdivision exceeds 2^20 (tube radius too small)");
    }
    return Scale{static_cast<int>(m)};
}

SquareLookup SquareLookup::build(const CubicalSurface& surf) {
    SquareLookup lk;
    lk.surface = &surf;
    lk.index.reserve(surf.squares.size() * 2);
    for (std::int32_t i = 0; i < surf.size(); ++i) lk.index.emplace(surf.squares[i], i);
    return lk;
}

std::vector<RayHit> ray_surface_crossings(const Eigen::Vector3d& origin_lattice,
                                          const Eigen::Vector3d& dir, const SquareLookup& surf,
                                          double t_min, double t_max, Rng& jitter,
                                          double jitter_mag, int max_attempts) {
    const double edge_eps = 1e-9;
    Eigen::Vector3d o = origin_lattice;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        bool ambiguous = false;
        std::vector<RayHit> hits;
        for (int axis = 0; axis < 3 && !ambiguous; ++axis) {
            if (std::abs(dir[axis]) < 1e-12) continue;
            const int p = (axis + 1) % 3, q = (axis + 2) % 3;
            const double step = dir[axis] > 0 ? 1.0 : -1.0;
            long level = dir[axis] > 0 ? static_cast<long>(std::ceil(o[axis] + t_min * dir[axis]))
                                       : static_cast<long>(std::floor(o[axis] + t_min * dir[axis]));
            for (;; level += static_cast<long>(step)) {
                const double t = (static_cast<double>(level) - o[axis]) / dir[axis];
                if (t <= t_min) continue;
                if (t > t_max) break;
                const Eigen::Vector3d h = o + t * dir;
                const double fp = h[p] - std::floor(h[p]);
                const double fq = h[q] - std::floor(h[q]);
                if (fp < edge_eps || fp > 1.0 - edge_eps || fq < edge_eps || fq > 1.0 - edge_eps) {
                    ambiguous = true;
                    break;
                }
                CellKey sq;
                sq.anchor[axis] = static_cast<std::int32_t>(level);
                sq.anchor[p] = static_cast<std::int32_t>(std::floor(h[p]));
                sq.anchor[q] = static_cast<std::int32_t>(std::floor(h[q]));
                sq.axes = static_cast<std::uint8_t>(0b111u & ~(1u << axis));
                auto it = surf.index.find(sq);
                if (it != surf.index.end()) hits.push_back({t, it->second, h});
            }
        }
        if (!ambiguous) {
            std::sort(hits.begin(), hits.end(), [](const RayHit& a, const RayHit& b) { return a.t < b.t; });
            return hits;
        }
        o = origin_lattice + Eigen::Vector3d(jitter.uniform(-jitter_mag, jitter_mag),
                                             jitter.uniform(-jitter_mag, jitter_mag),
                                             jitter.uniform(-jitter_mag, jitter_mag));
    }
    throw InvariantError("ray_surface_crossings: could not resolve edge-grazing ray after jitter retries");
}

BicollarRayReport bicollar_ray_check(const TubeSurface& m, const CubicalSurface& plus,
                                     const CubicalSurface& minus, Scale s, int n_samples,
                                     std::uint64_t seed, int threads) {
    const SquareLookup plus_lk = SquareLookup::build(plus);
    const SquareLookup minus_lk = SquareLookup::build(minus);
    const double t_max = 4.0 * std::sqrt(3.0);  // lattice units, per the slab bound

    std::vector<int> fail(n_samples, 0), retries(n_samples, 0);
    parallel_chunks(static_cast<std::size_t>(n_samples), threads, [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t i = b; i < e; ++i) {
            Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
            const int vi = static_cast<int>(rng.uniform_int(0, static_cast<std::int64_t>(m.mesh.vertices.size()) - 1));
            const Eigen::Vector3d origin = m.mesh.vertices[vi] * s.m;
            const Eigen::Vector3d dir = m.vertex_normals[vi];
            try {
                auto up = ray_surface_crossings(origin, dir, plus_lk, 1e-9, t_max, rng, 1e-6, 16);
                auto dn = ray_surface_crossings(origin, -dir, minus_lk, 1e-9, t_max, rng, 1e-6, 16);
                if (up.size() != 1 || dn.size() != 1) fail[i] = 1;
            } catch (const InvariantError&) {
                fail[i] = 1;
            }
        }
    });

    BicollarRayReport report;
    report.samples = n_samples;
    for (int i = 0; i < n_samples; ++i) {
        report.failures += fail[i];
        report.jitter_retries += retries[i];
    }
    return report;
}

std::vector<Interval> line_cubeset_intervals(const Eigen::Vector3d& origin,
                                             const Eigen::Vector3d& dir, const CubeSet& solid) {
    const Eigen::Vector3d o = origin * solid.scale.m;
    const Eigen::Vector3d n = dir.normalized();
    std::vector<Interval> pieces;
    const double reject2 = 0.75 * (1.0 + 1e-6);
    for (const CellKey& c : solid.cubes) {
        const Eigen::Vector3d center(c.anchor[0] + 0.5, c.anchor[1] + 0.5, c.anchor[2] + 0.5);
        const Eigen::Vector3d w = center - o;
        const double perp2 = w.squaredNorm() - w.dot(n) * w.dot(n);
        if (perp2 > reject2) continue;
        if (auto iv = line_unit_cube_interval(o, n, c.anchor)) pieces.push_back(*iv);
    }
    auto merged = merge_intervals(std::move(pieces));
    for (auto& iv : merged) {
        iv.lo /= solid.scale.m;
        iv.hi /= solid.scale.m;
    }
    return merged;
}

} // namespace cubeknot
