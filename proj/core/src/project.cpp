#include "cubeknot/project.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <unordered_set>

#include "cubeknot/parallel.hpp"

namespace cubeknot {

void validate_cycle(const LatticeCycle& cycle) {
    const int n = cycle.size();
    if (n < 4) throw InvariantError("lattice cycle: fewer than 4 vertices");
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(n * 2);
    for (int i = 0; i < n; ++i) {
        const GridVec& a = cycle.vertices[i];
        const GridVec& b = cycle.vertices[(i + 1) % n];
        int diff_axis = -1;
        for (int ax = 0; ax < kMaxDim; ++ax) {
            if (a[ax] == b[ax]) continue;
            if (std::abs(a[ax] - b[ax]) != 1 || diff_axis >= 0)
                throw InvariantError("lattice cycle: step is not a single unit edge");
            diff_axis = ax;
        }
        if (diff_axis < 0) throw InvariantError("lattice cycle: repeated consecutive vertex");
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (int ax = 0; ax < kMaxDim; ++ax)
            h = (h ^ static_cast<std::uint32_t>(a[ax])) * 0x100000001b3ULL;
        if (!seen.insert(h).second) {
            // Hash collision or repeat: confirm by exact scan.
            for (int j = 0; j < i; ++j)
                if (cycle.vertices[j] == a) throw InvariantError("lattice cycle: vertex repeated (not simple)");
        }
    }
}

bool cycle_edges_on_cube_boundary(const LatticeCycle& cycle, const CubeSet& solid) {
    const int n = cycle.size();
    for (int i = 0; i < n; ++i) {
        const GridVec& a = cycle.vertices[i];
        const GridVec& b = cycle.vertices[(i + 1) % n];
        CellKey edge;
        for (int ax = 0; ax < kMaxDim; ++ax) {
            edge.anchor[ax] = std::min(a[ax], b[ax]);
            if (a[ax] != b[ax]) edge.axes = static_cast<std::uint8_t>(1u << ax);
        }
        bool on_boundary = false;
        for (const CellKey& cube : cofaces_of(edge, 3, 3))
            if (solid.contains(cube)) {
                on_boundary = true;
                break;
            }
        if (!on_boundary) return false;
    }
    return true;
}

namespace {

struct Hit {
    Eigen::Vector3d point;  // world
    std::int32_t square;
};

class RayCaster {
public:
    RayCaster(const CubicalSurface& plus, Scale s, std::uint64_t seed)
        : lookup_(SquareLookup::build(plus)), scale_(s), seed_(seed) {}

    Hit cast(const Eigen::Vector3d& point, const Eigen::Vector3d& normal, std::uint64_t key) const {
        Rng rng(seed_ ^ (0x9e3779b97f4a7c15ULL * (key + 1)));
        const Eigen::Vector3d origin = point * scale_.m;
        const double t_max = 4.0 * std::sqrt(3.0);
        auto hits = ray_surface_crossings(origin, normal, lookup_, 1e-9, t_max, rng, 1e-6, 16);
        if (hits.empty())
            throw InvariantError("push_to_surface: outward ray missed the '+' component within the slab"
                                 " — bicollar violation at this scale",
                                 /*retriable=*/true);
        return {hits.front().point / scale_.m, hits.front().square};
    }

private:
    SquareLookup lookup_;
    Scale scale_;
    std::uint64_t seed_;
};

bool same_or_adjacent(const CubicalSurface& surf, std::int32_t a, std::int32_t b) {
    return a == b || surf.adjacent(a, b);
}

} // namespace

SurfacePath push_to_surface(const std::vector<Eigen::Vector3d>& section,
                            const std::vector<Eigen::Vector3d>& section_normals,
                            const CubicalSurface& plus, Scale s, std::uint64_t jitter_seed,
                            bool closed) {
    const int n = static_cast<int>(section.size());
    if (n < 2 || section_normals.size() != section.size())
        throw InputError("push_to_surface: bad section");

    const RayCaster caster(plus, s, jitter_seed);

    std::vector<Hit> base(n);
    parallel_chunks(static_cast<std::size_t>(n), 0, [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t i = b; i < e; ++i)
            base[i] = caster.cast(section[i], section_normals[i], i);
    });

    SurfacePath path;
    path.closed = closed;

    std::uint64_t bisect_key = static_cast<std::uint64_t>(n);
    std::function<void(const Eigen::Vector3d&, const Eigen::Vector3d&, const Hit&,
                       const Eigen::Vector3d&, const Eigen::Vector3d&, const Hit&, int)>
        heal = [&](const Eigen::Vector3d& pa, const Eigen::Vector3d& na, const Hit& ha,
                   const Eigen::Vector3d& pb, const Eigen::Vector3d& nb, const Hit& hb, int depth) {
            if (same_or_adjacent(plus, ha.square, hb.square)) return;
            if (depth == 0)
                throw InvariantError("push_to_surface: adaptive bisection exhausted at depth 12",
                                     /*retriable=*/true);
            const Eigen::Vector3d pm = 0.5 * (pa + pb);
            const Eigen::Vector3d nm = (na + nb).normalized();
            const Hit hm = caster.cast(pm, nm, bisect_key++);
            heal(pa, na, ha, pm, nm, hm, depth - 1);
            path.points.push_back(hm.point);
            path.squares.push_back(hm.square);
            heal(pm, nm, hm, pb, nb, hb, depth - 1);
        };

    const int last = closed ? n : n - 1;
    for (int i = 0; i < last; ++i) {
        const int j = (i + 1) % n;
        path.points.push_back(base[i].point);
        path.squares.push_back(base[i].square);
        heal(section[i], section_normals[i], base[i], section[j], section_normals[j], base[j], 12);
    }
    if (!closed) {
        path.points.push_back(base[n - 1].point);
        path.squares.push_back(base[n - 1].square);
    }
    return path;
}

std::vector<std::int32_t> face_tube(const SurfacePath& path, const CubicalSurface& surface) {
    const int n = path.size();
    if (n < 2) throw InputError("face_tube: path too short");

    const int pairs = path.closed ? n : n - 1;
    for (int i = 0; i < pairs; ++i) {
        const std::int32_t a = path.squares[i], b = path.squares[(i + 1) % n];
        if (!same_or_adjacent(surface, a, b))
            throw InvariantError("face_tube: consecutive carrying squares are not edge-adjacent"
                                 " (sampling too sparse)",
                                 /*retriable=*/true);
    }

    std::vector<std::int32_t> tube(path.squares.begin(), path.squares.end());
    std::sort(tube.begin(), tube.end());
    tube.erase(std::unique(tube.begin(), tube.end()), tube.end());

    // Edge-connectivity within the tube.
    std::vector<char> in_tube(surface.size(), 0);
    for (auto i : tube) in_tube[i] = 1;
    std::vector<std::int32_t> stack{tube.front()};
    std::unordered_set<std::int32_t> visited{tube.front()};
    while (!stack.empty()) {
        const std::int32_t cur = stack.back();
        stack.pop_back();
        for (int slot = 0; slot < 4; ++slot) {
            const std::int32_t nb = surface.neighbors[cur][slot];
            if (nb >= 0 && in_tube[nb] && visited.insert(nb).second) stack.push_back(nb);
        }
    }
    if (visited.size() != tube.size())
        throw InvariantError("face_tube: tube is not edge-connected (sampling too sparse)",
                             /*retriable=*/true);
    return tube;
}

namespace {

struct EdgeUseRef {
    std::int32_t square;
    std::int8_t slot;

    friend bool operator==(const EdgeUseRef&, const EdgeUseRef&) = default;
};

// Walks of the boundary edge-uses of a masked region of the surface. At each
// boundary vertex the next edge is found by fanning through the region's
// squares around the vertex, which keeps pinched sheets separate.
class BoundaryTracer {
public:
    BoundaryTracer(const CubicalSurface& surf, const std::vector<char>& mask)
        : surf_(surf), mask_(mask) {}

    struct Walk {
        std::vector<GridVec> vertices;       // closed: first == last omitted
        std::vector<EdgeUseRef> edge_uses;   // parallel to vertices
    };

    std::vector<Walk> trace() {
        collect_boundary_uses();
        std::vector<Walk> walks;
        for (const auto& start : uses_) {
            if (used_.count(key(start))) continue;
            walks.push_back(walk_from(start));
        }
        return walks;
    }

private:
    static std::uint64_t key(const EdgeUseRef& e) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.square)) << 2) | e.slot;
    }

    bool is_boundary(std::int32_t square, int slot) const {
        const std::int32_t nb = surf_.neighbors[square][slot];
        return nb < 0 || !mask_[nb];
    }

    void collect_boundary_uses() {
        for (std::int32_t i = 0; i < surf_.size(); ++i) {
            if (!mask_[i]) continue;
            for (int slot = 0; slot < 4; ++slot)
                if (is_boundary(i, slot)) uses_.push_back({i, static_cast<std::int8_t>(slot)});
        }
    }

    // The other slot of `square` whose edge contains vertex v.
    int other_slot_at(std::int32_t square, int slot, const GridVec& v) const {
        for (int k = 0; k < 4; ++k) {
            if (k == slot) continue;
            auto [a, b] = surf_.edge_vertices(square, k);
            if (a == v || b == v) return k;
        }
        throw InvariantError("skeleton trace: vertex not on square");
    }

    // Fan around v from (square, slot) through interior edges until the next
    // boundary edge-use.
    EdgeUseRef next_use(EdgeUseRef cur, const GridVec& v) const {
        std::int32_t sq = cur.square;
        int slot = other_slot_at(sq, cur.slot, v);
        for (int guard = 0; guard < 64; ++guard) {
            if (is_boundary(sq, slot)) return {sq, static_cast<std::int8_t>(slot)};
            const int pslot = surf_.partner_slot(sq, slot);
            sq = surf_.neighbors[sq][slot];
            slot = other_slot_at(sq, pslot, v);
        }
        throw InvariantError("skeleton trace: runaway fan around a vertex");
    }

    Walk walk_from(const EdgeUseRef& start) {
        Walk w;
        auto [v0, v1] = surf_.edge_vertices(start.square, start.slot);
        // Deterministic initial direction: from the smaller vertex.
        GridVec from = std::min(v0, v1), to = std::max(v0, v1);
        EdgeUseRef cur = start;
        for (int guard = 0; guard < 1 << 22; ++guard) {
            w.vertices.push_back(from);
            w.edge_uses.push_back(cur);
            used_.insert(key(cur));
            const EdgeUseRef nxt = next_use(cur, to);
            auto [a, b] = surf_.edge_vertices(nxt.square, nxt.slot);
            const GridVec nto = (a == to) ? b : a;
            from = to;
            to = nto;
            cur = nxt;
            if (cur == start) return w;
        }
        throw InvariantError("skeleton trace: boundary walk did not close");
    }

    const CubicalSurface& surf_;
    const std::vector<char>& mask_;
    std::vector<EdgeUseRef> uses_;
    std::unordered_set<std::uint64_t> used_;
};

// Null-homotopy surrogate: the loop bounds a region of at most two squares
// inside the tube.
bool loop_is_small_wart(const CubicalSurface& surf, const std::vector<char>& mask,
                        const std::vector<EdgeUseRef>& loop_uses) {
    std::unordered_set<std::uint64_t> blocked;
    auto edge_key = [&](const CellKey& e) {
        std::uint64_t h = e.axes;
        for (int i = 0; i < kMaxDim; ++i) h = h * 0x100000001b3ULL + static_cast<std::uint32_t>(e.anchor[i]);
        return h;
    };
    for (const auto& use : loop_uses) blocked.insert(edge_key(surf.edge_cell(use.square, use.slot)));

    std::unordered_set<std::int32_t> region;
    std::vector<std::int32_t> stack;
    for (const auto& use : loop_uses) {
        if (region.insert(use.square).second) stack.push_back(use.square);
    }
    while (!stack.empty()) {
        if (region.size() > 2) return false;
        const std::int32_t cur = stack.back();
        stack.pop_back();
        for (int slot = 0; slot < 4; ++slot) {
            const std::int32_t nb = surf.neighbors[cur][slot];
            if (nb < 0 || !mask[nb]) continue;
            if (blocked.count(edge_key(surf.edge_cell(cur, slot)))) continue;
            if (region.insert(nb).second) stack.push_back(nb);
        }
    }
    return region.size() <= 2;
}

} // namespace

TubeBoundary skeleton_cycle(const std::vector<std::int32_t>& tube, const CubicalSurface& surface,
                            const SurfacePath& path) {
    if (tube.empty()) throw InputError("skeleton_cycle: empty tube");
    std::vector<char> mask(surface.size(), 0);
    for (auto i : tube) mask[i] = 1;

    const int chi = subcomplex_euler_characteristic(surface, mask);
    if (chi != 0)
        throw InvariantError("skeleton_cycle: tube is not an annulus (chi = " + std::to_string(chi) + ")",
                             /*retriable=*/true);

    BoundaryTracer tracer(surface, mask);
    auto walks = tracer.trace();
    if (walks.size() != 2)
        throw InvariantError("skeleton_cycle: tube is not an annulus (" + std::to_string(walks.size()) +
                                 " boundary curves)",
                             /*retriable=*/true);

    TubeBoundary result;

    // De-wart and convert each walk into a simple closed vertex cycle.
    std::vector<std::vector<GridVec>> cycles(2);
    for (int w = 0; w < 2; ++w) {
        auto verts = walks[w].vertices;
        auto uses = walks[w].edge_uses;
        for (;;) {
            // Locate a repeated vertex, if any.
            std::map<GridVec, int> first_at;
            int rep_a = -1, rep_b = -1;
            for (int i = 0; i < static_cast<int>(verts.size()); ++i) {
                auto [it, fresh] = first_at.try_emplace(verts[i], i);
                if (!fresh) {
                    rep_a = it->second;
                    rep_b = i;
                    break;
                }
            }
            if (rep_a < 0) break;

            // Split into the loop [rep_a, rep_b) and the rest; drop the
            // shorter only when it is a null-homotopic wart.
            std::vector<GridVec> loop_verts(verts.begin() + rep_a, verts.begin() + rep_b);
            std::vector<EdgeUseRef> loop_uses(uses.begin() + rep_a, uses.begin() + rep_b);
            std::vector<GridVec> rest_verts;
            std::vector<EdgeUseRef> rest_uses;
            for (int i = 0; i < static_cast<int>(verts.size()); ++i) {
                if (i >= rep_a && i < rep_b) continue;
                rest_verts.push_back(verts[i]);
                rest_uses.push_back(uses[i]);
            }
            const bool drop_loop = loop_verts.size() <= rest_verts.size();
            const auto& doomed = drop_loop ? loop_uses : rest_uses;
            if (!loop_is_small_wart(surface, mask, doomed))
                throw InvariantError("skeleton_cycle: boundary cycle pinches at a vertex and the pinch"
                                     " loop is not null-homotopic",
                                     /*retriable=*/true);
            ++result.warts_discarded;
            if (drop_loop) {
                verts = std::move(rest_verts);
                uses = std::move(rest_uses);
            } else {
                verts = std::move(loop_verts);
                uses = std::move(loop_uses);
            }
        }
        if (verts.size() < 4)
            throw InvariantError("skeleton_cycle: boundary cycle degenerated while removing pinches",
                                 /*retriable=*/true);
        cycles[w] = std::move(verts);
    }

    // Lattice annulus parity: both boundary cycles have even length.
    if ((cycles[0].size() + cycles[1].size()) % 2 != 0)
        throw InvariantError("skeleton_cycle: boundary cycle lengths have odd sum");

    // Deterministic component choice: smallest lexicographic vertex.
    const GridVec min0 = *std::min_element(cycles[0].begin(), cycles[0].end());
    const GridVec min1 = *std::min_element(cycles[1].begin(), cycles[1].end());
    const int chosen = min0 < min1 ? 0 : 1;

    auto finish = [&](std::vector<GridVec> verts, bool orient) -> LatticeCycle {
        if (orient) {
            // Orient along the path: the winding of nearest-path-point
            // indices around the cycle has degree +1 when aligned.
            const int np = path.size();
            long winding = 0;
            int prev_idx = -1;
            for (const auto& v : verts) {
                Eigen::Vector3d p(v[0], v[1], v[2]);
                p /= surface.scale.m;
                int best = 0;
                double best_d = std::numeric_limits<double>::infinity();
                for (int i = 0; i < np; ++i) {
                    const double d = (path.points[i] - p).squaredNorm();
                    if (d < best_d) {
                        best_d = d;
                        best = i;
                    }
                }
                if (prev_idx >= 0) {
                    int delta = (best - prev_idx) % np;
                    if (delta > np / 2) delta -= np;
                    if (delta < -np / 2) delta += np;
                    winding += delta;
                }
                prev_idx = best;
            }
            if (winding < 0) std::reverse(verts.begin(), verts.end());
        }
        const auto smallest = std::min_element(verts.begin(), verts.end());
        std::rotate(verts.begin(), smallest, verts.end());
        LatticeCycle cycle;
        cycle.scale = surface.scale;
        cycle.vertices = std::move(verts);
        validate_cycle(cycle);
        return cycle;
    };

    result.chosen = finish(cycles[chosen], /*orient=*/true);
    result.other = finish(cycles[1 - chosen], /*orient=*/true);
    return result;
}

} // namespace cubeknot
