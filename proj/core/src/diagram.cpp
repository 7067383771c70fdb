#include "cubeknot/diagram.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <map>
#include <sstream>

#include "cubeknot/rng.hpp"

namespace cubeknot {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Exact binary-rational value of a double.
Rational exact_rational(double x) {
    if (x == 0.0) return Rational(0);
    int e = 0;
    const double m = std::frexp(x, &e);  // x = m * 2^e, |m| in [0.5, 1)
    const auto mant = static_cast<long long>(std::ldexp(m, 53));
    BigInt num(mant);
    const int shift = e - 53;
    if (shift >= 0) return Rational(num << shift, 1);
    return Rational(num, BigInt(1) << (-shift));
}

struct Vec2Q {
    Rational x, y;

    friend Vec2Q operator-(const Vec2Q& a, const Vec2Q& b) { return {a.x - b.x, a.y - b.y}; }
    friend bool operator==(const Vec2Q&, const Vec2Q&) = default;
};

Rational cross2(const Vec2Q& a, const Vec2Q& b) { return a.x * b.y - a.y * b.x; }
Rational dot2(const Vec2Q& a, const Vec2Q& b) { return a.x * b.x + a.y * b.y; }

// Strict counterclockwise angle order in [0, 2*pi).
bool angle_less(const Vec2Q& a, const Vec2Q& b) {
    const bool ua = a.y > 0 || (a.y == 0 && a.x > 0);
    const bool ub = b.y > 0 || (b.y == 0 && b.x > 0);
    if (ua != ub) return ua;
    return cross2(a, b) > 0;
}

struct ExactCrossing {
    int seg_over = 0, seg_under = 0;
    Rational t_over, t_under;  // parameters on the respective segments
    Vec2Q dir_over, dir_under;
    int sign = 0;
};

struct Passage {
    int seg = 0;
    Rational t;
    int crossing = 0;
    bool over = false;
};

struct Projection {
    std::vector<Vec2Q> uv;       // projected points
    std::vector<Rational> depth; // along the view direction
    bool degenerate = false;     // direction must be rejected
    std::vector<ExactCrossing> crossings;
};

// In-plane integer basis orthogonal to an integer direction.
void integer_basis(const Eigen::Vector3i& dir, Eigen::Vector3i& b1, Eigen::Vector3i& b2) {
    int axis = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(dir[i]) < std::abs(dir[axis])) axis = i;
    b1 = dir.cross(Eigen::Vector3i::Unit(axis));
    b2 = dir.cross(b1);
}

Projection project_exact(const std::vector<Eigen::Vector3d>& pts, const Eigen::Vector3i& dir) {
    const int n = static_cast<int>(pts.size());
    Projection pr;

    Eigen::Vector3i b1, b2;
    integer_basis(dir, b1, b2);

    pr.uv.resize(n);
    pr.depth.resize(n);
    std::vector<Eigen::Vector2d> uv_approx(n);
    for (int i = 0; i < n; ++i) {
        const Rational x = exact_rational(pts[i][0]);
        const Rational y = exact_rational(pts[i][1]);
        const Rational z = exact_rational(pts[i][2]);
        pr.uv[i] = {x * b1[0] + y * b1[1] + z * b1[2], x * b2[0] + y * b2[1] + z * b2[2]};
        pr.depth[i] = x * dir[0] + y * dir[1] + z * dir[2];
        uv_approx[i] = {static_cast<double>(pr.uv[i].x), static_cast<double>(pr.uv[i].y)};
    }

    // A segment projecting to a point is parallel to the view direction; a
    // fold (consecutive segments anti-parallel in projection) makes the
    // projected curve non-immersed. Both reject the direction.
    std::vector<Vec2Q> d(n);
    for (int i = 0; i < n; ++i) {
        d[i] = pr.uv[(i + 1) % n] - pr.uv[i];
        if (d[i].x == 0 && d[i].y == 0) {
            pr.degenerate = true;
            return pr;
        }
    }
    for (int i = 0; i < n; ++i) {
        const Vec2Q& a = d[i];
        const Vec2Q& b = d[(i + 1) % n];
        if (cross2(a, b) == 0 && dot2(a, b) < 0) {
            pr.degenerate = true;
            return pr;
        }
    }

    // Candidate pairs by double-precision bounding boxes with a safety
    // margin, then exact tests.
    double scale = 0.0;
    for (const auto& p : uv_approx) scale = std::max({scale, std::abs(p[0]), std::abs(p[1])});
    const double margin = 1e-9 * std::max(1.0, scale);

    std::map<std::pair<Rational, Rational>, int> seen_points;
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector2d& a0 = uv_approx[i];
        const Eigen::Vector2d& a1 = uv_approx[(i + 1) % n];
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // wrap-adjacent
            const Eigen::Vector2d& b0 = uv_approx[j];
            const Eigen::Vector2d& b1 = uv_approx[(j + 1) % n];
            if (std::min(a0[0], a1[0]) > std::max(b0[0], b1[0]) + margin) continue;
            if (std::min(b0[0], b1[0]) > std::max(a0[0], a1[0]) + margin) continue;
            if (std::min(a0[1], a1[1]) > std::max(b0[1], b1[1]) + margin) continue;
            if (std::min(b0[1], b1[1]) > std::max(a0[1], a1[1]) + margin) continue;

            const Vec2Q& p = pr.uv[i];
            const Vec2Q& q = pr.uv[j];
            const Vec2Q& di = d[i];
            const Vec2Q& dj = d[j];
            const Vec2Q pq = q - p;
            const Rational o1 = cross2(di, pq);                          // q0 vs segment i
            const Rational o2 = cross2(di, pr.uv[(j + 1) % n] - p);      // q1 vs segment i
            const Rational o3 = cross2(dj, Vec2Q{p.x - q.x, p.y - q.y}); // p0 vs segment j
            const Rational o4 = cross2(dj, pr.uv[(i + 1) % n] - q);      // p1 vs segment j

            const bool proper = ((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) &&
                                ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0));
            if (!proper) {
                if (o1 == 0 || o2 == 0 || o3 == 0 || o4 == 0) {
                    // Collinear or endpoint tangency within reach of the
                    // boxes: non-generic direction.
                    pr.degenerate = true;
                    return pr;
                }
                continue;
            }

            const Rational denom = cross2(di, dj);
            const Rational t = cross2(pq, dj) / denom;  // on segment i
            const Rational s = cross2(pq, di) / denom;  // on segment j

            const Rational depth_i = pr.depth[i] + t * (pr.depth[(i + 1) % n] - pr.depth[i]);
            const Rational depth_j = pr.depth[j] + s * (pr.depth[(j + 1) % n] - pr.depth[j]);
            if (depth_i == depth_j)
                throw InputError("extract_diagram: curve intersects itself in 3-space");

            const std::pair<Rational, Rational> point{p.x + t * di.x, p.y + t * di.y};
            if (!seen_points.emplace(point, 1).second) {
                pr.degenerate = true;  // triple point
                return pr;
            }

            ExactCrossing c;
            const bool i_over = depth_i > depth_j;
            c.seg_over = i_over ? i : j;
            c.seg_under = i_over ? j : i;
            c.t_over = i_over ? t : s;
            c.t_under = i_over ? s : t;
            c.dir_over = i_over ? di : dj;
            c.dir_under = i_over ? dj : di;
            c.sign = cross2(c.dir_over, c.dir_under) > 0 ? +1 : -1;
            pr.crossings.push_back(c);
        }
    }
    return pr;
}

KnotDiagram build_diagram(const Projection& pr, const Eigen::Vector3i& dir) {
    KnotDiagram d;
    d.projection_dir = Eigen::Vector3d(dir[0], dir[1], dir[2]).normalized();
    const int nc = static_cast<int>(pr.crossings.size());
    d.crossings.resize(nc);

    // Counterclockwise port rotation at each crossing.
    struct PortRef {
        Vec2Q ray;
        PortRole role;
    };
    for (int c = 0; c < nc; ++c) {
        const ExactCrossing& xc = pr.crossings[c];
        std::array<PortRef, 4> ports{
            PortRef{xc.dir_over, PortRole::OverOut},
            PortRef{Vec2Q{-xc.dir_over.x, -xc.dir_over.y}, PortRole::OverIn},
            PortRef{xc.dir_under, PortRole::UnderOut},
            PortRef{Vec2Q{-xc.dir_under.x, -xc.dir_under.y}, PortRole::UnderIn},
        };
        std::sort(ports.begin(), ports.end(),
                  [](const PortRef& a, const PortRef& b) { return angle_less(a.ray, b.ray); });
        for (int k = 0; k < 4; ++k) d.crossings[c].role[k] = ports[k].role;
        d.crossings[c].sign = xc.sign;
    }

    // Passages along the curve, two per crossing.
    std::vector<Passage> passages;
    passages.reserve(2 * nc);
    for (int c = 0; c < nc; ++c) {
        passages.push_back({pr.crossings[c].seg_over, pr.crossings[c].t_over, c, true});
        passages.push_back({pr.crossings[c].seg_under, pr.crossings[c].t_under, c, false});
    }
    std::sort(passages.begin(), passages.end(), [](const Passage& a, const Passage& b) {
        if (a.seg != b.seg) return a.seg < b.seg;
        return a.t < b.t;
    });

    auto port_of = [&](int c, PortRole role) {
        for (int k = 0; k < 4; ++k)
            if (d.crossings[c].role[k] == role) return k;
        throw InvariantError("extract_diagram: missing port role");
    };

    const int narcs = 2 * nc;
    d.arcs.resize(narcs);
    for (int k = 0; k < narcs; ++k) {
        const Passage& from = passages[k];
        const Passage& to = passages[(k + 1) % narcs];
        const int p_out = port_of(from.crossing, from.over ? PortRole::OverOut : PortRole::UnderOut);
        const int p_in = port_of(to.crossing, to.over ? PortRole::OverIn : PortRole::UnderIn);
        d.arcs[k] = {from.crossing, p_out, to.crossing, p_in};
        d.crossings[from.crossing].arc[p_out] = k;
        d.crossings[to.crossing].arc[p_in] = k;
    }

    d.check_consistent();
    return d;
}

} // namespace

int KnotDiagram::writhe() const {
    int w = 0;
    for (const auto& c : crossings) w += c.sign;
    return w;
}

void KnotDiagram::check_consistent() const {
    if (crossings.empty()) {
        if (!arcs.empty()) throw InvariantError("diagram: arcs without crossings");
        return;
    }
    if (arcs.size() != crossings.size() * 2) throw InvariantError("diagram: wrong arc count");
    for (int c = 0; c < n(); ++c) {
        const auto& cr = crossings[c];
        int role_seen[4] = {0, 0, 0, 0};
        for (int k = 0; k < 4; ++k) {
            ++role_seen[static_cast<int>(cr.role[k])];
            const int a = cr.arc[k];
            if (a < 0 || a >= static_cast<int>(arcs.size()))
                throw InvariantError("diagram: dangling port");
            const bool here = (arcs[a].c_from == c && arcs[a].p_from == k) ||
                              (arcs[a].c_to == c && arcs[a].p_to == k);
            if (!here) throw InvariantError("diagram: arc/port mismatch");
            const bool leaving = arcs[a].c_from == c && arcs[a].p_from == k;
            if (leaving != is_out(cr.role[k])) throw InvariantError("diagram: arc direction vs role");
        }
        for (int r = 0; r < 4; ++r)
            if (role_seen[r] != 1) throw InvariantError("diagram: bad role multiset");
        // The strand runs straight through: positional partners share it.
        if (is_over(cr.role[0]) != is_over(cr.role[2]) || is_over(cr.role[1]) != is_over(cr.role[3]))
            throw InvariantError("diagram: rotation does not alternate strands");
        if (cr.sign != 1 && cr.sign != -1) throw InvariantError("diagram: bad sign");
    }
}

std::vector<GaussEntry> KnotDiagram::gauss_code() const {
    std::vector<GaussEntry> out;
    if (crossings.empty()) return out;
    int arc = 0;
    const int total = static_cast<int>(arcs.size());
    for (int step = 0; step < total; ++step) {
        const int c = arcs[arc].c_to;
        const int p = arcs[arc].p_to;
        out.push_back({c, is_over(crossings[c].role[p]), crossings[c].sign});
        const int p_next = (p + 2) % 4;
        arc = crossings[c].arc[p_next];
    }
    if (arc != 0) throw InvariantError("diagram: gauss walk did not close");
    return out;
}

std::string KnotDiagram::gauss_string() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& g : gauss_code()) {
        if (!first) out << ' ';
        first = false;
        out << (g.over ? 'O' : 'U') << (g.crossing + 1) << (g.sign > 0 ? '+' : '-');
    }
    return out.str();
}

KnotDiagram extract_diagram(const std::vector<Eigen::Vector3d>& curve,
                            const std::optional<Eigen::Vector3d>& dir, std::uint64_t seed) {
    if (curve.size() < 3) throw InputError("extract_diagram: need at least 3 points");

    Rng rng(seed ^ 0x8f1bbcdcbfa53e0bULL);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Eigen::Vector3i idir;
        if (dir && attempt == 0) {
            const Eigen::Vector3d u = dir->normalized() * 64.0;
            idir = Eigen::Vector3i(static_cast<int>(std::llround(u[0])),
                                   static_cast<int>(std::llround(u[1])),
                                   static_cast<int>(std::llround(u[2])));
        } else if (dir) {
            // Perturb the requested direction.
            const Eigen::Vector3d u = dir->normalized() * 64.0;
            idir = Eigen::Vector3i(static_cast<int>(std::llround(u[0]) + rng.uniform_int(-3, 3)),
                                   static_cast<int>(std::llround(u[1]) + rng.uniform_int(-3, 3)),
                                   static_cast<int>(std::llround(u[2]) + rng.uniform_int(-3, 3)));
        } else {
            idir = Eigen::Vector3i(static_cast<int>(rng.uniform_int(-19, 19)),
                                   static_cast<int>(rng.uniform_int(-19, 19)),
                                   static_cast<int>(rng.uniform_int(-19, 19)));
        }
        if (idir == Eigen::Vector3i::Zero()) continue;

        Projection pr = project_exact(curve, idir);
        if (pr.degenerate) continue;
        return build_diagram(pr, idir);
    }
    throw InputError("extract_diagram: no generic projection direction found in 64 attempts");
}

KnotDiagram extract_diagram(const LatticeCycle& cycle, const std::optional<Eigen::Vector3d>& dir,
                            std::uint64_t seed) {
    std::vector<Eigen::Vector3d> pts;
    pts.reserve(cycle.vertices.size());
    for (const auto& v : cycle.vertices) pts.emplace_back(v[0], v[1], v[2]);
    return extract_diagram(pts, dir, seed);
}

// ---------------------------------------------------------------------------
// Faces and Reidemeister simplification.

DiagramFaces diagram_faces(const KnotDiagram& d) {
    DiagramFaces f;
    f.of_arc.assign(d.arcs.size(), {-1, -1});
    f.sector.assign(d.crossings.size(), {-1, -1, -1, -1});

    auto head = [&](const std::pair<int, bool>& h) {
        return h.second ? std::pair<int, int>(d.arcs[h.first].c_to, d.arcs[h.first].p_to)
                        : std::pair<int, int>(d.arcs[h.first].c_from, d.arcs[h.first].p_from);
    };

    for (int a = 0; a < static_cast<int>(d.arcs.size()); ++a) {
        for (int fw = 1; fw >= 0; --fw) {
            if (f.of_arc[a][fw] >= 0) continue;
            const int face = static_cast<int>(f.walks.size());
            f.walks.emplace_back();
            std::pair<int, bool> h{a, fw == 1};
            while (f.of_arc[h.first][h.second ? 1 : 0] < 0) {
                f.of_arc[h.first][h.second ? 1 : 0] = face;
                f.walks[face].push_back(h);
                auto [c, p] = head(h);
                const int p_next = (p + 3) % 4;  // clockwise neighbor
                f.sector[c][p_next] = face;
                const int b = d.crossings[c].arc[p_next];
                const bool leaving = d.arcs[b].c_from == c && d.arcs[b].p_from == p_next;
                h = {b, leaving};
            }
        }
    }
    return f;
}

namespace {

// Removal bookkeeping shared by the R1/R2 moves: arcs are merged through a
// deleted crossing and the diagram is compacted at the end.
struct Rebuilder {
    explicit Rebuilder(const KnotDiagram& d) : d(d), cr_alive(d.crossings.size(), 1), arc_alive(d.arcs.size(), 1) {
        work = d;
    }

    // Merge the arc arriving at (c_in, p_in) with the arc leaving at
    // (c_out, p_out), rerouting the strand past a deleted crossing. Port
    // maps are kept current so chained merges resolve through each other.
    void merge_arcs(int c_in, int p_in, int c_out, int p_out) {
        const int a = work.crossings[c_in].arc[p_in];
        const int b = work.crossings[c_out].arc[p_out];
        if (!arc_alive[a] || !arc_alive[b]) throw InvariantError("reidemeister: merging dead arc");
        if (a == b) {
            // The strand closes into a crossing-free loop.
            arc_alive[a] = 0;
            closed_loop = true;
            return;
        }
        work.arcs[a].c_to = work.arcs[b].c_to;
        work.arcs[a].p_to = work.arcs[b].p_to;
        work.crossings[work.arcs[b].c_to].arc[work.arcs[b].p_to] = a;
        arc_alive[b] = 0;
    }

    void kill_crossing(int c) { cr_alive[c] = 0; }
    void kill_arc(int a) { arc_alive[a] = 0; }

    KnotDiagram compact() const {
        KnotDiagram out;
        out.projection_dir = d.projection_dir;
        std::vector<int> cmap(work.crossings.size(), -1), amap(work.arcs.size(), -1);
        for (std::size_t i = 0; i < work.crossings.size(); ++i)
            if (cr_alive[i]) {
                cmap[i] = static_cast<int>(out.crossings.size());
                out.crossings.push_back(work.crossings[i]);
            }
        for (std::size_t i = 0; i < work.arcs.size(); ++i)
            if (arc_alive[i]) {
                amap[i] = static_cast<int>(out.arcs.size());
                out.arcs.push_back(work.arcs[i]);
            }
        if (out.crossings.empty() && !out.arcs.empty())
            throw InvariantError("reidemeister: leftover arcs with no crossings");
        if (!out.crossings.empty() && closed_loop)
            throw InvariantError("reidemeister: knot split into components");
        for (auto& arc : out.arcs) {
            arc.c_from = cmap[arc.c_from];
            arc.c_to = cmap[arc.c_to];
            if (arc.c_from < 0 || arc.c_to < 0) throw InvariantError("reidemeister: arc into dead crossing");
        }
        for (auto& cr : out.crossings)
            for (int k = 0; k < 4; ++k) {
                cr.arc[k] = amap[cr.arc[k]];
                if (cr.arc[k] < 0) throw InvariantError("reidemeister: port into dead arc");
            }
        out.check_consistent();
        return out;
    }

    const KnotDiagram& d;
    KnotDiagram work;
    std::vector<char> cr_alive, arc_alive;
    bool closed_loop = false;
};

// Kink: a face bounded by a single directed arc.
std::optional<KnotDiagram> try_r1(const KnotDiagram& d, const DiagramFaces& faces) {
    for (const auto& walk : faces.walks) {
        if (walk.size() != 1) continue;
        const int loop = walk.front().first;
        const int c = d.arcs[loop].c_from;
        if (d.arcs[loop].c_to != c) throw InvariantError("reidemeister: monogon spans two crossings");
        const int q_out = d.arcs[loop].p_from;
        const int q_in = d.arcs[loop].p_to;

        Rebuilder rb(d);
        rb.kill_arc(loop);
        rb.merge_arcs(c, (q_out + 2) % 4, c, (q_in + 2) % 4);
        rb.kill_crossing(c);
        return rb.compact();
    }
    return std::nullopt;
}

// Poke: a bigon whose two arcs are one full-over strand and one full-under
// strand between two distinct crossings.
std::optional<KnotDiagram> try_r2(const KnotDiagram& d, const DiagramFaces& faces) {
    for (const auto& walk : faces.walks) {
        if (walk.size() != 2) continue;
        const int a1 = walk[0].first, a2 = walk[1].first;
        if (a1 == a2) continue;
        const DiagramArc& A = d.arcs[a1];
        const DiagramArc& B = d.arcs[a2];
        const int c1 = A.c_from, c2 = A.c_to;
        if (c1 == c2) continue;
        if (!((B.c_from == c2 && B.c_to == c1) || (B.c_from == c1 && B.c_to == c2))) continue;

        const bool a1_over = is_over(d.crossings[c1].role[A.p_from]) &&
                             is_over(d.crossings[c2].role[A.p_to]);
        const bool a1_under = !is_over(d.crossings[c1].role[A.p_from]) &&
                              !is_over(d.crossings[c2].role[A.p_to]);
        const bool a2_over = is_over(d.crossings[B.c_from].role[B.p_from]) &&
                             is_over(d.crossings[B.c_to].role[B.p_to]);
        const bool a2_under = !is_over(d.crossings[B.c_from].role[B.p_from]) &&
                              !is_over(d.crossings[B.c_to].role[B.p_to]);
        if (!((a1_over && a2_under) || (a1_under && a2_over))) continue;

        Rebuilder rb(d);
        rb.kill_arc(a1);
        rb.kill_arc(a2);
        // Reconnect strand 1 through both crossings, then strand 2. The
        // port maps are updated by each merge, so the second lookup sees
        // the first merge's result.
        rb.merge_arcs(c1, (A.p_from + 2) % 4, c2, (A.p_to + 2) % 4);
        rb.merge_arcs(B.c_from, (B.p_from + 2) % 4, B.c_to, (B.p_to + 2) % 4);
        rb.kill_crossing(c1);
        rb.kill_crossing(c2);
        return rb.compact();
    }
    return std::nullopt;
}

} // namespace

int simplify_reidemeister(KnotDiagram& d) {
    int removed = 0;
    for (;;) {
        if (d.crossings.empty()) return removed;
        const DiagramFaces faces = diagram_faces(d);
        if (auto next = try_r1(d, faces)) {
            removed += d.n() - next->n();
            d = std::move(*next);
            continue;
        }
        if (auto next = try_r2(d, faces)) {
            removed += d.n() - next->n();
            d = std::move(*next);
            continue;
        }
        return removed;
    }
}

KnotDiagram mirror_diagram(const KnotDiagram& d) {
    KnotDiagram out = d;
    for (auto& cr : out.crossings) {
        cr.sign = -cr.sign;
        for (auto& role : cr.role) {
            switch (role) {
                case PortRole::OverIn: role = PortRole::UnderIn; break;
                case PortRole::OverOut: role = PortRole::UnderOut; break;
                case PortRole::UnderIn: role = PortRole::OverIn; break;
                case PortRole::UnderOut: role = PortRole::OverOut; break;
            }
        }
    }
    out.check_consistent();
    return out;
}

void insert_kink(KnotDiagram& d, int arc, int chirality) {
    if (arc < 0 || arc >= static_cast<int>(d.arcs.size()))
        throw InputError("insert_kink: no such arc");

    const int c = d.n();
    const int old_head_c = d.arcs[arc].c_to;
    const int old_head_p = d.arcs[arc].p_to;

    DiagramCrossing cr;
    // Ports counterclockwise: strand X passes 0 -> 2 (in at 0), strand Y
    // occupies 1 and 3. X is the over strand; chirality picks Y's direction
    // and with it the crossing sign.
    cr.role[0] = PortRole::OverIn;
    cr.role[2] = PortRole::OverOut;
    if (chirality >= 0) {
        cr.role[1] = PortRole::UnderIn;
        cr.role[3] = PortRole::UnderOut;
        cr.sign = +1;
    } else {
        cr.role[3] = PortRole::UnderIn;
        cr.role[1] = PortRole::UnderOut;
        cr.sign = -1;
    }

    const int loop_arc = static_cast<int>(d.arcs.size());
    const int tail_arc = loop_arc + 1;

    // arc: ... -> (c, 0); loop: (c, 2) -> (c, under-in); tail: (c, under-out) -> old head.
    const int under_in = chirality >= 0 ? 1 : 3;
    const int under_out = chirality >= 0 ? 3 : 1;

    d.arcs[arc].c_to = c;
    d.arcs[arc].p_to = 0;
    d.arcs.push_back({c, 2, c, under_in});
    d.arcs.push_back({c, under_out, old_head_c, old_head_p});
    cr.arc[0] = arc;
    cr.arc[2] = loop_arc;
    cr.arc[under_in] = loop_arc;
    cr.arc[under_out] = tail_arc;
    d.crossings.push_back(cr);
    d.crossings[old_head_c].arc[old_head_p] = tail_arc;

    d.check_consistent();
}

} // namespace cubeknot
