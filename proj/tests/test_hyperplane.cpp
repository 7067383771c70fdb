#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <set>

#include "cubeknot/hyperplane.hpp"
#include "cubeknot/rng.hpp"
#include "cubeknot/voxel.hpp"

using namespace cubeknot;

namespace {

using Rational = boost::multiprecision::cpp_rational;

// Independent oracle: per-cube sign test over all 2^3 vertices, full window
// scan, no interval shortcut.
std::vector<CellKey> plane_cubes_bruteforce(const Hyperplane& p, Scale s, const Window& w) {
    std::vector<CellKey> out;
    const double off = p.offset * s.m;
    for (int x = w.lo[0]; x < w.hi[0]; ++x)
        for (int y = w.lo[1]; y < w.hi[1]; ++y)
            for (int z = w.lo[2]; z < w.hi[2]; ++z) {
                double mn = 1e300, mx = -1e300;
                for (int v = 0; v < 8; ++v) {
                    const double dot = p.normal[0] * (x + (v & 1)) + p.normal[1] * (y + ((v >> 1) & 1)) +
                                       p.normal[2] * (z + ((v >> 2) & 1));
                    mn = std::min(mn, dot);
                    mx = std::max(mx, dot);
                }
                if (mn <= off + 1e-9 && mx >= off - 1e-9)
                    out.push_back(make_cell({x, y, z}, {0, 1, 2}));
            }
    return out;
}

Hyperplane random_plane(Rng& rng, double min_component = 0.0) {
    for (;;) {
        std::array<double, kMaxDim> n{};
        double len2 = 0;
        for (int i = 0; i < 3; ++i) {
            n[i] = rng.uniform(-1.0, 1.0);
            len2 += n[i] * n[i];
        }
        if (len2 < 0.1) continue;
        const double len = std::sqrt(len2);
        bool ok = true;
        for (int i = 0; i < 3; ++i) ok = ok && std::abs(n[i] / len) >= min_component;
        if (!ok) continue;
        return make_plane({n[0], n[1], n[2]}, rng.uniform(-1.0, 1.0));
    }
}

std::array<double, 3> point_on_plane(const Hyperplane& p, Rng& rng, double spread) {
    const Eigen::Vector3d n(p.normal[0], p.normal[1], p.normal[2]);
    Eigen::Vector3d x(rng.uniform(-spread, spread), rng.uniform(-spread, spread),
                      rng.uniform(-spread, spread));
    x -= (n.dot(x) - p.offset) * n;
    return {x[0], x[1], x[2]};
}

Window window_around(const std::array<double, 3>& center, Scale s, int half) {
    Window w;
    w.dim = 3;
    for (int i = 0; i < 3; ++i) {
        w.lo[i] = static_cast<std::int32_t>(std::floor(center[i] * s.m)) - half;
        w.hi[i] = w.lo[i] + 2 * half;
    }
    return w;
}

} // namespace

TEST_CASE("plane_cubes: plane inside one layer") {
    Window w;
    w.lo = {0, 0, 0, 0};
    w.hi = {2, 2, 2, 0};
    const auto cubes = plane_cubes(make_plane({0, 0, 1}, 0.5), Scale{1}, w);
    REQUIRE(cubes.size() == 4);
    for (const auto& c : cubes) CHECK(c.anchor[2] == 0);
}

TEST_CASE("plane_cubes: closed cubes on both sides of a lattice plane") {
    Window w;
    w.lo = {0, 0, -2, 0};
    w.hi = {2, 2, 2, 0};
    const auto cubes = plane_cubes(make_plane({0, 0, 1}, 0.0), Scale{1}, w);
    REQUIRE(cubes.size() == 8);
    for (const auto& c : cubes) CHECK((c.anchor[2] == -1 || c.anchor[2] == 0));
}

TEST_CASE("plane_cubes: tilted plane matches the brute-force vertex test") {
    Window w;
    w.lo = {-2, -2, -2, 0};
    w.hi = {2, 2, 2, 0};
    const Hyperplane p = make_plane({1, 1, 1}, 0.5);
    CHECK(plane_cubes(p, Scale{1}, w) == plane_cubes_bruteforce(p, Scale{1}, w));

    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const Hyperplane q = random_plane(rng);
        CHECK(plane_cubes(q, Scale{1}, w) == plane_cubes_bruteforce(q, Scale{1}, w));
    }
}

TEST_CASE("plane_cubes: empty window rejected") {
    Window w;
    w.lo = {0, 0, 0, 0};
    w.hi = {0, 2, 2, 0};
    CHECK_THROWS_AS(plane_cubes(make_plane({0, 0, 1}, 0.5), Scale{1}, w), InputError);
}

TEST_CASE("nearest_face: axis plane selects a face, generic plane a vertex, partial an edge") {
    const CellKey cube = make_cell({0, 0, 0}, {0, 1, 2});
    CHECK(nearest_face(cube, make_plane({0, 0, 1}, -0.5), Scale{1}) == make_cell({0, 0, 0}, {0, 1}));
    CHECK(nearest_face(cube, make_plane({1, 1, 1}, -0.5), Scale{1}) == make_cell({0, 0, 0}, {}));
    CHECK(nearest_face(cube, make_plane({1, 1, 0}, -0.5), Scale{1}) == make_cell({0, 0, 0}, {2}));
    CHECK_THROWS_AS(nearest_face(cube, make_plane({0, 0, 1}, 0.5), Scale{1}), InputError);
}

TEST_CASE("nearest_face equals the argmin vertex span (randomized oracle)") {
    Rng rng(77);
    int tested = 0;
    while (tested < 200) {
        const Hyperplane p = random_plane(rng);
        CellKey cube = make_cell({0, 0, 0}, {0, 1, 2});
        for (int i = 0; i < 3; ++i) cube.anchor[i] = static_cast<std::int32_t>(rng.uniform_int(-6, 6));

        // Oracle: argmin set over the 8 vertex distances.
        double best = 1e300;
        double mn = 1e300, mx = -1e300;
        std::vector<GridVec> argmin;
        for (int v = 0; v < 8; ++v) {
            GridVec vert = cube.anchor;
            for (int i = 0; i < 3; ++i) vert[i] += (v >> i) & 1;
            const double side =
                p.normal[0] * vert[0] + p.normal[1] * vert[1] + p.normal[2] * vert[2] - p.offset;
            mn = std::min(mn, side);
            mx = std::max(mx, side);
            const double dist = std::abs(side);
            if (dist < best - 1e-9) {
                best = dist;
                argmin = {vert};
            } else if (dist <= best + 1e-9) {
                best = std::min(best, dist);
                argmin.push_back(vert);
            }
        }
        if (mn <= 1e-9 && mx >= -1e-9) continue;  // cube meets plane: outside the precondition
        ++tested;

        const CellKey face = nearest_face(cube, p, Scale{1});
        std::set<GridVec> expected(argmin.begin(), argmin.end());
        std::set<GridVec> got;
        for (const CellKey& v : faces_of(face, 0)) got.insert(v.anchor);
        CHECK(got == expected);

        for (int i = 0; i < 3; ++i)
            if (face.spans(i)) CHECK(std::abs(p.normal[i]) < 1e-9);
    }
}

TEST_CASE("line_crossing_interval: single layer and two layers") {
    Window w;
    w.lo = {-3, -3, -3, 0};
    w.hi = {3, 3, 3, 0};
    {
        const Hyperplane p = make_plane({0, 0, 1}, 0.5);
        const auto qp = plane_cubes(p, Scale{1}, w);
        const auto j = line_crossing_interval(p, {0.25, 0.25, 0.5}, qp, Scale{1});
        CHECK(j.a == doctest::Approx(-0.5).epsilon(1e-6));
        CHECK(j.b == doctest::Approx(0.5).epsilon(1e-6));
    }
    {
        const Hyperplane p = make_plane({0, 0, 1}, 0.0);
        const auto qp = plane_cubes(p, Scale{1}, w);
        const auto j = line_crossing_interval(p, {0.5, 0.5, 0.0}, qp, Scale{1});
        CHECK(j.a == doctest::Approx(-1.0).epsilon(1e-6));
        CHECK(j.b == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("line_crossing_interval: tilted plane against the exact rational clip") {
    // Plane x+y+z = 0.5; point k = (1/6, 1/6, 1/6). The oracle clips
    // k + t'(1,1,1) (unnormalized, exact rationals) against every cube and
    // merges exactly; t = t' * sqrt(3).
    Window w;
    w.lo = {-3, -3, -3, 0};
    w.hi = {3, 3, 3, 0};
    const Hyperplane p = make_plane({1, 1, 1}, 0.5);
    const auto qp = plane_cubes(p, Scale{1}, w);

    const Rational k(1, 6);
    std::vector<std::pair<Rational, Rational>> pieces;
    for (const CellKey& c : qp) {
        Rational lo(-1000), hi(1000);
        bool empty = false;
        for (int i = 0; i < 3; ++i) {
            const Rational a = Rational(c.anchor[i]) - k;
            const Rational b = Rational(c.anchor[i] + 1) - k;
            if (a > hi || b < lo) empty = true;
            lo = std::max(lo, a);
            hi = std::min(hi, b);
        }
        if (!empty && lo <= hi) pieces.emplace_back(lo, hi);
    }
    std::sort(pieces.begin(), pieces.end());
    REQUIRE(!pieces.empty());
    Rational a = pieces[0].first, b = pieces[0].second;
    for (const auto& [lo, hi] : pieces) {
        REQUIRE(lo <= b);  // single interval, exactly
        b = std::max(b, hi);
    }

    const auto j = line_crossing_interval(p, {1.0 / 6, 1.0 / 6, 1.0 / 6}, qp, Scale{1});
    // The implementation's touching band widens each cube by 1e-9.
    CHECK(j.a == doctest::Approx(static_cast<double>(a) * std::sqrt(3.0)).epsilon(1e-6));
    CHECK(j.b == doctest::Approx(static_cast<double>(b) * std::sqrt(3.0)).epsilon(1e-6));
}

TEST_CASE("line_crossing_interval: gap in the cube set is surfaced loudly") {
    std::vector<CellKey> qp{make_cell({0, 0, -1}, {0, 1, 2}), make_cell({0, 0, 2}, {0, 1, 2})};
    const Hyperplane p = make_plane({0, 0, 1}, 0.0);
    CHECK_THROWS_WITH_AS(line_crossing_interval(p, {0.5, 0.5, 0.0}, qp, Scale{1}),
                         doctest::Contains("disconnected"), InvariantError);
}

TEST_CASE("Lemma 2.3 property: random planes and points never disconnect") {
    Rng rng(555);
    for (int pi = 0; pi < 10; ++pi) {
        const Hyperplane p = random_plane(rng);
        for (int ki = 0; ki < 10; ++ki) {
            const auto k = point_on_plane(p, rng, 2.0);
            const Window w = window_around(k, Scale{1}, 9);
            const auto qp = plane_cubes(p, Scale{1}, w);
            const auto j = line_crossing_interval(p, k, qp, Scale{1});
            CHECK(j.a < 0);  // strict interior: Prop 2.2(1)
            CHECK(j.b > 0);
        }
    }
}

TEST_CASE("Remark 2.7: the cube tube lives inside the 4*sqrt(d) slab") {
    Rng rng(808);
    const double slab = 4.0 * std::sqrt(3.0);
    Window w;
    w.lo = {-8, -8, -8, 0};
    w.hi = {8, 8, 8, 0};
    for (int t = 0; t < 20; ++t) {
        const Hyperplane p = random_plane(rng);
        for (const CellKey& c : plane_cubes(p, Scale{1}, w)) {
            const double center = p.normal[0] * (c.anchor[0] + 0.5) + p.normal[1] * (c.anchor[1] + 0.5) +
                                  p.normal[2] * (c.anchor[2] + 0.5) - p.offset;
            CHECK(std::abs(center) <= slab);
        }
    }
}

TEST_CASE("Prop 2.2(3): two boundary components, injective exit map, continuity modulus") {
    Rng rng(4242);
    for (int t = 0; t < 5; ++t) {
        const Hyperplane p = random_plane(rng, 0.15);
        Window w;
        w.lo = {-9, -9, -9, 0};
        w.hi = {9, 9, 9, 0};
        const CubeSet qp{Scale{1}, plane_cubes(p, Scale{1}, w)};
        const auto comps = extract_boundary(qp, w);
        REQUIRE(comps.size() == 2);

        std::set<int> sides;
        for (const auto& comp : comps) {
            const Box b = cell_support(comp.squares.front(), Scale{1});
            double centroid = -p.offset;
            for (int i = 0; i < 3; ++i) centroid += p.normal[i] * 0.5 * (b.lo[i] + b.hi[i]);
            sides.insert(centroid > 0 ? 1 : -1);
        }
        CHECK(sides.size() == 2);

        const Eigen::Vector3d n(p.normal[0], p.normal[1], p.normal[2]);
        int axis = 0;
        for (int i = 1; i < 3; ++i)
            if (std::abs(n[i]) < std::abs(n[axis])) axis = i;
        const Eigen::Vector3d b1 = n.cross(Eigen::Vector3d::Unit(axis)).normalized();
        const Eigen::Vector3d b2 = n.cross(b1);

        double prev_modulus = -1.0;
        for (const int grid : {10, 20, 40}) {
            const double spread = 2.0;
            std::vector<std::vector<Eigen::Vector3d>> exits(grid, std::vector<Eigen::Vector3d>(grid));
            std::set<std::array<long, 3>> distinct;
            for (int i = 0; i < grid; ++i)
                for (int j = 0; j < grid; ++j) {
                    const double s = -spread + 2 * spread * i / (grid - 1);
                    const double u = -spread + 2 * spread * j / (grid - 1);
                    const Eigen::Vector3d kk = p.offset * n + s * b1 + u * b2;
                    const auto jiv = line_crossing_interval(p, {kk[0], kk[1], kk[2]}, qp.cubes, Scale{1});
                    exits[i][j] = kk + jiv.b * n;
                    distinct.insert({std::lround(exits[i][j][0] * 1e7), std::lround(exits[i][j][1] * 1e7),
                                     std::lround(exits[i][j][2] * 1e7)});
                }
            CHECK(distinct.size() == static_cast<std::size_t>(grid) * grid);

            double modulus = 0.0;
            for (int i = 0; i < grid; ++i)
                for (int j = 0; j + 1 < grid; ++j) {
                    modulus = std::max(modulus, (exits[i][j + 1] - exits[i][j]).norm());
                    modulus = std::max(modulus, (exits[j + 1][i] - exits[j][i]).norm());
                }
            if (prev_modulus >= 0) CHECK(modulus <= prev_modulus + 1e-9);
            prev_modulus = modulus;
        }
    }
}

TEST_CASE("plane_pair_cycle: axis-aligned pair gives an axis-parallel lattice line") {
    const Hyperplane p1 = make_plane({0, 0, 1}, 0.5);
    const Hyperplane p2 = make_plane({1, 0, 0}, 0.5);
    const auto path = plane_pair_cycle(p1, p2, Scale{1}, symmetric_window(5));
    REQUIRE(path.edges.size() >= 8);
    for (const auto& v : path.vertices) {
        CHECK(v[0] == 1);  // positive side of P2
        CHECK(v[2] == 1);  // E is the z=1 component
    }
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i)
        CHECK(path.vertices[i + 1][1] - path.vertices[i][1] == 1);  // monotone in y
}

TEST_CASE("plane_pair_cycle: tilted pair gives a simple monotone staircase") {
    const Hyperplane p1 = make_plane({0, 0, 1}, 0.5);
    const Hyperplane p2 = make_plane({1, 1, 0}, 0.0);
    const auto art = plane_pair_cycle_artifacts(p1, p2, Scale{1}, symmetric_window(6));
    const auto& path = art.path;
    REQUIRE(path.edges.size() >= 8);

    // Brute-force oracle for the band: squares of the z=1 plane meeting P2.
    std::set<CellKey> expected_band;
    for (int x = -9; x < 9; ++x)
        for (int y = -9; y < 9; ++y) {
            const int mn = x + y, mx = (x + 1) + (y + 1);
            if (mn <= 0 && mx >= 0) expected_band.insert(make_cell({x, y, 1}, {0, 1}));
        }
    for (const CellKey& sq : art.band) CHECK(expected_band.count(sq) == 1);

    std::set<GridVec> seen;
    for (const auto& v : path.vertices) {
        CHECK(v[2] == 1);
        CHECK(seen.insert(v).second);                   // simple
        CHECK((v[0] + v[1] == 1 || v[0] + v[1] == 2));  // hugs the + side of the band
    }
    // Monotone along the line direction n1 x n2.
    const double ux = -1.0, uy = 1.0;
    int dir_sign = 0;
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
        const double step = ux * (path.vertices[i + 1][0] - path.vertices[i][0]) +
                            uy * (path.vertices[i + 1][1] - path.vertices[i][1]);
        REQUIRE(step != 0.0);
        if (dir_sign == 0) dir_sign = step > 0 ? 1 : -1;
        CHECK(step * dir_sign > 0);
    }
}

TEST_CASE("plane_pair_cycle: identical planes are rejected as non-orthogonal") {
    const Hyperplane p = make_plane({0, 0, 1}, 0.5);
    CHECK_THROWS_WITH_AS(plane_pair_cycle(p, p, Scale{1}, symmetric_window(4)),
                         doctest::Contains("non-orthogonal"), InputError);
}

TEST_CASE("plane_pair_cycle: random orthogonal pairs give simple 1-skeleton paths") {
    Rng rng(99);
    for (int t = 0; t < 12; ++t) {
        const Hyperplane p1 = random_plane(rng, 0.1);
        const Eigen::Vector3d n1(p1.normal[0], p1.normal[1], p1.normal[2]);
        Eigen::Vector3d v(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        v -= v.dot(n1) * n1;
        if (v.norm() < 0.3) {
            --t;
            continue;
        }
        v.normalize();
        const Hyperplane p2 = make_plane({v[0], v[1], v[2]}, rng.uniform(-0.5, 0.5));

        const auto path = plane_pair_cycle(p1, p2, Scale{1}, symmetric_window(6));
        REQUIRE(path.edges.size() >= 2);
        REQUIRE(path.vertices.size() == path.edges.size() + 1);
        std::set<GridVec> seen;
        for (const auto& vert : path.vertices) CHECK(seen.insert(vert).second);
        for (std::size_t i = 0; i < path.edges.size(); ++i) {
            CHECK(path.edges[i].dim() == 1);
            int diff = 0;
            for (int ax = 0; ax < 3; ++ax)
                diff += std::abs(path.vertices[i + 1][ax] - path.vertices[i][ax]);
            CHECK(diff == 1);
        }
    }
}
