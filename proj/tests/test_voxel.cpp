#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "cubeknot/voxel.hpp"

using namespace cubeknot;

namespace {

TriMesh flat_patch(double z, double x0, double x1, double y0, double y1) {
    TriMesh m;
    m.vertices = {{x0, y0, z}, {x1, y0, z}, {x1, y1, z}, {x0, y1, z}};
    m.triangles = {{0, 1, 2}, {0, 2, 3}};
    return m;
}

TriMesh uv_sphere(double radius, int nlat, int nlon) {
    TriMesh m;
    m.vertices.push_back({0, 0, radius});   // north pole
    for (int i = 1; i < nlat; ++i) {
        const double phi = std::numbers::pi * i / nlat;
        for (int j = 0; j < nlon; ++j) {
            const double theta = 2 * std::numbers::pi * j / nlon;
            m.vertices.push_back({radius * std::sin(phi) * std::cos(theta),
                                  radius * std::sin(phi) * std::sin(theta), radius * std::cos(phi)});
        }
    }
    m.vertices.push_back({0, 0, -radius});  // south pole
    const int south = static_cast<int>(m.vertices.size()) - 1;
    auto ring = [&](int i, int j) { return 1 + (i - 1) * nlon + (j % nlon); };
    for (int j = 0; j < nlon; ++j) m.triangles.push_back({0, ring(1, j), ring(1, j + 1)});
    for (int i = 1; i + 1 < nlat; ++i)
        for (int j = 0; j < nlon; ++j) {
            m.triangles.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
            m.triangles.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
        }
    for (int j = 0; j < nlon; ++j) m.triangles.push_back({south, ring(nlat - 1, j + 1), ring(nlat - 1, j)});
    return m;
}

// Exhaustive oracle: scan the full dilated bounding window, test every cube
// against every triangle.
CubeSet cubes_meeting_exhaustive(const TriMesh& mesh, Scale s) {
    GridVec lo{}, hi{};
    bool first = true;
    for (const auto& v : mesh.vertices) {
        for (int i = 0; i < 3; ++i) {
            const double x = v[i] * s.m;
            const auto l = static_cast<std::int32_t>(std::floor(x)) - 2;
            const auto h = static_cast<std::int32_t>(std::ceil(x)) + 2;
            lo[i] = first ? l : std::min(lo[i], l);
            hi[i] = first ? h : std::max(hi[i], h);
        }
        first = false;
    }
    CubeSet out;
    out.scale = s;
    GridVec a{};
    for (a[0] = lo[0]; a[0] <= hi[0]; ++a[0])
        for (a[1] = lo[1]; a[1] <= hi[1]; ++a[1])
            for (a[2] = lo[2]; a[2] <= hi[2]; ++a[2]) {
                bool hit = false;
                for (const auto& t : mesh.triangles) {
                    if (triangle_cube_overlap(mesh.vertices[t[0]] * s.m, mesh.vertices[t[1]] * s.m,
                                              mesh.vertices[t[2]] * s.m, a)) {
                        hit = true;
                        break;
                    }
                }
                if (hit) out.cubes.push_back(make_cube(a, 3));
            }
    return out;
}

TubeSurface unknot_tube(double r = 0.5, double h = 0.1, int n_theta = 24) {
    KnotPreset p;
    p.name = "unknot";
    const KnotCurve k = make_knot(p, h);
    return tube_surface(k, rm_frame(k), r, n_theta);
}

} // namespace

TEST_CASE("cubes_meeting: flat patch inside one layer") {
    const CubeSet set = cubes_meeting(flat_patch(0.5, 0.1, 1.9, 0.1, 1.9), Scale{1});
    REQUIRE(set.cubes.size() == 4);
    for (const auto& c : set.cubes) CHECK(c.anchor[2] == 0);
}

TEST_CASE("cubes_meeting: patch exactly in a lattice plane touches both layers") {
    const CubeSet set = cubes_meeting(flat_patch(1.0, 0.1, 0.9, 0.1, 0.9), Scale{1});
    REQUIRE(set.cubes.size() == 2);
    CHECK(set.cubes[0].anchor[2] == 0);
    CHECK(set.cubes[1].anchor[2] == 1);
}

TEST_CASE("cubes_meeting: sphere equals the exhaustive window scan") {
    const TriMesh sphere = uv_sphere(1.5, 12, 24);
    const CubeSet pruned = cubes_meeting(sphere, Scale{1});
    const CubeSet full = cubes_meeting_exhaustive(sphere, Scale{1});
    CHECK(pruned.cubes == full.cubes);
    CHECK(pruned.cubes.size() > 8);
}

TEST_CASE("pruned enumeration equals exhaustive on patches, sphere and a coarse tube") {
    const std::vector<TriMesh> meshes = {
        flat_patch(0.5, 0.1, 1.9, 0.1, 1.9),
        flat_patch(1.0, -0.7, 1.2, 0.3, 2.4),
        uv_sphere(1.5, 10, 16),
        unknot_tube(0.5, 0.3, 8).mesh,
    };
    for (const auto& mesh : meshes)
        for (int m : {1, 2, 4})
            CHECK(cubes_meeting(mesh, Scale{m}).cubes == cubes_meeting_exhaustive(mesh, Scale{m}).cubes);
}

TEST_CASE("cubes_meeting is deterministic across thread counts") {
    const TriMesh sphere = uv_sphere(1.5, 16, 32);
    const CubeSet t1 = cubes_meeting(sphere, Scale{4}, 1);
    const CubeSet t8 = cubes_meeting(sphere, Scale{4}, 8);
    CHECK(t1.cubes == t8.cubes);
}

TEST_CASE("boundary_components: plane slab splits into two flat sheets") {
    // Cube tube of the plane z = 0.5 on a window, rim-filtered.
    Window w = symmetric_window(6);
    CubeSet slab;
    slab.scale = Scale{1};
    GridVec a{};
    for (a[0] = -6; a[0] < 6; ++a[0])
        for (a[1] = -6; a[1] < 6; ++a[1]) {
            a[2] = 0;
            slab.cubes.push_back(make_cube(a, 3));
        }
    std::sort(slab.cubes.begin(), slab.cubes.end());

    const auto comps = extract_boundary(slab, w);
    REQUIRE(comps.size() == 2);
    for (const auto& comp : comps) {
        CHECK(comp.size() == 144);
        const int z = comp.squares.front().anchor[2];
        CHECK((z == 0 || z == 1));
        for (const auto& sq : comp.squares) CHECK(sq.anchor[2] == z);
    }
}

TEST_CASE("boundary_components: sphere at m=2 gives two chi=2 components") {
    const CubeSet set = cubes_meeting(uv_sphere(1.5, 24, 48), Scale{2});
    const auto comps = boundary_components(set);
    REQUIRE(comps.size() == 2);
    for (const auto& comp : comps) CHECK(comp.chi == 2);
    // Outer sheet has more squares than the inner one.
    CHECK(std::abs(comps[0].size() - comps[1].size()) > 0);
}

TEST_CASE("boundary_components: solid cube has chi=2 boundary; missing bicollar throws") {
    CubeSet one;
    one.scale = Scale{1};
    one.cubes = {make_cube({0, 0, 0, 0}, 3)};
    const auto comps = extract_boundary(one);
    REQUIRE(comps.size() == 1);
    CHECK(comps.front().size() == 6);
    CHECK(comps.front().chi == 2);
    CHECK_THROWS_AS(boundary_components(one), InvariantError);
    try {
        boundary_components(one);
    } catch (const InvariantError& e) {
        CHECK(e.retriable);
        CHECK(std::string(e.what()).find("bicollar") != std::string::npos);
    }
}

TEST_CASE("pinched edge: two diagonal cubes resolve into two sheets") {
    CubeSet diag;
    diag.scale = Scale{1};
    diag.cubes = {make_cube({0, 0, 0, 0}, 3), make_cube({1, 1, 0, 0}, 3)};
    std::sort(diag.cubes.begin(), diag.cubes.end());
    const auto comps = extract_boundary(diag);
    // Same-solid pairing keeps the two cubes' boundaries separate.
    REQUIRE(comps.size() == 2);
    for (const auto& comp : comps) {
        CHECK(comp.size() == 6);
        CHECK(comp.chi == 2);
    }
}

TEST_CASE("unknot tube at the auto scale: bicollar holds") {
    KnotPreset p;
    p.name = "unknot";
    const KnotCurve k = make_knot(p, 0.1);
    const TubeSurface tube = tube_surface(k, rm_frame(k), 0.5, 24);

    const Scale s = choose_scale(k, 0.5, ScalePolicy::auto_scale());
    CHECK(s.m == 32);  // smallest power of two with 0.5*m >= 6*sqrt(3)

    const CubeSet solid = cubes_meeting(tube.mesh, s, 4);
    auto comps = boundary_components(solid);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].chi == 0);
    CHECK(comps[1].chi == 0);

    classify_sides(comps, k, 0.5);
    const auto& inner = comps[comps[0].side < 0 ? 0 : 1];
    const auto& outer = comps[comps[0].side < 0 ? 1 : 0];
    CHECK(inner.side == -1);
    CHECK(outer.side == +1);
    CHECK(inner.size() < outer.size());  // inner sheet is smaller

    // Every mesh vertex lies inside the union of cube supports.
    for (const auto& v : tube.mesh.vertices) {
        bool inside = false;
        for (int corner = 0; corner < 8 && !inside; ++corner) {
            GridVec anchor{};
            for (int i = 0; i < 3; ++i)
                anchor[i] = static_cast<std::int32_t>(std::floor(v[i] * s.m)) - ((corner >> i) & 1);
            GridVec base{};
            for (int i = 0; i < 3; ++i) base[i] = static_cast<std::int32_t>(std::floor(v[i] * s.m));
            // Only consider cubes whose closed support contains v.
            bool contains = true;
            for (int i = 0; i < 3; ++i) {
                const double x = v[i] * s.m;
                if (x < anchor[i] - 1e-9 || x > anchor[i] + 1 + 1e-9) contains = false;
            }
            if (contains && solid.contains_anchor(anchor)) inside = true;
        }
        CHECK(inside);
    }

    // 200-ray transversality check.
    const auto report = bicollar_ray_check(tube, outer, inner, s, 200, 99, 4);
    CHECK(report.samples == 200);
    CHECK(report.failures == 0);

    // Stage-1 convexity surrogate: the ray through the solid is a single
    // interval.
    for (int i = 0; i < tube.n_rings; i += 7) {
        const auto iv = line_cubeset_intervals(tube.section[i], tube.section_normals[i], solid);
        CHECK(iv.size() == 1);
    }
}

TEST_CASE("classify_sides: mixed labels throw a retriable error") {
    KnotPreset p;
    p.name = "unknot";
    const KnotCurve k = make_knot(p, 0.1);
    const TubeSurface tube = tube_surface(k, rm_frame(k), 0.5, 24);
    // Far too coarse: m=2 cannot separate the sides.
    const CubeSet solid = cubes_meeting(tube.mesh, Scale{2}, 4);
    try {
        auto comps = extract_boundary(solid);
        if (comps.size() == 2) classify_sides(comps, k, 0.5);
        // Either the component count or the vote must fail at this scale.
        CHECK(comps.size() != 2);
    } catch (const InvariantError& e) {
        CHECK(e.retriable);
    }
}

TEST_CASE("choose_scale: auto formula, fixed passthrough, overflow guard") {
    KnotPreset p;
    p.name = "unknot";
    const KnotCurve k = make_knot(p, 0.1);
    CHECK(choose_scale(k, 0.5, ScalePolicy::auto_scale()).m == 32);
    CHECK(choose_scale(k, 0.01, ScalePolicy::auto_scale()).m == 2048);
    CHECK(choose_scale(k, 0.5, ScalePolicy::fixed(4)).m == 4);
    CHECK_THROWS_AS(choose_scale(k, 1e-9, ScalePolicy::auto_scale()), InputError);
    CHECK_THROWS_AS(choose_scale(k, 0.0, ScalePolicy::auto_scale()), InputError);
    CHECK_THROWS_AS(choose_scale(k, 0.5, ScalePolicy::fixed(0)), InputError);
}
