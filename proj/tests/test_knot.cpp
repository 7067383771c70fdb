#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>

#include "cubeknot/geometry.hpp"
#include "cubeknot/invariants.hpp"
#include "cubeknot/knot.hpp"

using namespace cubeknot;

namespace {

KnotPreset unknot_preset(double radius = 2.0) {
    KnotPreset p;
    p.name = "unknot";
    p.unknot_radius = radius;
    return p;
}

KnotPreset trefoil_preset() {
    KnotPreset p;
    p.name = "trefoil";
    return p;
}

} // namespace

TEST_CASE("make_knot: unknot sampling density") {
    const KnotCurve k = make_knot(unknot_preset(2.0), 0.1);
    // ceil(2*pi*2 / 0.1) = 126 samples, closed, gap <= h_max.
    CHECK(k.size() == 126);
    const int n = k.size();
    for (int i = 0; i < n; ++i) {
        CHECK((k.samples[(i + 1) % n] - k.samples[i]).norm() <= 0.1 + 1e-9);
        CHECK(k.samples[i][2] == 0.0);
        CHECK(k.samples[i].head<2>().norm() == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(std::abs(k.tangents[i].norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("make_knot: trefoil is simple at tolerance (brute-force gap)") {
    const KnotCurve k = make_knot(trefoil_preset(), 0.1);
    CHECK(k.min_nonadjacent_gap > 0.0);
    CHECK(k.strand_gap > 0.6);  // distant strands of the (2,3) torus knot stay apart

    // Independent brute force over all non-adjacent segment pairs.
    const int n = k.size();
    double brute = 1e300;
    for (int i = 0; i < n; ++i)
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            brute = std::min(brute, segment_segment_distance(k.samples[i], k.samples[(i + 1) % n],
                                                             k.samples[j], k.samples[(j + 1) % n]));
        }
    CHECK(k.min_nonadjacent_gap == doctest::Approx(brute));
}

TEST_CASE("make_knot: bad parameters are rejected") {
    KnotPreset torus;
    torus.name = "torus";
    torus.p = 2;
    torus.q = 4;  // gcd != 1
    CHECK_THROWS_AS(make_knot(torus, 0.1), InputError);
    torus.q = 3;
    torus.torus_r = 3.0;  // r >= R
    CHECK_THROWS_AS(make_knot(torus, 0.1), InputError);
    CHECK_THROWS_AS(make_knot(unknot_preset(-1.0), 0.1), InputError);
    CHECK_THROWS_AS(make_knot(unknot_preset(2.0), 0.0), InputError);
}

TEST_CASE("polyline round trip and rejection of self-intersecting input") {
    const KnotCurve k = make_knot(unknot_preset(2.0), 0.2);
    const std::string path = "test_polyline_roundtrip.txt";
    {
        std::ofstream out(path);
        out.precision(17);
        for (const auto& p : k.samples) out << p[0] << " " << p[1] << " " << p[2] << "\n";
    }
    KnotPreset file;
    file.name = "file";
    file.path = path;
    const KnotCurve k2 = make_knot(file, 0.2);
    REQUIRE(k2.size() == k.size());
    for (int i = 0; i < k.size(); ++i) CHECK((k2.samples[i] - k.samples[i]).norm() == 0.0);

    // A figure-eight-shaped flat polyline pinches at the origin.
    std::vector<Eigen::Vector3d> bad{{0, 0, 0}, {1, 1, 0},  {2, 0, 0},  {1, -1, 0},
                                     {0, 0, 0}, {-1, 1, 0}, {-2, 0, 0}, {-1, -1, 0}};
    CHECK_THROWS_AS(knot_from_polyline(bad, 3.0), InputError);
    std::remove(path.c_str());
}

TEST_CASE("rm_frame: circle frames are radial up to a constant rotation") {
    const KnotCurve k = make_knot(unknot_preset(2.0), 0.05);
    const Framing f = rm_frame(k);
    const int n = k.size();

    double angle0 = 0.0;
    for (int i = 0; i < n; ++i) {
        // Orthonormality at 1e-9.
        CHECK(std::abs(f.e1[i].norm() - 1.0) < 1e-9);
        CHECK(std::abs(f.e2[i].norm() - 1.0) < 1e-9);
        CHECK(std::abs(f.e1[i].dot(f.e2[i])) < 1e-9);
        CHECK(std::abs(f.e1[i].dot(k.tangents[i])) < 1e-9);
        CHECK(std::abs(f.e2[i].dot(k.tangents[i])) < 1e-9);

        // Angle of e1 against the (radial, binormal) frame of the planar
        // circle must be constant.
        const Eigen::Vector3d radial = Eigen::Vector3d(k.samples[i][0], k.samples[i][1], 0).normalized();
        const Eigen::Vector3d binormal(0, 0, 1);
        const double angle = std::atan2(f.e1[i].dot(binormal), f.e1[i].dot(radial));
        if (i == 0)
            angle0 = angle;
        else
            CHECK(std::abs(std::remainder(angle - angle0, 2 * std::numbers::pi)) < 1e-6);
    }
    CHECK(std::abs(f.closure_defect) < 1e-6);  // flat curve: no holonomy
}

TEST_CASE("rm_frame: trefoil closure defect is reported and corrected") {
    const KnotCurve k = make_knot(trefoil_preset(), 0.05);
    const Framing f = rm_frame(k);
    CHECK(std::abs(f.closure_defect) > 1e-4);  // the writhe-induced holonomy is real

    // After correction the framing closes: transport e1[n-1] across the last
    // segment and compare with e1[0].
    const int n = k.size();
    const Eigen::Vector3d v1 = k.samples[0] - k.samples[n - 1];
    const double c1 = v1.squaredNorm();
    const Eigen::Vector3d e1L = f.e1[n - 1] - (2.0 / c1) * v1.dot(f.e1[n - 1]) * v1;
    const Eigen::Vector3d tL = k.tangents[n - 1] - (2.0 / c1) * v1.dot(k.tangents[n - 1]) * v1;
    const Eigen::Vector3d v2 = k.tangents[0] - tL;
    const double c2 = v2.squaredNorm();
    Eigen::Vector3d transported = c2 > 1e-24 ? (e1L - (2.0 / c2) * v2.dot(e1L) * v2).eval() : e1L;
    transported = (transported - transported.dot(k.tangents[0]) * k.tangents[0]).normalized();

    // One correction step of the defect is spread over the last segment.
    const double step = f.closure_defect / n;
    const Eigen::Vector3d expected =
        std::cos(-step) * transported + std::sin(-step) * k.tangents[0].cross(transported);
    CHECK((expected - f.e1[0]).norm() < 1e-6);
}

TEST_CASE("rm_frame: degenerate curves are rejected") {
    KnotCurve k;
    k.samples = {{0, 0, 0}, {1, 0, 0}};
    k.tangents = {{1, 0, 0}, {-1, 0, 0}};
    CHECK_THROWS_AS(rm_frame(k), InputError);
}

TEST_CASE("tube_surface: unknot torus mesh is exact by construction") {
    const KnotCurve k = make_knot(unknot_preset(2.0), 0.1);
    const Framing f = rm_frame(k);
    const TubeSurface tube = tube_surface(k, f, 0.5, 16);

    CHECK(tube.mesh.euler_characteristic() == 0);
    CHECK(tube.mesh.watertight());
    REQUIRE(tube.mesh.vertices.size() == static_cast<std::size_t>(k.size()) * 16);
    for (int i = 0; i < k.size(); ++i)
        for (int j = 0; j < 16; ++j) {
            const auto& v = tube.mesh.vertices[tube.vertex_index(i, j)];
            CHECK((v - k.samples[i]).norm() == doctest::Approx(0.5).epsilon(1e-12));
            // Outward normals point away from the centerline.
            CHECK(tube.vertex_normals[tube.vertex_index(i, j)].dot(v - k.samples[i]) > 0);
        }

    // Section is the theta = 0 ring: gamma + r*e1.
    for (int i = 0; i < k.size(); ++i) {
        CHECK((tube.section[i] - (k.samples[i] + 0.5 * f.e1[i])).norm() < 1e-12);
        CHECK((tube.section_normals[i] - f.e1[i]).norm() == 0.0);
    }
}

TEST_CASE("tube_surface: oversized radius reports both reach bounds") {
    const KnotCurve k = make_knot(trefoil_preset(), 0.1);
    const Framing f = rm_frame(k);
    CHECK_NOTHROW(tube_surface(k, f, 0.3, 12));
    try {
        tube_surface(k, f, 1.5, 12);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("self-intersect") != std::string::npos);
        CHECK(msg.find("gap") != std::string::npos);
        CHECK(msg.find("curvature") != std::string::npos);
    }
}

TEST_CASE("tube_surface: embeddedness spot check between distant rings") {
    const KnotCurve k = make_knot(trefoil_preset(), 0.15);
    const Framing f = rm_frame(k);
    const TubeSurface tube = tube_surface(k, f, 0.3, 10);

    // Min distance between mesh vertices of rings that are far apart along
    // the curve must stay positive (no self-contact).
    const int n = tube.n_rings;
    double min_gap = 1e300;
    for (int i = 0; i < n; i += 3) {
        for (int j = i + 8; j < n - 4; j += 3) {
            for (int a = 0; a < tube.n_theta; ++a)
                for (int b = 0; b < tube.n_theta; ++b)
                    min_gap = std::min(min_gap, (tube.mesh.vertices[tube.vertex_index(i, a)] -
                                                 tube.mesh.vertices[tube.vertex_index(j, b)])
                                                    .norm());
        }
    }
    CHECK(min_gap > 0.0);
}

TEST_CASE("section and centerline carry the same determinant (weak isotopy check)") {
    const KnotCurve k = make_knot(trefoil_preset(), 0.1);
    const Framing f = rm_frame(k);
    const TubeSurface tube = tube_surface(k, f, 0.3, 12);

    VerifyOptions opts;
    opts.seed = 11;
    opts.directions = 2;
    const auto curve_summary = summarize_invariants(k.samples, opts);
    const auto section_summary = summarize_invariants(tube.section, opts);
    CHECK(curve_summary.determinant == 3);
    CHECK(section_summary.determinant == 3);
}
