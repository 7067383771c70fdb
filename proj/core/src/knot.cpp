#include "cubeknot/knot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "cubeknot/geometry.hpp"

namespace cubeknot {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

struct ParametricCurve {
    std::function<Eigen::Vector3d(double)> pos;
    std::function<Eigen::Vector3d(double)> vel;
};

ParametricCurve unknot_curve(double radius) {
    return {
        [radius](double t) { return Eigen::Vector3d(radius * std::cos(t), radius * std::sin(t), 0.0); },
        [radius](double t) { return Eigen::Vector3d(-radius * std::sin(t), radius * std::cos(t), 0.0); },
    };
}

ParametricCurve torus_knot_curve(int p, int q, double R, double r) {
    auto pos = [=](double t) {
        const double w = R + r * std::cos(q * t);
        return Eigen::Vector3d(w * std::cos(p * t), w * std::sin(p * t), r * std::sin(q * t));
    };
    auto vel = [=](double t) {
        const double w = R + r * std::cos(q * t);
        const double dw = -r * q * std::sin(q * t);
        return Eigen::Vector3d(dw * std::cos(p * t) - w * p * std::sin(p * t),
                               dw * std::sin(p * t) + w * p * std::cos(p * t),
                               r * q * std::cos(q * t));
    };
    return {pos, vel};
}

ParametricCurve figure8_curve(double scale) {
    auto pos = [=](double t) {
        const double w = 2.0 + std::cos(2.0 * t);
        return scale * Eigen::Vector3d(w * std::cos(3.0 * t), w * std::sin(3.0 * t), std::sin(4.0 * t));
    };
    auto vel = [=](double t) {
        const double w = 2.0 + std::cos(2.0 * t);
        const double dw = -2.0 * std::sin(2.0 * t);
        return scale * Eigen::Vector3d(dw * std::cos(3.0 * t) - 3.0 * w * std::sin(3.0 * t),
                                       dw * std::sin(3.0 * t) + 3.0 * w * std::cos(3.0 * t),
                                       4.0 * std::cos(4.0 * t));
    };
    return {pos, vel};
}

// Near-uniform arc-length sampling of a closed parametric curve on [0, tau),
// gap <= h_max.
void sample_arclength(const ParametricCurve& c, double h_max, KnotCurve& out) {
    constexpr int kTable = 1 << 15;
    std::vector<double> cum(kTable + 1, 0.0);
    Eigen::Vector3d prev = c.pos(0.0);
    for (int i = 1; i <= kTable; ++i) {
        const Eigen::Vector3d p = c.pos(kTau * i / kTable);
        cum[i] = cum[i - 1] + (p - prev).norm();
        prev = p;
    }
    const double length = cum[kTable];
    const int n = std::max(8, static_cast<int>(std::ceil(length / h_max)));

    out.samples.resize(n);
    out.tangents.resize(n);
    int seg = 0;
    for (int i = 0; i < n; ++i) {
        const double target = length * i / n;
        while (seg + 1 < kTable && cum[seg + 1] < target) ++seg;
        const double s0 = cum[seg], s1 = cum[seg + 1];
        const double frac = s1 > s0 ? (target - s0) / (s1 - s0) : 0.0;
        const double t = kTau * (seg + frac) / kTable;
        out.samples[i] = c.pos(t);
        out.tangents[i] = c.vel(t).normalized();
    }
}

void compute_statistics(KnotCurve& k) {
    const int n = k.size();
    auto at = [&](int i) -> const Eigen::Vector3d& { return k.samples[((i % n) + n) % n]; };

    double min_rho = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector3d a = at(i - 1), b = at(i), c = at(i + 1);
        const double la = (b - a).norm(), lb = (c - b).norm(), lc = (a - c).norm();
        const double area2 = (b - a).cross(c - a).norm();
        if (area2 > 1e-15) min_rho = std::min(min_rho, la * lb * lc / (2.0 * area2));
    }
    k.min_curvature_radius = min_rho;

    // Segment midpoint positions along the curve and the total length.
    std::vector<double> mid(n);
    double length = 0.0, max_gap = 0.0;
    for (int i = 0; i < n; ++i) {
        const double gap = (at(i + 1) - at(i)).norm();
        mid[i] = length + 0.5 * gap;
        length += gap;
        max_gap = std::max(max_gap, gap);
    }
    k.arc_length = length;

    // Segment pairs at arc separation beyond the curvature guard bound the
    // strand-to-strand gap; anything closer along the curve is already
    // controlled by the curvature radius.
    const double guard =
        std::max(std::min(std::numbers::pi * min_rho, length / 3.0), 3.0 * max_gap);

    double min_gap = std::numeric_limits<double>::infinity();
    double strand_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // wrap-adjacent
            const double d = segment_segment_distance(at(i), at(i + 1), at(j), at(j + 1));
            min_gap = std::min(min_gap, d);
            const double arc = std::abs(mid[j] - mid[i]);
            if (std::min(arc, length - arc) >= guard) strand_gap = std::min(strand_gap, d);
        }
    }
    k.min_nonadjacent_gap = min_gap;
    k.strand_gap = strand_gap;
}

void validate_curve(KnotCurve& k, double h_max) {
    const int n = k.size();
    if (n < 4) throw InputError("knot curve needs at least 4 samples");
    for (int i = 0; i < n; ++i) {
        const double gap = (k.samples[(i + 1) % n] - k.samples[i]).norm();
        if (gap <= 1e-12) throw InputError("knot curve has a zero-length segment");
        if (gap > h_max * (1.0 + 1e-9))
            throw InputError("knot curve sample gap " + std::to_string(gap) + " exceeds h_max " +
                             std::to_string(h_max));
    }
    compute_statistics(k);
    if (!(k.min_nonadjacent_gap > 1e-12))
        throw InputError("knot curve is self-intersecting (non-adjacent segments touch)");
}

} // namespace

KnotCurve make_knot(const KnotPreset& preset, double h_max) {
    if (!(h_max > 0)) throw InputError("make_knot: h_max must be positive");
    KnotCurve k;
    k.preset = preset.name;

    if (preset.name == "unknot") {
        if (!(preset.unknot_radius > 0)) throw InputError("make_knot: unknot radius must be positive");
        sample_arclength(unknot_curve(preset.unknot_radius), h_max, k);
        k.params["radius"] = preset.unknot_radius;
    } else if (preset.name == "torus" || preset.name == "trefoil") {
        const int p = preset.name == "trefoil" ? 2 : preset.p;
        const int q = preset.name == "trefoil" ? 3 : preset.q;
        if (p < 2 || q < 2) throw InputError("make_knot: torus knot needs p, q >= 2");
        if (std::gcd(p, q) != 1) throw InputError("make_knot: torus knot needs gcd(p, q) = 1");
        if (!(preset.torus_R > preset.torus_r && preset.torus_r > 0))
            throw InputError("make_knot: torus knot needs R > r > 0");
        sample_arclength(torus_knot_curve(p, q, preset.torus_R, preset.torus_r), h_max, k);
        k.params["p"] = p;
        k.params["q"] = q;
        k.params["R"] = preset.torus_R;
        k.params["rt"] = preset.torus_r;
    } else if (preset.name == "figure8") {
        if (!(preset.figure8_scale > 0)) throw InputError("make_knot: figure8 scale must be positive");
        sample_arclength(figure8_curve(preset.figure8_scale), h_max, k);
        k.params["scale"] = preset.figure8_scale;
    } else if (preset.name == "file") {
        std::ifstream in(preset.path);
        if (!in) throw InputError("make_knot: cannot open polyline file " + preset.path);
        std::vector<Eigen::Vector3d> pts;
        std::string line;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            double x, y, z;
            if (ls >> x >> y >> z) pts.emplace_back(x, y, z);
        }
        return knot_from_polyline(pts, h_max);
    } else {
        throw InputError("make_knot: unknown preset '" + preset.name + "'");
    }

    validate_curve(k, h_max);
    return k;
}

KnotCurve knot_from_polyline(const std::vector<Eigen::Vector3d>& points, double h_max,
                             const std::string& preset_name) {
    KnotCurve k;
    k.preset = preset_name;
    k.samples = points;
    const int n = k.size();
    if (n < 4) throw InputError("polyline knot needs at least 4 points");
    k.tangents.resize(n);
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector3d d = k.samples[(i + 1) % n] - k.samples[(i + n - 1) % n];
        const double len = d.norm();
        if (len <= 1e-12) throw InputError("polyline knot has a degenerate tangent");
        k.tangents[i] = d / len;
    }
    validate_curve(k, h_max);
    return k;
}

Framing rm_frame(const KnotCurve& k) {
    const int n = k.size();
    if (n < 3) throw InputError("rm_frame: need at least 3 samples");
    for (const auto& t : k.tangents)
        if (std::abs(t.norm() - 1.0) > 1e-6) throw InputError("rm_frame: tangents must be unit vectors");

    // Initial normal: axis least aligned with the tangent line, projected.
    // Depends only on the unoriented tangent, so a reversed curve starts
    // from the same frame.
    const Eigen::Vector3d t0 = k.tangents[0];
    int best_axis = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(t0[i]) < std::abs(t0[best_axis])) best_axis = i;
    Eigen::Vector3d e1 = Eigen::Vector3d::Unit(best_axis);
    e1 = (e1 - e1.dot(t0) * t0).normalized();

    Framing f;
    f.e1.resize(n);
    f.e2.resize(n);
    f.e1[0] = e1;
    f.e2[0] = t0.cross(e1);

    // Double-reflection parallel transport around the loop; the final frame
    // lands back on sample 0 and measures the holonomy.
    Eigen::Vector3d cur = e1;
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        const Eigen::Vector3d v1 = k.samples[j] - k.samples[i];
        const double c1 = v1.squaredNorm();
        if (c1 <= 1e-24) throw InputError("rm_frame: zero-length segment");
        const Eigen::Vector3d e1L = cur - (2.0 / c1) * v1.dot(cur) * v1;
        const Eigen::Vector3d tL = k.tangents[i] - (2.0 / c1) * v1.dot(k.tangents[i]) * v1;
        const Eigen::Vector3d v2 = k.tangents[j] - tL;
        const double c2 = v2.squaredNorm();
        Eigen::Vector3d next = c2 > 1e-24 ? (e1L - (2.0 / c2) * v2.dot(e1L) * v2).eval() : e1L;
        next = (next - next.dot(k.tangents[j]) * k.tangents[j]).normalized();
        if (j != 0) {
            f.e1[j] = next;
            f.e2[j] = k.tangents[j].cross(next);
        }
        cur = next;
    }

    f.closure_defect = std::atan2(cur.dot(f.e2[0]), cur.dot(f.e1[0]));

    // Distribute the holonomy uniformly so the framing closes exactly.
    for (int i = 1; i < n; ++i) {
        const double phi = -f.closure_defect * i / n;
        const Eigen::Vector3d a = f.e1[i], b = f.e2[i];
        f.e1[i] = std::cos(phi) * a + std::sin(phi) * b;
        f.e2[i] = k.tangents[i].cross(f.e1[i]);
    }
    return f;
}

int TriMesh::euler_characteristic() const {
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& t : triangles)
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            ++edge_count[{a, b}];
        }
    return static_cast<int>(vertices.size()) - static_cast<int>(edge_count.size()) +
           static_cast<int>(triangles.size());
}

bool TriMesh::watertight() const {
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& t : triangles)
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            ++edge_count[{a, b}];
        }
    for (const auto& [edge, count] : edge_count)
        if (count != 2) return false;
    return true;
}

TubeSurface tube_surface(const KnotCurve& k, const Framing& f, double r, int n_theta) {
    const int n = k.size();
    if (static_cast<int>(f.e1.size()) != n) throw InputError("tube_surface: framing size mismatch");
    if (n_theta < 3) throw InputError("tube_surface: n_theta must be >= 3");
    if (!(r > 0)) throw InputError("tube_surface: radius must be positive");

    const double reach_gap = 0.5 * k.strand_gap;
    const double reach_curv = k.min_curvature_radius;
    if (r >= reach_gap || r >= reach_curv) {
        std::ostringstream msg;
        msg << "tube_surface: radius " << r << " too large, tube would self-intersect"
            << " (must be < half the strand gap " << reach_gap
            << " and < the minimum curvature radius " << reach_curv << ")";
        throw InputError(msg.str());
    }

    TubeSurface tube;
    tube.radius = r;
    tube.n_rings = n;
    tube.n_theta = n_theta;
    tube.mesh.vertices.resize(static_cast<std::size_t>(n) * n_theta);
    tube.vertex_normals.resize(tube.mesh.vertices.size());
    tube.section.resize(n);
    tube.section_normals.resize(n);

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n_theta; ++j) {
            const double theta = kTau * j / n_theta;
            const Eigen::Vector3d normal = std::cos(theta) * f.e1[i] + std::sin(theta) * f.e2[i];
            tube.mesh.vertices[tube.vertex_index(i, j)] = k.samples[i] + r * normal;
            tube.vertex_normals[tube.vertex_index(i, j)] = normal;
        }
        tube.section[i] = k.samples[i] + r * f.e1[i];
        tube.section_normals[i] = f.e1[i];
    }

    tube.mesh.triangles.reserve(static_cast<std::size_t>(2) * n * n_theta);
    for (int i = 0; i < n; ++i) {
        const int i1 = (i + 1) % n;
        for (int j = 0; j < n_theta; ++j) {
            const int j1 = (j + 1) % n_theta;
            const int a = tube.vertex_index(i, j);
            const int b = tube.vertex_index(i, j1);
            const int c = tube.vertex_index(i1, j1);
            const int d = tube.vertex_index(i1, j);
            tube.mesh.triangles.push_back({a, b, d});
            tube.mesh.triangles.push_back({b, c, d});
        }
    }
    return tube;
}

} // namespace cubeknot
