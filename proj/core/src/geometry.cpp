#include "cubeknot/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace cubeknot {

std::optional<Interval> line_unit_cube_interval(const Eigen::Vector3d& origin,
                                                const Eigen::Vector3d& dir,
                                                const GridVec& anchor,
                                                double eps) {
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        const double lo = anchor[i] - eps, hi = anchor[i] + 1.0 + eps;
        if (std::abs(dir[i]) < 1e-14) {
            if (origin[i] < lo || origin[i] > hi) return std::nullopt;
            continue;
        }
        double a = (lo - origin[i]) / dir[i];
        double b = (hi - origin[i]) / dir[i];
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
        if (t0 > t1) return std::nullopt;
    }
    if (!std::isfinite(t0) || !std::isfinite(t1)) return std::nullopt;
    return Interval{t0, t1};
}

std::vector<Interval> merge_intervals(std::vector<Interval> intervals, double gap) {
    if (intervals.empty()) return {};
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    std::vector<Interval> out;
    out.push_back(intervals.front());
    for (std::size_t i = 1; i < intervals.size(); ++i) {
        if (intervals[i].lo <= out.back().hi + gap)
            out.back().hi = std::max(out.back().hi, intervals[i].hi);
        else
            out.push_back(intervals[i]);
    }
    return out;
}

namespace {

// Projection overlap helper for the SAT test: triangle projected to a single
// axis against the cube's projection [c - h, c + h].
inline bool axis_separates(double p0, double p1, double p2, double c, double h, double eps) {
    const double mn = std::min({p0, p1, p2});
    const double mx = std::max({p0, p1, p2});
    return mn > c + h + eps || mx < c - h - eps;
}

} // namespace

bool triangle_cube_overlap(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                           const Eigen::Vector3d& c, const GridVec& anchor,
                           double eps) {
    const Eigen::Vector3d center(anchor[0] + 0.5, anchor[1] + 0.5, anchor[2] + 0.5);
    const double h = 0.5;

    const Eigen::Vector3d v0 = a - center, v1 = b - center, v2 = c - center;

    // Cube face normals.
    for (int i = 0; i < 3; ++i)
        if (axis_separates(v0[i], v1[i], v2[i], 0.0, h, eps)) return false;

    const Eigen::Vector3d e0 = v1 - v0, e1 = v2 - v1, e2 = v0 - v2;

    // Triangle normal.
    {
        const Eigen::Vector3d n = e0.cross(e1);
        const double r = h * (std::abs(n[0]) + std::abs(n[1]) + std::abs(n[2]));
        const double d = n.dot(v0);
        const double band = eps * n.norm();
        if (d > r + band || d < -r - band) return false;
    }

    // Nine edge cross products.
    const Eigen::Vector3d edges[3] = {e0, e1, e2};
    for (const auto& e : edges) {
        for (int i = 0; i < 3; ++i) {
            Eigen::Vector3d ax = Eigen::Vector3d::Unit(i).cross(e);
            const double len = ax.norm();
            if (len < 1e-14) continue;
            const double p0 = ax.dot(v0), p1 = ax.dot(v1), p2 = ax.dot(v2);
            const double r = h * (std::abs(ax[0]) + std::abs(ax[1]) + std::abs(ax[2]));
            if (axis_separates(p0, p1, p2, 0.0, r, eps * len)) return false;
        }
    }
    return true;
}

double point_segment_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                              const Eigen::Vector3d& b) {
    const Eigen::Vector3d ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 <= 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

double segment_segment_distance(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                                const Eigen::Vector3d& q0, const Eigen::Vector3d& q1) {
    // Standard closest-point parametrization with clamped endpoints.
    const Eigen::Vector3d d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
    const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
    double s = 0.0, t = 0.0;
    if (a <= 1e-30 && e <= 1e-30) return r.norm();
    if (a <= 1e-30) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double cval = d1.dot(r);
        if (e <= 1e-30) {
            s = std::clamp(-cval / a, 0.0, 1.0);
        } else {
            const double bd = d1.dot(d2);
            const double denom = a * e - bd * bd;
            if (denom > 1e-30) s = std::clamp((bd * f - cval * e) / denom, 0.0, 1.0);
            t = (bd * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-cval / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((bd - cval) / a, 0.0, 1.0);
            }
        }
    }
    return ((p0 + s * d1) - (q0 + t * d2)).norm();
}

} // namespace cubeknot
