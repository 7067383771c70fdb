#ifndef CUBEKNOT_GEOMETRY_HPP
#define CUBEKNOT_GEOMETRY_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "cubeknot/lattice.hpp"

namespace cubeknot {

/// Geometric tolerance, expressed in lattice units (cube side = 1). Sign
/// tests treat a symmetric band of this width as "touching": closed cubes,
/// so tangency counts as intersection.
inline constexpr double kLatticeEps = 1e-9;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Clip the line t -> origin + t*dir against the unit cube at `anchor`
/// (lattice units), with faces expanded outward by eps so touching yields a
/// (possibly degenerate) interval.
std::optional<Interval> line_unit_cube_interval(const Eigen::Vector3d& origin,
                                                const Eigen::Vector3d& dir,
                                                const GridVec& anchor,
                                                double eps = kLatticeEps);

/// Merge intervals whose gaps are at most `gap`; input need not be sorted.
std::vector<Interval> merge_intervals(std::vector<Interval> intervals, double gap = kLatticeEps);

/// Separating-axis triangle / axis-aligned-cube overlap test (13 axes), in
/// lattice units against the closed unit cube at `anchor`. Overlap is
/// decided with a symmetric eps band, so touching counts.
bool triangle_cube_overlap(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                           const Eigen::Vector3d& c, const GridVec& anchor,
                           double eps = kLatticeEps);

double point_segment_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                              const Eigen::Vector3d& b);

double segment_segment_distance(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                                const Eigen::Vector3d& q0, const Eigen::Vector3d& q1);

} // namespace cubeknot

#endif
