#ifndef CUBEKNOT_KNOT_HPP
#define CUBEKNOT_KNOT_HPP

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "cubeknot/error.hpp"

namespace cubeknot {

/// Closed sampled curve in R^3. `samples[i]` connects to `samples[i+1]` and
/// the last sample connects back to the first; the first sample is not
/// repeated. Tangents are unit vectors.
struct KnotCurve {
    std::vector<Eigen::Vector3d> samples;
    std::vector<Eigen::Vector3d> tangents;
    std::string preset;
    std::map<std::string, double> params;

    // Cached curve statistics, filled by make_knot.
    double min_nonadjacent_gap = 0.0;  // min distance between non-adjacent segments
    double min_curvature_radius = 0.0;
    double arc_length = 0.0;
    // Min distance between segment pairs whose separation along the curve
    // exceeds the curvature guard (pi * min curvature radius). Distances at
    // shorter arc separation are controlled by the curvature bound, so this
    // is the strand-to-strand gap that limits the tube radius.
    double strand_gap = 0.0;

    int size() const { return static_cast<int>(samples.size()); }
};

struct KnotPreset {
    std::string name;  // unknot | torus | trefoil | figure8 | file
    double unknot_radius = 2.0;
    int p = 2, q = 3;
    double torus_R = 2.0, torus_r = 0.8;
    double figure8_scale = 1.0;
    std::string path;  // polyline file for name == "file"
};

/// Samples the preset curve at near-uniform arc length with gap <= h_max and
/// verifies embeddedness (min distance between non-adjacent segments > 0).
KnotCurve make_knot(const KnotPreset& preset, double h_max);

/// Reads a closed polyline ("x y z" per line, closure implicit) and attaches
/// central-difference tangents.
KnotCurve knot_from_polyline(const std::vector<Eigen::Vector3d>& points, double h_max,
                             const std::string& preset_name = "file");

/// Orthonormal frame of the normal plane at every sample. The frames close
/// around the curve exactly: the holonomy of the parallel transport is
/// measured and distributed uniformly as a rotation in the normal plane.
struct Framing {
    std::vector<Eigen::Vector3d> e1, e2;
    double closure_defect = 0.0;  // radians, before the correction
};

/// Rotation-minimizing frames (double reflection transport) with closure
/// correction. Throws InputError for curves with fewer than 3 samples or
/// degenerate tangents.
Framing rm_frame(const KnotCurve& k);

struct TriMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> triangles;

    int euler_characteristic() const;
    /// True iff every edge is shared by exactly two triangles.
    bool watertight() const;
};

/// Triangulated boundary of the closed tubular neighborhood of radius r,
/// with the section curve theta = 0 riding on the mesh.
struct TubeSurface {
    TriMesh mesh;
    std::vector<Eigen::Vector3d> vertex_normals;   // unit, outward
    std::vector<Eigen::Vector3d> section;          // = centerline + r * e1
    std::vector<Eigen::Vector3d> section_normals;  // = e1
    double radius = 0.0;
    int n_rings = 0, n_theta = 0;

    int vertex_index(int ring, int theta) const { return ring * n_theta + theta; }
};

/// Sweeps the framed circle of radius r along the curve. Requires r below
/// both tube-embeddability bounds (half the non-adjacent segment gap and the
/// minimum curvature radius); the error message reports both.
TubeSurface tube_surface(const KnotCurve& k, const Framing& f, double r, int n_theta);

} // namespace cubeknot

#endif
