#ifndef CUBEKNOT_PROJECT_HPP
#define CUBEKNOT_PROJECT_HPP

#include <cstdint>
#include <vector>

#include "cubeknot/voxel.hpp"

namespace cubeknot {

/// Ordered points on a cubical surface, each tagged with its carrying
/// square. Consecutive points lie on the same or edge-adjacent squares.
struct SurfacePath {
    std::vector<Eigen::Vector3d> points;  // world coordinates
    std::vector<std::int32_t> squares;    // indices into the surface
    bool closed = true;

    int size() const { return static_cast<int>(points.size()); }
};

/// Simple closed cycle in the 1-skeleton at scale 1/m: consecutive vertices
/// differ by one unit step, no vertex repeats, last connects to first.
struct LatticeCycle {
    Scale scale;
    std::vector<GridVec> vertices;

    int size() const { return static_cast<int>(vertices.size()); }
};

/// Throws InvariantError unless the cycle is closed, simple and made of unit
/// steps.
void validate_cycle(const LatticeCycle& cycle);

/// True iff every edge of the cycle is a face of at least one cube of the
/// solid (exact integer incidence).
bool cycle_edges_on_cube_boundary(const LatticeCycle& cycle, const CubeSet& solid);

/// Stage 1: push the section from the smooth tube onto the "+" cubical
/// component by casting the per-sample outward ray to its first crossing.
/// Rays grazing an edge of the complex are retried with seeded jitter of
/// magnitude 1e-6/m. Where consecutive hits land on non-adjacent squares the
/// section segment is bisected adaptively (depth <= 12) until the chain is
/// edge-connected.
SurfacePath push_to_surface(const std::vector<Eigen::Vector3d>& section,
                            const std::vector<Eigen::Vector3d>& section_normals,
                            const CubicalSurface& plus, Scale s, std::uint64_t jitter_seed,
                            bool closed = true);

/// Stage 2a: carrying squares of the path. The result must be
/// edge-connected; a gap means the sampling was too sparse.
std::vector<std::int32_t> face_tube(const SurfacePath& path, const CubicalSurface& surface);

/// Stage 2b: boundary of the face tube, traced in the 1-skeleton. The tube
/// must be an annulus (connected, chi = 0, exactly two boundary curves).
/// Small pinch loops that are null-homotopic in the tube (area <= 2 squares)
/// are discarded; anything worse throws a scale-retriable error. The chosen
/// cycle is the component whose lexicographically smallest vertex is
/// smallest; it is oriented along the path and rotated to start at its
/// smallest vertex.
struct TubeBoundary {
    LatticeCycle chosen;
    LatticeCycle other;
    int warts_discarded = 0;
};
TubeBoundary skeleton_cycle(const std::vector<std::int32_t>& tube, const CubicalSurface& surface,
                            const SurfacePath& path);

} // namespace cubeknot

#endif
