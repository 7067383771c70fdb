#ifndef CUBEKNOT_HYPERPLANE_HPP
#define CUBEKNOT_HYPERPLANE_HPP

#include <array>
#include <vector>

#include "cubeknot/lattice.hpp"

namespace cubeknot {

/// Affine hyperplane {x : <x, normal> = offset} in world coordinates, with a
/// unit normal. Dimension-generic up to kMaxDim; the pair construction below
/// is for d = 3.
struct Hyperplane {
    std::array<double, kMaxDim> normal{};
    double offset = 0.0;
    int dim = 3;
};

/// Normalizes the direction; throws InputError on a zero vector or if the
/// stored normal would miss |n| = 1 by more than 1e-12.
Hyperplane make_plane(std::initializer_list<double> normal, double offset);
Hyperplane make_plane(const std::array<double, kMaxDim>& normal, double offset, int dim);

/// Signed value <v, n> - m*offset of a lattice vertex, in lattice units.
double lattice_vertex_side(const Hyperplane& p, const GridVec& v, Scale s);

/// All cubes of the window whose closed support meets the plane, decided by
/// the vertex sign test min_v <v,n> <= m*offset <= max_v <v,n> with the
/// symmetric touching band. Canonically sorted.
std::vector<CellKey> plane_cubes(const Hyperplane& p, Scale s, const Window& w);

/// The face of a cube disjoint from P spanned by the vertices at minimum
/// distance to P. Throws InputError if the cube meets P.
CellKey nearest_face(const CellKey& cube, const Hyperplane& p, Scale s);

/// Parameter interval [a, b] of the normal line t -> k + t*n inside the cube
/// union, in world units, with a < 0 < b. Throws InvariantError("...disconnected...")
/// if the per-cube intervals do not merge into a single component.
struct CrossingInterval {
    double a = 0.0;
    double b = 0.0;
};
CrossingInterval line_crossing_interval(const Hyperplane& p, const std::array<double, 3>& k,
                                        const std::vector<CellKey>& qp, Scale s);

/// Ordered open path in the 1-skeleton: unit edges, consecutive edges share
/// a vertex, no vertex repeated.
struct LatticePath {
    std::vector<CellKey> edges;
    std::vector<GridVec> vertices;  // edges.size() + 1 entries
};

/// Pushes the line P1 n P2 (orthogonal planes, d = 3) to the 1-skeleton: one
/// boundary component E of the cube tube of P1, the band B of squares of E
/// meeting P2, and the boundary component of B on the positive side of P2,
/// clipped to `w`.
LatticePath plane_pair_cycle(const Hyperplane& p1, const Hyperplane& p2, Scale s, const Window& w);

/// Same construction with the intermediate objects kept for export.
struct PlanePairArtifacts {
    LatticePath path;
    std::vector<CellKey> e_component;  // squares of E
    std::vector<CellKey> band;         // squares of B
};
PlanePairArtifacts plane_pair_cycle_artifacts(const Hyperplane& p1, const Hyperplane& p2, Scale s,
                                              const Window& w);

} // namespace cubeknot

#endif
