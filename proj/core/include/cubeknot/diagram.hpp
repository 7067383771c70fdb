#ifndef CUBEKNOT_DIAGRAM_HPP
#define CUBEKNOT_DIAGRAM_HPP

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubeknot/error.hpp"
#include "cubeknot/project.hpp"

namespace cubeknot {

/// Port roles at a crossing. Ports are indexed 0..3 in counterclockwise
/// geometric order around the crossing; the strand runs straight through, so
/// port k and port (k+2)%4 always belong to the same strand.
enum class PortRole : std::int8_t { OverIn, OverOut, UnderIn, UnderOut };

inline bool is_over(PortRole r) { return r == PortRole::OverIn || r == PortRole::OverOut; }
inline bool is_out(PortRole r) { return r == PortRole::OverOut || r == PortRole::UnderOut; }

struct DiagramCrossing {
    int sign = 0;  // writhe contribution
    std::array<PortRole, 4> role{};
    std::array<int, 4> arc{-1, -1, -1, -1};
};

/// Arc of the diagram, directed along the curve orientation: leaves
/// (c_from, p_from) at an out-port and enters (c_to, p_to) at an in-port.
struct DiagramArc {
    int c_from = -1, p_from = -1;
    int c_to = -1, p_to = -1;
};

struct GaussEntry {
    int crossing = 0;
    bool over = false;
    int sign = 0;
};

/// Planar knot diagram: crossings with counterclockwise port rotations plus
/// the connecting arcs. The empty diagram (no crossings) is the round
/// unknot.
struct KnotDiagram {
    std::vector<DiagramCrossing> crossings;
    std::vector<DiagramArc> arcs;
    Eigen::Vector3d projection_dir = Eigen::Vector3d::UnitZ();

    int n() const { return static_cast<int>(crossings.size()); }
    int writhe() const;

    /// Passage sequence along the curve; empty for the 0-crossing diagram.
    std::vector<GaussEntry> gauss_code() const;
    std::string gauss_string() const;

    /// Structural sanity: reciprocal arc endpoints, one full role set per
    /// crossing, strand-straightness of the rotation. Throws on violation.
    void check_consistent() const;
};

/// Orthogonal projection of a closed polyline along a generic direction,
/// crossings resolved by exact rational arithmetic (inputs are converted to
/// their exact binary-rational values, so integer lattice cycles are exact).
/// When `dir` is given it is tried first and perturbed if degenerate; "auto"
/// samples seeded directions. Throws InputError when no generic direction is
/// found in 64 attempts or when the curve intersects itself.
KnotDiagram extract_diagram(const std::vector<Eigen::Vector3d>& curve,
                            const std::optional<Eigen::Vector3d>& dir, std::uint64_t seed);

KnotDiagram extract_diagram(const LatticeCycle& cycle, const std::optional<Eigen::Vector3d>& dir,
                            std::uint64_t seed);

/// Faces of the diagram on S^2: orbits of directed arcs under the rotation
/// system. `of_arc[a]` holds the face left of the arc walked backward ([0])
/// and forward ([1]); `sector[c][k]` is the face filling the sector between
/// ports k and k+1 of crossing c.
struct DiagramFaces {
    std::vector<std::vector<std::pair<int, bool>>> walks;  // (arc, forward) per face
    std::vector<std::array<int, 2>> of_arc;
    std::vector<std::array<int, 4>> sector;

    int count() const { return static_cast<int>(walks.size()); }
};
DiagramFaces diagram_faces(const KnotDiagram& d);

/// Removes Reidemeister-I kinks and Reidemeister-II bigons until none are
/// left. Returns the number of crossings removed. Both invariants computed
/// downstream are invariant under these moves.
int simplify_reidemeister(KnotDiagram& d);

/// Every crossing switched (the mirror image through the projection plane).
KnotDiagram mirror_diagram(const KnotDiagram& d);

/// Inserts a curl on the given arc (Reidemeister-I move); chirality picks
/// the handedness. Used by the move-insensitivity tests.
void insert_kink(KnotDiagram& d, int arc, int chirality);

} // namespace cubeknot

#endif
