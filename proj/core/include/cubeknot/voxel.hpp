#ifndef CUBEKNOT_VOXEL_HPP
#define CUBEKNOT_VOXEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cubeknot/geometry.hpp"
#include "cubeknot/knot.hpp"
#include "cubeknot/lattice.hpp"
#include "cubeknot/rng.hpp"

namespace cubeknot {

/// Canonically sorted, deduplicated set of 3-cubes of the subcubulation.
struct CubeSet {
    Scale scale;
    std::vector<CellKey> cubes;

    bool contains(const CellKey& c) const;
    bool contains_anchor(const GridVec& a) const;
};

/// All cubes whose closed support meets a triangle of the mesh. Candidates
/// are pruned to dilated triangle bounding boxes (the construction only ever
/// needs cubes within the slab distance of the surface); the per-pair test
/// is the 13-axis separating-axis test with the touching band. Output is
/// canonical and independent of the thread count.
CubeSet cubes_meeting(const TriMesh& mesh, Scale s, int threads = 1);

/// Codimension-1 cubical surface: squares plus resolved surface adjacency.
/// `neighbors[i][slot]` is the square across edge `slot` of square i, or -1
/// where the surface was clipped by a window. Pinched edges (four boundary
/// squares around one edge) are resolved by pairing the two squares bounding
/// the same solid cube, which makes the abstract surface a 2-manifold.
struct CubicalSurface {
    Scale scale;
    std::vector<CellKey> squares;
    std::vector<std::array<std::int32_t, 4>> neighbors;
    std::vector<std::uint8_t> solid_up;  // solid coface on the +normal side?
    int chi = 0;
    int side = 0;  // +1 outer, -1 inner, 0 unlabeled

    int size() const { return static_cast<int>(squares.size()); }
    double area() const { return static_cast<double>(squares.size()) / (double(scale.m) * scale.m); }
    int find_square(const CellKey& sq) const;  // -1 if absent

    /// Edge cell of square i at the given slot. For a square spanning axes
    /// u < v: slot 0/1 run along u at the v-/v+ side, slot 2/3 along v at
    /// the u-/u+ side.
    CellKey edge_cell(int i, int slot) const;
    /// The two lattice vertices of that edge, ordered along the edge axis.
    std::pair<GridVec, GridVec> edge_vertices(int i, int slot) const;
    bool adjacent(int i, int j) const;
    /// Slot on neighbors[i][slot] that carries the same geometric edge, or
    /// -1 when there is no neighbor.
    int partner_slot(int i, int slot) const;
};

/// Euler characteristic (V - E + F) of the abstract complex spanned by the
/// masked squares, with edges glued only where both sides are in the mask.
/// Pinch-resolved gluing, so this is the Euler characteristic of the
/// resolved 2-manifold (with boundary where the mask or window cuts).
int subcomplex_euler_characteristic(const CubicalSurface& surf, const std::vector<char>& mask);

/// Boundary squares of the solid (faces with exactly one solid coface),
/// grouped into connected components under the resolved adjacency. When
/// `window` is given, faces whose empty coface falls outside it are treated
/// as clipped (rim) rather than boundary.
std::vector<CubicalSurface> extract_boundary(const CubeSet& solid,
                                             const std::optional<Window>& window = {});

/// extract_boundary specialized to the bicollar claim: exactly two
/// components expected; anything else throws a scale-retriable
/// InvariantError carrying the component diagnostics.
std::vector<CubicalSurface> boundary_components(const CubeSet& solid);

/// Labels the two components by distance to the centerline: the component
/// whose square centroids all lie at distance < r is "-" (inner, side = -1),
/// the other "+" (outer). A mixed vote within one component means the scale
/// is too coarse and throws (retriable).
void classify_sides(std::vector<CubicalSurface>& components, const KnotCurve& k, double r);

struct ScalePolicy {
    enum class Kind { Auto, Fixed } kind = Kind::Auto;
    int fixed_m = 4;

    static ScalePolicy auto_scale() { return {Kind::Auto, 0}; }
    static ScalePolicy fixed(int m) { return {Kind::Fixed, m}; }
};

/// Auto policy: the smallest m in {2, 4, 8, ...} with m*r >= 6*sqrt(3) and
/// m*min_curvature_radius >= 6*sqrt(3). This is a heuristic stand-in for the
/// unquantified "m big enough" of the construction; the downstream bicollar
/// checks stay authoritative and drive retries. Guarded against overflow for
/// tiny r (throws before any retry loop).
Scale choose_scale(const KnotCurve& k, double r, const ScalePolicy& policy);

/// Hash index of a surface's squares for ray queries.
struct SquareLookup {
    const CubicalSurface* surface = nullptr;
    std::unordered_map<CellKey, std::int32_t, CellKeyHash> index;

    static SquareLookup build(const CubicalSurface& surf);
};

/// A transversal crossing of a ray with a surface square, lattice units.
struct RayHit {
    double t = 0.0;
    std::int32_t square = -1;
    Eigen::Vector3d point;
};

/// All crossings of origin + t*dir with the surface for t in (t_min, t_max],
/// sorted by t. Hits landing within 1e-9 of a square edge are non-generic;
/// the ray origin is retried with seeded jitter of the given magnitude until
/// every hit is interior (throws after max_attempts).
std::vector<RayHit> ray_surface_crossings(const Eigen::Vector3d& origin_lattice,
                                          const Eigen::Vector3d& dir, const SquareLookup& surf,
                                          double t_min, double t_max, Rng& jitter,
                                          double jitter_mag, int max_attempts);

/// Transversal ray check of the bicollar property: from sampled mesh points,
/// the outward normal ray must cross the "+" component exactly once before
/// leaving the dilated neighborhood, and the inward ray must cross "-"
/// exactly once.
struct BicollarRayReport {
    int samples = 0;
    int failures = 0;
    int jitter_retries = 0;
};
BicollarRayReport bicollar_ray_check(const TubeSurface& m, const CubicalSurface& plus,
                                     const CubicalSurface& minus, Scale s, int n_samples,
                                     std::uint64_t seed, int threads = 1);

/// Intersection parameters of the line origin + t*dir (world units) with the
/// solid, merged; the bicollar/convexity surrogate asserts this is a single
/// interval.
std::vector<Interval> line_cubeset_intervals(const Eigen::Vector3d& origin,
                                             const Eigen::Vector3d& dir, const CubeSet& solid);

} // namespace cubeknot

#endif
