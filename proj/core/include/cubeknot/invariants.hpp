#ifndef CUBEKNOT_INVARIANTS_HPP
#define CUBEKNOT_INVARIANTS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "cubeknot/diagram.hpp"
#include "cubeknot/laurent.hpp"
#include "cubeknot/project.hpp"

namespace cubeknot {

/// State-sum size guard for the Kauffman bracket.
class BracketCapExceeded : public InputError {
public:
    using InputError::InputError;
};

/// |Delta_K(-1)| via the Goeritz matrix of a checkerboard coloring of the
/// diagram's faces. Exact integer arithmetic; polynomial time.
std::uint64_t knot_determinant(const KnotDiagram& d);

/// Kauffman bracket state sum with writhe normalization: the Jones
/// polynomial in the variable A, normalized so the unknot gives 1. Mirror
/// images invert the variable; compare with equal_up_to_mirror. Throws
/// BracketCapExceeded when the diagram has more than `cap` crossings.
LaurentPoly kauffman_bracket(const KnotDiagram& d, int cap = 22, int threads = 1);

struct InvariantSummary {
    std::uint64_t determinant = 0;
    int raw_crossings = 0;
    int crossings = 0;  // after Reidemeister I/II reduction
    int writhe = 0;
    std::string gauss;
    std::optional<LaurentPoly> jones;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    int cap = 22;
    int directions = 4;  // candidate projections per curve, best kept
    int threads = 1;
};

struct VerifyReport {
    InvariantSummary input, output;
    bool determinant_match = false;
    std::optional<bool> jones_match = {};  // up to mirror; absent above cap
    bool pass = false;

    std::string text() const;
};

/// Extract, reduce and summarize the best diagram (fewest reduced
/// crossings over `directions` seeded candidates).
InvariantSummary summarize_invariants(const std::vector<Eigen::Vector3d>& curve,
                                      const VerifyOptions& opts);
InvariantSummary summarize_invariants(const LatticeCycle& cycle, const VerifyOptions& opts);

/// Isotopy-class verification by invariants: determinants must match, and
/// the Jones polynomials must match up to mirror whenever both diagrams are
/// under the cap.
VerifyReport verify_pair(const std::vector<Eigen::Vector3d>& input_curve,
                         const LatticeCycle& output, const VerifyOptions& opts = {});

} // namespace cubeknot

#endif
