#include "cubeknot/laurent.hpp"

#include <sstream>

namespace cubeknot {

std::string LaurentPoly::to_string(const std::string& var) const {
    if (coeffs_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        const auto [e, c] = *it;
        if (!first) out << (c > 0 ? " + " : " - ");
        else if (c < 0) out << "-";
        first = false;
        const std::int64_t mag = c < 0 ? -c : c;
        if (mag != 1 || e == 0) out << mag;
        if (e != 0) {
            out << var;
            if (e != 1) out << "^" << e;
        }
    }
    return out.str();
}

} // namespace cubeknot
