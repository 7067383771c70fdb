#ifndef CUBEKNOT_LAURENT_HPP
#define CUBEKNOT_LAURENT_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <string>

namespace cubeknot {

/// Laurent polynomial with integer coefficients, canonical (no stored
/// zeros). Exponents may be negative.
class LaurentPoly {
public:
    LaurentPoly() = default;

    static LaurentPoly monomial(std::int64_t coeff, int exp) {
        LaurentPoly p;
        if (coeff != 0) p.coeffs_[exp] = coeff;
        return p;
    }
    static LaurentPoly one() { return monomial(1, 0); }

    bool is_zero() const { return coeffs_.empty(); }
    std::int64_t coeff(int exp) const {
        auto it = coeffs_.find(exp);
        return it == coeffs_.end() ? 0 : it->second;
    }
    int min_exp() const { return coeffs_.begin()->first; }
    int max_exp() const { return coeffs_.rbegin()->first; }
    const std::map<int, std::int64_t>& terms() const { return coeffs_; }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (const auto& [e, c] : o.coeffs_) add_term(e, c);
        return *this;
    }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly out;
        for (const auto& [ea, ca] : a.coeffs_)
            for (const auto& [eb, cb] : b.coeffs_) out.add_term(ea + eb, ca * cb);
        return out;
    }

    LaurentPoly& scale_monomial(std::int64_t coeff, int exp) {
        std::map<int, std::int64_t> next;
        for (const auto& [e, c] : coeffs_) {
            const std::int64_t nc = c * coeff;
            if (nc != 0) next[e + exp] = nc;
        }
        coeffs_ = std::move(next);
        return *this;
    }

    /// Variable inversion A -> A^{-1} (mirror image of a knot).
    LaurentPoly mirrored() const {
        LaurentPoly out;
        for (const auto& [e, c] : coeffs_) out.coeffs_[-e] = c;
        return out;
    }

    std::complex<double> eval(const std::complex<double>& a) const {
        std::complex<double> sum = 0.0;
        for (const auto& [e, c] : coeffs_) sum += static_cast<double>(c) * std::pow(a, e);
        return sum;
    }

    friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

    std::string to_string(const std::string& var = "A") const;

private:
    void add_term(int exp, std::int64_t coeff) {
        auto it = coeffs_.find(exp);
        if (it == coeffs_.end()) {
            if (coeff != 0) coeffs_[exp] = coeff;
        } else {
            it->second += coeff;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    std::map<int, std::int64_t> coeffs_;
};

inline bool equal_up_to_mirror(const LaurentPoly& a, const LaurentPoly& b) {
    return a == b || a == b.mirrored();
}

} // namespace cubeknot

#endif
