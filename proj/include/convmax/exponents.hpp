#pragma once

#include <cmath>
#include <limits>

#include "convmax/errors.hpp"

namespace convmax {

/// Validated exponent triple (p, q, r) with 1 < p < r < infinity and
/// 1/p + 1/q = 1 + 1/r.  q is derived from p and r, never set directly.
class ExponentTriple {
public:
    static constexpr double young_tolerance = 1e-12;

    ExponentTriple(double p, double r) : p_(p), r_(r) {
        if (!(p > 1.0) || !std::isfinite(p))
            throw domain_error("ExponentTriple: requires p > 1, got p = " + std::to_string(p));
        if (!(r < std::numeric_limits<double>::infinity()) || !std::isfinite(r))
            throw domain_error("ExponentTriple: requires r < infinity");
        if (!(p < r))
            throw domain_error("ExponentTriple: requires p < r, got p = " + std::to_string(p) +
                               ", r = " + std::to_string(r));
        q_ = 1.0 / (1.0 + 1.0 / r - 1.0 / p);
        if (!(q_ > 1.0) || !std::isfinite(q_))
            throw domain_error("ExponentTriple: derived q = 1/(1 + 1/r - 1/p) is not in (1, infinity)");
        if (std::abs(1.0 / p_ + 1.0 / q_ - 1.0 - 1.0 / r_) > young_tolerance)
            throw domain_error("ExponentTriple: exponent relation violated beyond tolerance");
    }

    double p() const { return p_; }
    double q() const { return q_; }
    double r() const { return r_; }

    double p_dual() const { return p_ / (p_ - 1.0); }
    double r_dual() const { return r_ / (r_ - 1.0); }

private:
    double p_;
    double r_;
    double q_;
};

/// Builds the triple from (p, r); q is forced by the exponent relation.
inline ExponentTriple make_exponents(double p, double r) { return ExponentTriple(p, r); }

} // namespace convmax
