#pragma once

#include <cmath>

#include "convmax/errors.hpp"

namespace convmax {

/// Constant in the weak-kernel operator bound ||K_u|| <= C ||u||_{q,infty}.
/// No concrete sharp value is assumed; the default is 1 and certificates
/// report which provenance applies.
struct HlsConstant {
    enum class Provenance { default_formula, configured };

    double value = 1.0;
    Provenance provenance = Provenance::default_formula;

    static HlsConstant defaults() { return {}; }

    static HlsConstant configured(double v) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw domain_error("HlsConstant: value must be positive and finite");
        return {v, Provenance::configured};
    }
};

inline const char* to_string(HlsConstant::Provenance p) {
    return p == HlsConstant::Provenance::configured ? "configured" : "default_formula";
}

} // namespace convmax
