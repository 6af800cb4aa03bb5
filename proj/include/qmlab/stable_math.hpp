#pragma once

// Small helpers for evaluating powers and their differences without
// overflow or cancellation. All inline; used by the corner and power modules.

#include <cmath>

namespace qm::stable {

/// expm1(x) - x, accurate for small |x| (series) and large x (direct).
inline double expm1_minus_x(double x) {
    if (std::fabs(x) < 0.1) {
        // x^2/2! + x^3/3! + ... ; 18 terms is far below double epsilon at |x| < 0.1.
        double term = x * x / 2.0;
        double sum = term;
        for (int n = 3; n < 20; ++n) {
            term *= x / n;
            sum += term;
        }
        return sum;
    }
    return std::expm1(x) - x;
}

/// log(expm1(x)) for x > 0 without overflow at large x.
inline double log_expm1(double x) {
    if (x > 30.0) return x + std::log1p(-std::exp(-x));
    return std::log(std::expm1(x));
}

/// x^e for x >= 0 with 0^e = 0 when e > 0.
inline double pow_nonneg(double x, double e) {
    if (x == 0.0) return e > 0 ? 0.0 : (e == 0 ? 1.0 : INFINITY);
    return std::exp(e * std::log(x));
}

}  // namespace qm::stable
