#pragma once

#include <span>

#include "qmlab/numerics.hpp"
#include "qmlab/pwl.hpp"

namespace qm::corner {

/// A one-corner function: slope alpha left of the corner, alpha * gamma to
/// the right, passing through (corner, offset).
struct OneCornerSpec {
    double gamma;
    double corner;
    double alpha;
    double offset;

    /// Throws InvalidParam unless gamma > 1 and alpha > 0.
    void validate() const;
    /// Two-segment realization on [a, b] with a < corner < b.
    pwl::PiecewiseLinearFn realize(double a, double b) const;
};

struct CornerConstants {
    double k;  ///< optimal ratio a/b of the interval around the corner
    double Q;  ///< optimal quasiminimizing constant
};

/// Q(gamma, p) and k(gamma, p). gamma = 1 returns {1, 1}.
CornerConstants corner_constant(double gamma, double p);

/// Inverse of gamma -> corner_constant(gamma, p).Q.
double gamma_from_q(double Q, double p, const numerics::ToleranceConfig& cfg = {});

struct UnitCorner {
    double x0;           ///< corner location, k / (k + 1)
    double one_minus_x0; ///< 1 / (k + 1), kept separately for x0 close to 1
    double alpha;        ///< left slope; the right slope is alpha * gamma
    double gamma;

    /// Breakpoints {0, x0, 1}, values {0, alpha * x0, 1}.
    pwl::PiecewiseLinearFn realize() const;
};

/// The convex one-corner function on [0, 1] from (0, 0) to (1, 1) whose
/// p-energy equals its optimal constant.
UnitCorner optimal_unit_corner(double gamma, double p);

struct TangencyExponents {
    double alpha_low;   ///< alpha
    double alpha_high;  ///< alpha * gamma
};

TangencyExponents tangency_exponents(double gamma, double p);

/// Best constant of a zig-zag alternating between two positive slopes.
/// `corners` lists either the interior corners (slopes.size() - 1 entries)
/// or all nodes including both ends (slopes.size() + 1 entries).
double zigzag_constant(std::span<const double> slopes, std::span<const double> corners, double p);

}  // namespace qm::corner
