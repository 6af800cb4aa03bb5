#pragma once

#include "qmlab/numerics.hpp"
#include "qmlab/pwl.hpp"

namespace qm::power {

/// x^alpha (Increasing) or 1 - (1 - x)^alpha (Reflected) on [0, 1].
struct PowerQM {
    double alpha;
    pwl::PowerForm form;
    double p;

    /// Throws InvalidParam unless p > 1 and alpha > 1 - 1/p.
    void validate() const;
    double q() const;
    pwl::PiecewiseLinearFn sample(int n) const;
};

/// alpha^p / (p (alpha - 1) + 1); exactly 1 at alpha = 1.
double q_alpha(double alpha, double p);

struct AlphaBranches {
    double alpha_prime;  ///< low branch, 1 - 1/p < alpha_prime < 1
    double alpha;        ///< high branch, alpha > 1
    double one_minus_alpha_prime;
    double alpha_prime_excess;  ///< alpha_prime - (1 - 1/p)
    double alpha_minus_one;
};

AlphaBranches alpha_branches(double Q, double p, const numerics::ToleranceConfig& cfg = {});

struct Crossing {
    double x;  ///< root of x^a1 + (1 - x)^a2 = 1 in (0, 1)
    double s;  ///< 1 - x, accurate when x is close to 1
};

Crossing crossing_x0(double alpha1, double alpha2, const numerics::ToleranceConfig& cfg = {});

struct BlowupReport {
    double alpha1;
    double alpha2;
    double x0;
    double x1;
    double x2;
    double s0;  ///< 1 - x0
    double s1;  ///< 1 - x1
    double s2;  ///< 1 - x2
    double q_tilde;
    double lb1;  ///< q_tilde - Q2 exceeds this
    double lb2;  ///< q_tilde - Q1 exceeds this
};

/// Energy of min{x^alpha1, 1 - (1 - x)^alpha2} on (0, 1), where
/// Q1 = Q_alpha1 (high branch) and Q2 = Q_alpha2 (low branch).
BlowupReport q_tilde(double Q1, double Q2, double p, const numerics::ToleranceConfig& cfg = {});

struct QtBounds {
    double bound1;
    double bound2;
};

/// Explicit lower bounds for q_tilde(Q1, Q2, 2) - Q2 when Q1 <= Q2. bound2
/// equals lb1 of the report; bound1 can exceed the gap when Q1 > Q2.
QtBounds qt_closed_form_p2(double Q1, double Q2);

/// Q + (Q - 1) / e.
double equal_q_e_bound(double Q);

struct ExponentPair {
    double alpha1;
    double alpha2;
};

/// High-branch exponent for gamma1 and low-branch exponent for gamma2.
ExponentPair gamma_parametrized_exponents(double gamma1, double gamma2, double p);

}  // namespace qm::power
