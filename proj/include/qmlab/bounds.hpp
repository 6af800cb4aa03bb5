#pragma once

#include <array>

namespace qm::bounds {

/// min{Q1 Q2, Q1 + Q2}.
double km_bound(double Q1, double Q2);

/// (Q1 + Q2 - 2) Q1 Q2 / (Q1 Q2 - 1); 1 when both inputs are 1.
double min2_bound(double Q1, double Q2);

/// Closed-form constant for the minimum of three; reduces to min2_bound or
/// to the remaining input when some of the Q_i equal 1.
double min3_bound(double Q1, double Q2, double Q3);

struct TripleSystemReport {
    std::array<double, 3> x;      ///< multipliers of the S = {} inequalities
    std::array<double, 3> y;      ///< y_i = (1 - Q_j) x_jk
    /// x_pair[a][b] multiplies the inequality for u_a tested against u_b.
    std::array<std::array<double, 3>, 3> x_pair;
    std::array<double, 3> x_hat;  ///< multipliers of the |S| = 2 inequalities
    double Q_A0;
    std::array<double, 3> Q_A1;   ///< indexed by the function lying above v
    std::array<double, 3> Q_A2;   ///< indexed by the minimal function
};

/// Solves the reduced multiplier system (SR - I) x = S c with y = c - R x.
/// Requires every Q_i > 1.
TripleSystemReport min3_via_system(double Q1, double Q2, double Q3);

struct Sandwich {
    double lower;  ///< Q1 + Q2 - 2
    double upper;  ///< Q1 + Q2 - 1
};

Sandwich min2_sandwich(double Q1, double Q2);

}  // namespace qm::bounds
