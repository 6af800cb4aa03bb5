#pragma once

#include <span>
#include <utility>
#include <vector>

#include "qmlab/numerics.hpp"
#include "qmlab/pwl.hpp"

namespace qm::pasting {

using Interval = std::pair<double, double>;

struct PasteExample {
    pwl::PiecewiseLinearFn u1;
    pwl::PiecewiseLinearFn u2;
    pwl::PiecewiseLinearFn u;
    std::vector<Interval> omega1;
    double achieved_energy;  ///< energy of u on (0, 1)
    double claimed_bound;
    double x0;               ///< corner of u2 before any reflection
    double A;                ///< energy of u2 on (0, x0)
};

/// u2 outside omega1, min{u1, u2} inside. omega1 must be sorted, disjoint and
/// inside the domain of u2; u1 must be defined on each closed interval.
/// Throws DiscontinuousPaste when u1 < u2 at an interior endpoint.
pwl::PiecewiseLinearFn paste(const pwl::PiecewiseLinearFn& u2, const pwl::PiecewiseLinearFn& u1,
                             std::span<const Interval> omega1);

/// Two optimal Q1 pieces pasted over (0, x0) and (x0, 1) under the optimal
/// unit corner for Q2; the energy is Q1 Q2.
PasteExample sharp_example(double Q1, double Q2, double p, const numerics::ToleranceConfig& cfg = {});

enum class Variant { Standard, Second };

/// Single-interval construction with energy Q1 Q2 - A (Q1 - 1). Second picks
/// the orientation whose untouched part carries at most half of Q2.
PasteExample interval_example(double Q1, double Q2, double p, Variant variant,
                              const numerics::ToleranceConfig& cfg = {});

struct SweepRow {
    double p;
    double A;
    double achieved_energy;
};

std::vector<SweepRow> p_sweep(double Q1, double Q2, std::span<const double> p_list,
                              const numerics::ToleranceConfig& cfg = {});

}  // namespace qm::pasting
