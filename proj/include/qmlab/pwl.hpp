#pragma once

#include <span>
#include <utility>
#include <vector>

#include "qmlab/numerics.hpp"

namespace qm::pwl {

/// Continuous piecewise-linear function on [x_0, x_n], affine between
/// consecutive breakpoints. Immutable once constructed.
class PiecewiseLinearFn {
public:
    /// Throws InputError unless there are at least two finite, strictly
    /// increasing breakpoints with matching finite values.
    PiecewiseLinearFn(std::vector<double> breakpoints, std::vector<double> values);

    /// Builds a function from a start point and per-segment slopes; `corners`
    /// has one more entry than `slopes` (including both domain ends).
    static PiecewiseLinearFn from_slopes(std::span<const double> corners,
                                         std::span<const double> slopes, double start_value);

    std::span<const double> breakpoints() const { return xs_; }
    std::span<const double> values() const { return ys_; }
    std::size_t segments() const { return xs_.size() - 1; }
    double lo() const { return xs_.front(); }
    double hi() const { return xs_.back(); }

    double operator()(double x) const;
    double slope(std::size_t segment) const;
    /// Index of the segment containing x (the left one at a breakpoint).
    std::size_t segment_of(double x) const;

    /// Restriction to [a, b] (a, b become breakpoints).
    PiecewiseLinearFn restrict(double a, double b) const;
    /// x -> lo + hi - x, keeping the domain.
    PiecewiseLinearFn reflect() const;
    /// x -> scale_x * x + shift_x (scale_x > 0), y -> scale_y * y + shift_y.
    PiecewiseLinearFn affine(double scale_x, double shift_x, double scale_y, double shift_y) const;

    friend bool operator==(const PiecewiseLinearFn&, const PiecewiseLinearFn&) = default;

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
};

struct EnergyReport {
    double a;
    double b;
    double energy;        ///< integral of |f'|^p over (a, b)
    double chord_energy;  ///< energy of the linear interpolant of the end values
    double ratio;         ///< energy / chord_energy, +inf when the chord is flat
};

/// |slope|^p * length, computed through logs when the power would overflow.
double segment_energy(double slope, double length, double p);

double energy(const PiecewiseLinearFn& f, double p, double a, double b);
double energy(const PiecewiseLinearFn& f, double p);
double chord_energy(const PiecewiseLinearFn& f, double p, double a, double b);
EnergyReport energy_report(const PiecewiseLinearFn& f, double p, double a, double b);

/// min{f, g} with every transversal crossing inserted. Throws DomainMismatch.
PiecewiseLinearFn pointwise_min(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g);

/// Least concave majorant of f on [a, b] (upper hull of the graph vertices).
PiecewiseLinearFn concave_envelope(const PiecewiseLinearFn& f, double a, double b);
/// Energy of the concave envelope on [a, b] without materializing it.
double envelope_energy(const PiecewiseLinearFn& f, double p, double a, double b);

enum class QuasiMode { Free, Super };

struct QuasiConstant {
    double value;  ///< +inf when f is not a quasi(super)minimizer
    double a;      ///< interval attaining the value
    double b;
};

/// Best quasiminimizing (Free) or quasisuperminimizing (Super) constant,
/// estimated as the sup over subintervals of the energy ratio against the
/// chord (Free) or the concave envelope (Super). Breakpoint pairs are
/// scanned exactly, then each segment pair is refined with maximize_2d.
QuasiConstant quasimin_constant_detail(const PiecewiseLinearFn& f, double p, QuasiMode mode,
                                       const numerics::ToleranceConfig& cfg = {});
double quasimin_constant(const PiecewiseLinearFn& f, double p, QuasiMode mode,
                         const numerics::ToleranceConfig& cfg = {});

enum class PowerForm {
    Increasing,  ///< x^alpha
    Reflected,   ///< 1 - (1 - x)^alpha
};

/// Samples a power-type function at n + 1 nodes of [0, 1]. For alpha < 1 the
/// nodes cluster geometrically toward the end where the derivative blows up.
PiecewiseLinearFn sample_to_pwl(double alpha, PowerForm form, int n);

}  // namespace qm::pwl
