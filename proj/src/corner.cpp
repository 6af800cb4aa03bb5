#include "qmlab/corner.hpp"

#include <algorithm>
#include <cmath>

#include "qmlab/errors.hpp"
#include "qmlab/stable_math.hpp"

namespace qm::corner {

namespace {

constexpr double kLogDomain = 600.0;

void check_p(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw InvalidParam("p must be a finite number greater than 1");
}

void check_gamma(double gamma) {
    if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw InvalidParam("gamma must be finite and >= 1");
}

/// phi(x) * exp(-s) with phi(x) = expm1(x) - x; s = 0 outside the overflow range.
double scaled_phi(double x, double s) {
    if (s == 0.0) return stable::expm1_minus_x(x);
    return std::exp(x - s) - (1.0 + x) * std::exp(-s);
}

/// log of the optimal left slope and log Q as functions of L = log(gamma) > 0.
struct LogForms {
    double log_alpha;
    double log_q;
};

LogForms log_forms(double L, double p) {
    if (p * L <= kLogDomain) {
        const double em_p = std::expm1(p * L);
        const double em_pm1 = std::expm1((p - 1.0) * L);
        const double em_1 = std::expm1(L);
        const double log_alpha = std::log((p - 1.0) / p) + std::log(em_p) - L - std::log(em_pm1);
        return {log_alpha, (p - 1.0) * log_alpha + std::log(em_p / (p * em_1))};
    }
    const double le_p = stable::log_expm1(p * L);
    const double log_alpha =
        std::log((p - 1.0) / p) + le_p - L - stable::log_expm1((p - 1.0) * L);
    return {log_alpha, (p - 1.0) * log_alpha + le_p - std::log(p) - stable::log_expm1(L)};
}

double k_of(double L, double p) {
    const double s = p * L > kLogDomain ? p * L : 0.0;
    const double num = (p - 1.0) * scaled_phi(p * L, s) - p * scaled_phi((p - 1.0) * L, s);
    const double den = scaled_phi(p * L, s) - p * scaled_phi(L, s);
    return std::exp(L) * (num / den);
}

}  // namespace

void OneCornerSpec::validate() const {
    if (!(gamma > 1.0) || !std::isfinite(gamma)) throw InvalidParam("OneCornerSpec: gamma must exceed 1");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidParam("OneCornerSpec: alpha must be positive");
    if (!std::isfinite(corner) || !std::isfinite(offset)) throw InvalidParam("OneCornerSpec: non-finite field");
}

pwl::PiecewiseLinearFn OneCornerSpec::realize(double a, double b) const {
    validate();
    if (!(a < corner && corner < b)) throw InvalidParam("OneCornerSpec: need a < corner < b");
    return {{a, corner, b},
            {offset - alpha * (corner - a), offset, offset + alpha * gamma * (b - corner)}};
}

CornerConstants corner_constant(double gamma, double p) {
    check_gamma(gamma);
    check_p(p);
    if (gamma == 1.0) return {1.0, 1.0};
    const double L = std::log(gamma);
    const auto lf = log_forms(L, p);
    return {k_of(L, p), std::exp(lf.log_q)};
}

double gamma_from_q(double Q, double p, const numerics::ToleranceConfig& cfg) {
    check_p(p);
    if (!(Q >= 1.0) || !std::isfinite(Q)) throw InvalidParam("gamma_from_q: Q must be finite and >= 1");
    if (Q == 1.0) return 1.0;
    // Q <= gamma^(p-1) <= p^p Q / (p-1)^(p-1), written for L = log(gamma).
    const double lq = std::log(Q);
    const double lo = lq / (p - 1.0);
    const double hi = (p * std::log(p) - (p - 1.0) * std::log(p - 1.0) + lq) / (p - 1.0);
    auto residual = [&](double L) { return log_forms(L, p).log_q - lq; };
    if (residual(lo) == 0.0) return std::exp(lo);
    if (residual(hi) == 0.0) return std::exp(hi);
    auto tight = cfg;
    tight.root_abs_tol = std::min(cfg.root_abs_tol, 1e-16 * lo);
    return std::exp(numerics::find_root_bracketed(residual, lo, hi, tight));
}

UnitCorner optimal_unit_corner(double gamma, double p) {
    check_p(p);
    if (!(gamma > 1.0) || !std::isfinite(gamma)) throw InvalidParam("optimal_unit_corner: gamma must exceed 1");
    const double L = std::log(gamma);
    const double k = k_of(L, p);
    return {k / (k + 1.0), 1.0 / (k + 1.0), std::exp(log_forms(L, p).log_alpha), gamma};
}

pwl::PiecewiseLinearFn UnitCorner::realize() const {
    return {{0.0, x0, 1.0}, {0.0, alpha * x0, 1.0}};
}

TangencyExponents tangency_exponents(double gamma, double p) {
    const auto uc = optimal_unit_corner(gamma, p);
    return {uc.alpha, uc.alpha * gamma};
}

double zigzag_constant(std::span<const double> slopes, std::span<const double> corners, double p) {
    check_p(p);
    if (slopes.size() < 2) throw InvalidParam("zigzag_constant: need at least two slopes");
    if (corners.size() + 1 != slopes.size() && corners.size() != slopes.size() + 1) {
        throw InvalidParam("zigzag_constant: corner count does not match slope count");
    }
    for (std::size_t i = 1; i < corners.size(); ++i) {
        if (!(corners[i - 1] < corners[i])) throw InvalidParam("zigzag_constant: corners must increase");
    }
    const double lo = *std::min_element(slopes.begin(), slopes.end());
    const double hi = *std::max_element(slopes.begin(), slopes.end());
    if (!(lo > 0.0) || !std::isfinite(hi)) throw InvalidParam("zigzag_constant: slopes must be positive");
    auto same = [](double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(a, b); };
    if (same(lo, hi)) throw InvalidParam("zigzag_constant: slopes take a single value");
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        const bool is_lo = same(slopes[i], lo);
        if (!is_lo && !same(slopes[i], hi)) {
            throw InvalidParam("zigzag_constant: slopes take more than two values");
        }
        if (i > 0 && is_lo == same(slopes[i - 1], lo)) {
            throw InvalidParam("zigzag_constant: slopes do not alternate");
        }
    }
    return corner_constant(hi / lo, p).Q;
}

}  // namespace qm::corner
