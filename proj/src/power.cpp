#include "qmlab/power.hpp"

#include <algorithm>
#include <cmath>

#include "qmlab/errors.hpp"
#include "qmlab/stable_math.hpp"

namespace qm::power {

namespace {

void check_p(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw InvalidParam("p must be a finite number greater than 1");
}

void check_q(double Q, const char* what) {
    if (!(Q > 1.0) || !std::isfinite(Q)) throw InvalidParam(std::string(what) + " must be finite and > 1");
}

/// Shrinks `start` by `factor` until pred holds; throws NoSignChange when the
/// value underflows first.
template <class Pred>
double shrink_until(double start, double factor, Pred pred, const char* what) {
    for (double v = start; v > 1e-300; v /= factor) {
        if (pred(v)) return v;
    }
    throw NoSignChange(std::string(what) + ": no bracket found");
}

/// log((expm1(a L)) / expm1(b L)) for L > 0, overflow-safe.
double log_expm1_ratio(double a, double b, double L) {
    if (a * L <= 600.0) return std::log(std::expm1(a * L) / std::expm1(b * L));
    return stable::log_expm1(a * L) - stable::log_expm1(b * L);
}

/// The solves below run in log coordinates, so the bracket tolerance is a
/// relative one; it is capped well below the default absolute tolerance.
numerics::ToleranceConfig log_coords(const numerics::ToleranceConfig& cfg) {
    auto out = cfg;
    out.root_abs_tol = std::min(cfg.root_abs_tol, 1e-15);
    return out;
}

Crossing crossing_from_excess(double d1, double d2, const numerics::ToleranceConfig& user) {
    const auto cfg = log_coords(user);
    // x^a1 + s^a2 - 1 rewritten without cancellation at either end.
    auto f = [&](double x, double s, double lx, double ls) {
        return x * std::expm1(d1 * lx) + s * std::expm1(-d2 * ls);
    };
    auto in_x = [&](double x) { return f(x, 1.0 - x, std::log(x), std::log1p(-x)); };
    auto in_s = [&](double s) { return f(1.0 - s, s, std::log1p(-s), std::log(s)); };

    const double mid = in_x(0.5);
    if (mid == 0.0) return {0.5, 0.5};
    if (mid > 0.0) {
        const double eps = shrink_until(1e-3, 10.0, [&](double e) { return in_x(e) < 0.0; }, "crossing_x0");
        const double t = numerics::find_root_bracketed([&](double u) { return in_x(std::exp(u)); },
                                                       std::log(eps), std::log(0.5), cfg);
        const double x = std::exp(t);
        return {x, 1.0 - x};
    }
    const double eps = shrink_until(1e-3, 10.0, [&](double e) { return in_s(e) > 0.0; }, "crossing_x0");
    const double t = numerics::find_root_bracketed([&](double u) { return in_s(std::exp(u)); },
                                                   std::log(eps), std::log(0.5), cfg);
    const double s = std::exp(t);
    return {1.0 - s, s};
}

}  // namespace

void PowerQM::validate() const {
    check_p(p);
    if (!(alpha > 1.0 - 1.0 / p) || !std::isfinite(alpha)) {
        throw InvalidParam("PowerQM: alpha must exceed 1 - 1/p");
    }
}

double PowerQM::q() const {
    validate();
    return q_alpha(alpha, p);
}

pwl::PiecewiseLinearFn PowerQM::sample(int n) const {
    validate();
    return pwl::sample_to_pwl(alpha, form, n);
}

double q_alpha(double alpha, double p) {
    check_p(p);
    if (!std::isfinite(alpha)) throw InvalidParam("q_alpha: alpha must be finite");
    if (alpha == 1.0) return 1.0;
    const double den = p * (alpha - 1.0) + 1.0;
    if (!(den > 0.0) || !(alpha > 0.0)) throw InvalidParam("q_alpha: alpha must exceed 1 - 1/p");
    return std::exp(p * std::log(alpha) - std::log(den));
}

AlphaBranches alpha_branches(double Q, double p, const numerics::ToleranceConfig& user) {
    const auto cfg = log_coords(user);
    check_p(p);
    check_q(Q, "alpha_branches: Q");
    const double lq = std::log(Q);
    AlphaBranches out{};

    // Low branch, alpha' = 1 - c = (1 - 1/p) + d with c + d = 1/p.
    auto low = [&](double c, double d) { return p * std::log1p(-c) - std::log(p * d) - lq; };
    const double half = 0.5 / p;
    const double r_mid = low(half, half);
    if (r_mid == 0.0) {
        out.one_minus_alpha_prime = out.alpha_prime_excess = half;
    } else if (r_mid > 0.0) {
        const double c_lo = shrink_until(half, 16.0, [&](double c) { return low(c, 1.0 / p - c) < 0.0; },
                                         "alpha_branches");
        const double t = numerics::find_root_bracketed(
            [&](double u) { const double c = std::exp(u); return low(c, 1.0 / p - c); },
            std::log(c_lo), std::log(half), cfg);
        out.one_minus_alpha_prime = std::exp(t);
        out.alpha_prime_excess = 1.0 / p - out.one_minus_alpha_prime;
    } else {
        const double d_lo = shrink_until(half, 16.0, [&](double d) { return low(1.0 / p - d, d) > 0.0; },
                                         "alpha_branches");
        const double t = numerics::find_root_bracketed(
            [&](double u) { const double d = std::exp(u); return low(1.0 / p - d, d); },
            std::log(d_lo), std::log(half), cfg);
        out.alpha_prime_excess = std::exp(t);
        out.one_minus_alpha_prime = 1.0 / p - out.alpha_prime_excess;
    }
    out.alpha_prime = 1.0 - out.one_minus_alpha_prime;

    // High branch, alpha = 1 + e.
    auto high = [&](double e) { return p * std::log1p(e) - std::log1p(p * e) - lq; };
    double e_hi = 1.0;
    for (int i = 0; high(e_hi) <= 0.0; ++i) {
        if (i > 2000) throw NoSignChange("alpha_branches: upper bracket not found");
        e_hi *= 2.0;
    }
    const double e_lo = shrink_until(e_hi / 2.0, 16.0, [&](double e) { return high(e) < 0.0; },
                                     "alpha_branches");
    const double t = numerics::find_root_bracketed([&](double u) { return high(std::exp(u)); },
                                                   std::log(e_lo), std::log(e_hi), cfg);
    out.alpha_minus_one = std::exp(t);
    out.alpha = 1.0 + out.alpha_minus_one;
    return out;
}

Crossing crossing_x0(double alpha1, double alpha2, const numerics::ToleranceConfig& cfg) {
    if (!(alpha1 > 1.0) || !std::isfinite(alpha1)) throw InvalidParam("crossing_x0: need alpha1 > 1");
    if (!(alpha2 > 0.0 && alpha2 < 1.0)) throw InvalidParam("crossing_x0: need 0 < alpha2 < 1");
    return crossing_from_excess(alpha1 - 1.0, 1.0 - alpha2, cfg);
}

BlowupReport q_tilde(double Q1, double Q2, double p, const numerics::ToleranceConfig& cfg) {
    check_p(p);
    check_q(Q1, "q_tilde: Q1");
    check_q(Q2, "q_tilde: Q2");
    const auto b1 = alpha_branches(Q1, p, cfg);
    const auto b2 = alpha_branches(Q2, p, cfg);
    const double e1 = b1.alpha_minus_one;
    const double c2 = b2.one_minus_alpha_prime;
    const auto cr = crossing_from_excess(e1, c2, cfg);

    const double lx0 = cr.x <= 0.5 ? std::log(cr.x) : std::log1p(-cr.s);
    const double ls0 = cr.s <= 0.5 ? std::log(cr.s) : std::log1p(-cr.x);
    const double la1 = std::log1p(e1);
    const double la2 = std::log1p(-c2);

    BlowupReport r{};
    r.alpha1 = b1.alpha;
    r.alpha2 = b2.alpha_prime;
    r.x0 = cr.x;
    r.s0 = cr.s;
    r.x1 = std::exp(la2 / e1);
    r.s1 = -std::expm1(la2 / e1);
    r.s2 = std::exp(-la1 / c2);
    r.x2 = -std::expm1(-la1 / c2);
    r.q_tilde = Q1 * std::exp((p * e1 + 1.0) * lx0) + Q2 * std::exp(p * b2.alpha_prime_excess * ls0);
    r.lb1 = (Q1 - 1.0) * std::exp((p + 1.0 / e1) * la2);
    r.lb2 = (Q2 - 1.0) * std::exp((p - 1.0 / c2) * la1);
    return r;
}

QtBounds qt_closed_form_p2(double Q1, double Q2) {
    check_q(Q1, "qt_closed_form_p2: Q1");
    check_q(Q2, "qt_closed_form_p2: Q2");
    const double r = std::sqrt(Q2 * Q2 - Q2);
    const double w = std::sqrt(Q1 / (Q1 - 1.0));
    return {(Q1 - 1.0) * std::pow(Q2 + r, 1.0 - w), (Q1 - 1.0) * std::pow(Q2 - r, 1.0 + w)};
}

double equal_q_e_bound(double Q) {
    check_q(Q, "equal_q_e_bound: Q");
    return Q + (Q - 1.0) / std::exp(1.0);
}

ExponentPair gamma_parametrized_exponents(double gamma1, double gamma2, double p) {
    check_p(p);
    if (!(gamma1 >= 1.0) || !(gamma2 >= 1.0) || !std::isfinite(gamma1) || !std::isfinite(gamma2)) {
        throw InvalidParam("gamma_parametrized_exponents: gammas must be finite and >= 1");
    }
    const double scale = (p - 1.0) / p;
    ExponentPair out{1.0, 1.0};
    if (gamma1 > 1.0) {
        const double L = std::log(gamma1);
        out.alpha1 = scale * std::exp(log_expm1_ratio(p, p - 1.0, L));
    }
    if (gamma2 > 1.0) {
        const double L = std::log(gamma2);
        out.alpha2 = scale * std::exp(log_expm1_ratio(p, p - 1.0, L) - L);
    }
    return out;
}

}  // namespace qm::power
