#include "qmlab/pasting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmlab/corner.hpp"
#include "qmlab/errors.hpp"

namespace qm::pasting {

namespace {

void check_p(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw InvalidParam("p must be a finite number greater than 1");
}

void check_q(double Q, bool strict) {
    const bool ok = strict ? Q > 1.0 : Q >= 1.0;
    if (!ok || !std::isfinite(Q)) {
        throw InvalidParam(strict ? "constants must be finite and > 1" : "constants must be finite and >= 1");
    }
}

/// Optimal convex one-corner piece for Q on [a, b] from ya to yb; the chord
/// when Q = 1.
pwl::PiecewiseLinearFn corner_piece(double Q, double p, double a, double b, double ya, double yb,
                                    const numerics::ToleranceConfig& cfg) {
    if (Q == 1.0) return {{a, b}, {ya, yb}};
    const auto w = corner::optimal_unit_corner(corner::gamma_from_q(Q, p, cfg), p);
    return {{a, a + w.x0 * (b - a), b}, {ya, ya + (yb - ya) * (w.alpha * w.x0), yb}};
}

/// Concatenates functions on adjacent closed intervals.
pwl::PiecewiseLinearFn join(std::span<const pwl::PiecewiseLinearFn> parts) {
    std::vector<double> xs, ys;
    for (const auto& f : parts) {
        const auto bx = f.breakpoints();
        const auto by = f.values();
        const std::size_t skip = xs.empty() ? 0 : 1;
        xs.insert(xs.end(), bx.begin() + static_cast<std::ptrdiff_t>(skip), bx.end());
        ys.insert(ys.end(), by.begin() + static_cast<std::ptrdiff_t>(skip), by.end());
    }
    return {std::move(xs), std::move(ys)};
}

/// x -> c - x, applied to the domain as well.
pwl::PiecewiseLinearFn mirror(const pwl::PiecewiseLinearFn& f, double c) {
    const auto bx = f.breakpoints();
    const auto by = f.values();
    std::vector<double> xs(bx.rbegin(), bx.rend()), ys(by.rbegin(), by.rend());
    for (double& x : xs) x = c - x;
    return {std::move(xs), std::move(ys)};
}

struct Base {
    pwl::PiecewiseLinearFn u2;
    double x0;
    double corner_value;  ///< u2(x0)
};

Base base_corner(double Q2, double p, const numerics::ToleranceConfig& cfg) {
    if (Q2 == 1.0) return {pwl::PiecewiseLinearFn({0.0, 1.0}, {0.0, 1.0}), 0.0, 0.0};
    const auto uc = corner::optimal_unit_corner(corner::gamma_from_q(Q2, p, cfg), p);
    return {uc.realize(), uc.x0, uc.alpha * uc.x0};
}

}  // namespace

pwl::PiecewiseLinearFn paste(const pwl::PiecewiseLinearFn& u2, const pwl::PiecewiseLinearFn& u1,
                             std::span<const Interval> omega1) {
    const double lo = u2.lo(), hi = u2.hi();
    const double slack = 1e-12 * (hi - lo);
    double cur = lo;
    std::vector<pwl::PiecewiseLinearFn> parts;
    for (const auto& [a0, b0] : omega1) {
        if (!(a0 < b0)) throw DomainViolation("paste: empty interval in omega1");
        if (a0 < cur - slack || b0 > hi + slack) {
            throw DomainViolation("paste: omega1 must be sorted, disjoint and inside the domain");
        }
        if (a0 < u1.lo() - slack || b0 > u1.hi() + slack) {
            throw DomainViolation("paste: u1 is not defined on the whole of omega1");
        }
        const double a = std::max(a0, lo), b = std::min(b0, hi);
        for (double e : {a, b}) {
            if (e <= lo || e >= hi) continue;
            const double v2 = u2(e);
            if (u1(e) < v2 - 1e-12 * std::max(1.0, std::fabs(v2))) {
                throw DiscontinuousPaste("paste: u1 < u2 at x = " + std::to_string(e));
            }
        }
        if (a > cur) parts.push_back(u2.restrict(cur, a));
        parts.push_back(pwl::pointwise_min(u1.restrict(a, b), u2.restrict(a, b)));
        cur = b;
    }
    if (cur < hi) parts.push_back(u2.restrict(cur, hi));
    auto joined = join(parts);

    // Interior interval ends take the value of u2 exactly.
    std::vector<double> xs(joined.breakpoints().begin(), joined.breakpoints().end());
    std::vector<double> ys(joined.values().begin(), joined.values().end());
    for (const auto& [a, b] : omega1) {
        for (double e : {a, b}) {
            if (e <= lo || e >= hi) continue;
            const auto it = std::lower_bound(xs.begin(), xs.end(), e);
            if (it != xs.end() && *it == e) ys[static_cast<std::size_t>(it - xs.begin())] = u2(e);
        }
    }
    return {std::move(xs), std::move(ys)};
}

PasteExample sharp_example(double Q1, double Q2, double p, const numerics::ToleranceConfig& cfg) {
    check_p(p);
    check_q(Q1, true);
    check_q(Q2, true);
    const auto base = base_corner(Q2, p, cfg);
    const double x0 = base.x0, y0 = base.corner_value;
    const pwl::PiecewiseLinearFn pieces[] = {corner_piece(Q1, p, 0.0, x0, 0.0, y0, cfg),
                                             corner_piece(Q1, p, x0, 1.0, y0, 1.0, cfg)};
    auto u1 = join(pieces);
    std::vector<Interval> omega{{0.0, x0}, {x0, 1.0}};
    auto u = paste(base.u2, u1, omega);
    const double energy = pwl::energy(u, p);
    const double A = pwl::energy(base.u2, p, 0.0, x0);
    return {std::move(u1), base.u2, std::move(u), std::move(omega), energy, Q1 * Q2, x0, A};
}

PasteExample interval_example(double Q1, double Q2, double p, Variant variant,
                              const numerics::ToleranceConfig& cfg) {
    check_p(p);
    check_q(Q1, false);
    check_q(Q2, false);
    const auto base = base_corner(Q2, p, cfg);
    const double x0 = base.x0, y0 = base.corner_value;
    const double A = x0 > 0.0 ? pwl::energy(base.u2, p, 0.0, x0) : 0.0;

    if (variant == Variant::Second && A > Q2 / 2.0) {
        // Untouched part (0, x0) after the reflection x -> 1 - x carries Q2 - A.
        auto u1 = corner_piece(Q1, p, 0.0, x0, 0.0, y0, cfg);
        const Interval inner{0.0, x0};
        auto u = paste(base.u2, u1, std::span<const Interval>(&inner, 1));
        auto ur = mirror(u, 1.0);
        const double energy = pwl::energy(ur, p);
        return {mirror(u1, 1.0), mirror(base.u2, 1.0), std::move(ur), {{1.0 - x0, 1.0}},
                energy, Q2 * (Q1 + 1.0) / 2.0, x0, A};
    }

    auto u1 = corner_piece(Q1, p, x0, 1.0, y0, 1.0, cfg);
    const Interval inner{x0, 1.0};
    auto u = paste(base.u2, u1, std::span<const Interval>(&inner, 1));
    const double energy = pwl::energy(u, p);
    const double claimed = variant == Variant::Second ? Q2 * (Q1 + 1.0) / 2.0 : Q1 * (Q2 - 1.0) + 1.0;
    return {std::move(u1), base.u2, std::move(u), {inner}, energy, claimed, x0, A};
}

std::vector<SweepRow> p_sweep(double Q1, double Q2, std::span<const double> p_list,
                              const numerics::ToleranceConfig& cfg) {
    std::vector<SweepRow> rows;
    rows.reserve(p_list.size());
    for (double p : p_list) {
        const auto ex = interval_example(Q1, Q2, p, Variant::Standard, cfg);
        rows.push_back({p, ex.A, ex.achieved_energy});
    }
    return rows;
}

}  // namespace qm::pasting
