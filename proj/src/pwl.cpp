#include "qmlab/pwl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qmlab/errors.hpp"
#include "qmlab/stable_math.hpp"

namespace qm::pwl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMergeRel = 1e-14;

bool nearly_same(double x, double y) {
    return std::fabs(x - y) <= kMergeRel * std::max(std::fabs(x), std::fabs(y));
}

int sign_of(double v) { return (v > 0) - (v < 0); }

}  // namespace

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<double> breakpoints, std::vector<double> values)
    : xs_(std::move(breakpoints)), ys_(std::move(values)) {
    if (xs_.size() != ys_.size()) {
        throw InputError("PiecewiseLinearFn: breakpoints and values differ in length");
    }
    if (xs_.size() < 2) {
        throw InputError("PiecewiseLinearFn: need at least two breakpoints");
    }
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i])) {
            throw InputError("PiecewiseLinearFn: non-finite coordinate at index " + std::to_string(i));
        }
        if (i > 0 && !(xs_[i - 1] < xs_[i])) {
            throw InputError("PiecewiseLinearFn: breakpoints not strictly increasing at index " +
                             std::to_string(i));
        }
    }
}

PiecewiseLinearFn PiecewiseLinearFn::from_slopes(std::span<const double> corners,
                                                 std::span<const double> slopes,
                                                 double start_value) {
    if (corners.size() != slopes.size() + 1) {
        throw InputError("from_slopes: need one more corner than slopes");
    }
    std::vector<double> ys(corners.size());
    ys[0] = start_value;
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        ys[i + 1] = ys[i] + slopes[i] * (corners[i + 1] - corners[i]);
    }
    return {std::vector<double>(corners.begin(), corners.end()), std::move(ys)};
}

std::size_t PiecewiseLinearFn::segment_of(double x) const {
    auto it = std::lower_bound(xs_.begin() + 1, xs_.end() - 1, x);
    return static_cast<std::size_t>(it - xs_.begin()) - 1;
}

double PiecewiseLinearFn::operator()(double x) const {
    const double slack = 1e-12 * (hi() - lo());
    if (x < lo() - slack || x > hi() + slack || std::isnan(x)) {
        throw DomainViolation("PiecewiseLinearFn: x = " + std::to_string(x) + " outside the domain");
    }
    x = std::clamp(x, lo(), hi());
    const std::size_t k = segment_of(x);
    if (x == xs_[k]) return ys_[k];
    if (x == xs_[k + 1]) return ys_[k + 1];
    return ys_[k] + (ys_[k + 1] - ys_[k]) * ((x - xs_[k]) / (xs_[k + 1] - xs_[k]));
}

double PiecewiseLinearFn::slope(std::size_t segment) const {
    return (ys_[segment + 1] - ys_[segment]) / (xs_[segment + 1] - xs_[segment]);
}

PiecewiseLinearFn PiecewiseLinearFn::restrict(double a, double b) const {
    if (!(a < b)) {
        throw DomainViolation("restrict: need a < b");
    }
    std::vector<double> xs{a};
    std::vector<double> ys{(*this)(a)};
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (xs_[i] > a && xs_[i] < b) {
            xs.push_back(xs_[i]);
            ys.push_back(ys_[i]);
        }
    }
    xs.push_back(b);
    ys.push_back((*this)(b));
    return {std::move(xs), std::move(ys)};
}

PiecewiseLinearFn PiecewiseLinearFn::reflect() const {
    std::vector<double> xs(xs_.size()), ys(ys_.size());
    const double s = lo() + hi();
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        const std::size_t j = xs_.size() - 1 - i;
        xs[i] = i == 0 ? lo() : (i + 1 == xs_.size() ? hi() : s - xs_[j]);
        ys[i] = ys_[j];
    }
    return {std::move(xs), std::move(ys)};
}

PiecewiseLinearFn PiecewiseLinearFn::affine(double scale_x, double shift_x, double scale_y,
                                            double shift_y) const {
    if (!(scale_x > 0)) {
        throw InvalidParam("affine: horizontal scale must be positive");
    }
    std::vector<double> xs(xs_.size()), ys(ys_.size());
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        xs[i] = scale_x * xs_[i] + shift_x;
        ys[i] = scale_y * ys_[i] + shift_y;
    }
    return {std::move(xs), std::move(ys)};
}

double segment_energy(double slope, double length, double p) {
    if (slope == 0.0 || length <= 0.0) return 0.0;
    const double ls = std::log(std::fabs(slope));
    if (p * std::fabs(ls) > 600.0) {
        return std::exp(p * ls + std::log(length));
    }
    return std::pow(std::fabs(slope), p) * length;
}

namespace {

void check_interval(const PiecewiseLinearFn& f, double& a, double& b) {
    const double slack = 1e-12 * (f.hi() - f.lo());
    if (!(a < b) || a < f.lo() - slack || b > f.hi() + slack) {
        throw DomainViolation("interval (" + std::to_string(a) + ", " + std::to_string(b) +
                              ") is not inside the domain");
    }
    a = std::max(a, f.lo());
    b = std::min(b, f.hi());
}

void check_p(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw InvalidParam("p must be a finite number greater than 1");
    }
}

}  // namespace

double energy(const PiecewiseLinearFn& f, double p, double a, double b) {
    check_p(p);
    check_interval(f, a, b);
    const auto xs = f.breakpoints();
    double sum = 0.0;
    for (std::size_t k = f.segment_of(a); k < f.segments() && xs[k] < b; ++k) {
        const double overlap = std::min(b, xs[k + 1]) - std::max(a, xs[k]);
        if (overlap > 0) sum += segment_energy(f.slope(k), overlap, p);
    }
    return sum;
}

double energy(const PiecewiseLinearFn& f, double p) { return energy(f, p, f.lo(), f.hi()); }

double chord_energy(const PiecewiseLinearFn& f, double p, double a, double b) {
    check_p(p);
    check_interval(f, a, b);
    return segment_energy((f(b) - f(a)) / (b - a), b - a, p);
}

EnergyReport energy_report(const PiecewiseLinearFn& f, double p, double a, double b) {
    EnergyReport r{a, b, energy(f, p, a, b), chord_energy(f, p, a, b), kInf};
    if (r.chord_energy > 0) {
        r.ratio = r.energy / r.chord_energy;
    } else if (r.energy == 0) {
        r.ratio = 1.0;
    }
    return r;
}

PiecewiseLinearFn pointwise_min(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g) {
    if (!nearly_same(f.lo(), g.lo()) || !nearly_same(f.hi(), g.hi())) {
        throw DomainMismatch("pointwise_min: functions have different domains");
    }
    std::vector<double> merged;
    merged.reserve(f.breakpoints().size() + g.breakpoints().size());
    std::merge(f.breakpoints().begin(), f.breakpoints().end(), g.breakpoints().begin(),
               g.breakpoints().end(), std::back_inserter(merged));
    std::vector<double> nodes;
    nodes.reserve(merged.size() * 2);
    for (double x : merged) {
        if (nodes.empty() || !nearly_same(nodes.back(), x)) nodes.push_back(x);
    }
    nodes.front() = f.lo();
    nodes.back() = f.hi();

    std::vector<double> xs, ys;
    xs.reserve(nodes.size() * 2);
    ys.reserve(nodes.size() * 2);
    double d_prev = f(nodes[0]) - g(nodes[0]);
    xs.push_back(nodes[0]);
    ys.push_back(std::min(f(nodes[0]), g(nodes[0])));
    for (std::size_t k = 1; k < nodes.size(); ++k) {
        const double fx = f(nodes[k]), gx = g(nodes[k]);
        const double d = fx - gx;
        if ((d_prev < 0 && d > 0) || (d_prev > 0 && d < 0)) {
            const double x0 = nodes[k - 1], x1 = nodes[k];
            const double xc = x0 + (x1 - x0) * (d_prev / (d_prev - d));
            if (xc > x0 && xc < x1 && !nearly_same(xc, x0) && !nearly_same(xc, x1)) {
                xs.push_back(xc);
                ys.push_back(std::min(f(xc), g(xc)));
            }
        }
        xs.push_back(nodes[k]);
        ys.push_back(std::min(fx, gx));
        d_prev = d;
    }
    return {std::move(xs), std::move(ys)};
}

namespace {

struct Pt {
    double x;
    double y;
};

/// Upper hull of the graph vertices of f restricted to [a, b], left to right.
std::vector<Pt> upper_hull(const PiecewiseLinearFn& f, double a, double b) {
    std::vector<Pt> hull;
    auto push = [&](Pt q) {
        while (hull.size() >= 2) {
            const Pt& o = hull[hull.size() - 2];
            const Pt& m = hull.back();
            // Pop m when it lies on or below the segment o -> q.
            const double cross = (m.x - o.x) * (q.y - o.y) - (m.y - o.y) * (q.x - o.x);
            if (cross >= 0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(q);
    };
    push({a, f(a)});
    const auto xs = f.breakpoints();
    const auto ys = f.values();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] > a && xs[i] < b) push({xs[i], ys[i]});
    }
    push({b, f(b)});
    return hull;
}

}  // namespace

PiecewiseLinearFn concave_envelope(const PiecewiseLinearFn& f, double a, double b) {
    check_interval(f, a, b);
    const auto hull = upper_hull(f, a, b);
    std::vector<double> xs, ys;
    for (const auto& q : hull) {
        xs.push_back(q.x);
        ys.push_back(q.y);
    }
    return {std::move(xs), std::move(ys)};
}

double envelope_energy(const PiecewiseLinearFn& f, double p, double a, double b) {
    check_p(p);
    check_interval(f, a, b);
    const auto hull = upper_hull(f, a, b);
    double sum = 0.0;
    for (std::size_t i = 1; i < hull.size(); ++i) {
        const double len = hull[i].x - hull[i - 1].x;
        sum += segment_energy((hull[i].y - hull[i - 1].y) / len, len, p);
    }
    return sum;
}

QuasiConstant quasimin_constant_detail(const PiecewiseLinearFn& f, double p, QuasiMode mode,
                                       const numerics::ToleranceConfig& cfg) {
    check_p(p);
    const std::size_t n = f.segments();

    // Sign pattern decides finiteness. Free: one strict sign throughout.
    // Super: signs never increase (+ ... 0 ... -); any convex corner out of a
    // flat or decreasing piece admits a competitor with vanishing energy.
    std::vector<int> signs(n);
    bool all_flat = true;
    for (std::size_t k = 0; k < n; ++k) {
        signs[k] = sign_of(f.slope(k));
        all_flat = all_flat && signs[k] == 0;
    }
    if (all_flat) return {1.0, f.lo(), f.hi()};
    for (std::size_t k = 0; k < n; ++k) {
        const bool bad = mode == QuasiMode::Free ? (signs[k] == 0 || signs[k] != signs[0])
                                                 : (k > 0 && signs[k] > signs[k - 1]);
        if (bad) {
            const auto xs = f.breakpoints();
            return {kInf, xs[k == 0 ? 0 : k - 1], xs[k + 1]};
        }
    }
    if (n == 1) return {1.0, f.lo(), f.hi()};

    const double width = f.hi() - f.lo();
    auto ratio = [&](double a, double b) {
        if (b - a <= 1e-15 * width) return 1.0;
        const double num = energy(f, p, a, b);
        const double den =
            mode == QuasiMode::Free ? chord_energy(f, p, a, b) : envelope_energy(f, p, a, b);
        if (den <= 0) return num > 0 ? kInf : 1.0;
        return num / den;
    };

    const auto xs = f.breakpoints();
    QuasiConstant best{1.0, f.lo(), f.hi()};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            const double r = ratio(xs[i], xs[j]);
            if (r > best.value) best = {r, xs[i], xs[j]};
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const numerics::Box2 box{{xs[i], xs[j]}, {xs[i + 1], xs[j + 1]}};
            const auto m = numerics::maximize_2d(ratio, box, cfg);
            if (m.value > best.value) best = {m.value, m.argmax[0], m.argmax[1]};
        }
    }
    return best;
}

double quasimin_constant(const PiecewiseLinearFn& f, double p, QuasiMode mode,
                         const numerics::ToleranceConfig& cfg) {
    return quasimin_constant_detail(f, p, mode, cfg).value;
}

PiecewiseLinearFn sample_to_pwl(double alpha, PowerForm form, int n) {
    if (!(alpha > 0) || !std::isfinite(alpha)) {
        throw InvalidExponent("sample_to_pwl: exponent must be positive");
    }
    if (n < 2) {
        throw InvalidParam("sample_to_pwl: need n >= 2");
    }
    // Distances from the singular end (0 for Increasing, 1 for Reflected).
    std::vector<double> dist(static_cast<std::size_t>(n) + 1);
    if (alpha >= 1.0 || n < 4) {
        for (int i = 0; i <= n; ++i) dist[i] = static_cast<double>(i) / n;
    } else {
        // Geometric cells on (0, 1/2], uniform cells on [1/2, 1]. The innermost
        // distance is limited by what can be represented next to the end point.
        const int geo = n / 2;
        const double floor = form == PowerForm::Increasing ? 1e-300 : 64 * 2.220446049250313e-16;
        const double dmin = std::max(floor, 0.5 * std::pow(1.2, -static_cast<double>(geo)));
        const double ratio = std::pow(0.5 / dmin, 1.0 / (geo - 1));
        dist[0] = 0.0;
        for (int j = 1; j <= geo; ++j) dist[j] = j == geo ? 0.5 : dmin * std::pow(ratio, j - 1);
        const int rest = n - geo;
        for (int j = 1; j <= rest; ++j) dist[geo + j] = 0.5 + 0.5 * j / rest;
        dist[n] = 1.0;
    }
    std::vector<double> xs(dist.size()), ys(dist.size());
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (form == PowerForm::Increasing) {
            xs[i] = dist[i];
            ys[i] = stable::pow_nonneg(xs[i], alpha);
        } else {
            const std::size_t j = dist.size() - 1 - i;
            xs[j] = 1.0 - dist[i];
            const double t = 1.0 - xs[j];  // exact representable distance
            ys[j] = 1.0 - stable::pow_nonneg(t, alpha);
        }
    }
    return {std::move(xs), std::move(ys)};
}

}  // namespace qm::pwl
