#include "qmlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "qmlab/errors.hpp"

namespace qm::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInvPhi = 0.6180339887498948482;  // 1/phi

}  // namespace

void ToleranceConfig::validate() const {
    if (!(root_abs_tol > 0) || !(opt_rel_tol > 0) || !(lp_feas_tol > 0)) {
        throw InvalidParam("tolerances must be strictly positive");
    }
    if (max_iter < 1) {
        throw InvalidParam("max_iter must be at least 1");
    }
}

double find_root_bracketed(const ScalarFn& f, double lo, double hi, const ToleranceConfig& cfg) {
    cfg.validate();
    if (!(lo < hi)) {
        throw InvalidParam("find_root_bracketed: need lo < hi");
    }
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (std::isnan(fa) || std::isnan(fb) || fa * fb >= 0.0) {
        if (fa == 0.0) return a;
        if (fb == 0.0) return b;
        throw NoSignChange("find_root_bracketed: f(lo) and f(hi) have the same sign");
    }

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * kEps * std::fabs(b) + 0.5 * cfg.root_abs_tol;
        const double m = 0.5 * (c - b);
        if (std::fabs(m) <= tol || fb == 0.0) {
            return b;
        }
        if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) {
                q = -q;
            } else {
                p = -p;
            }
            if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol) ? d : (m > 0 ? tol : -tol);
        fb = f(b);
        if (std::isnan(fb)) {
            throw NonConvergence("find_root_bracketed: function returned NaN");
        }
    }
    throw NonConvergence("find_root_bracketed: iteration cap of " + std::to_string(cfg.max_iter) +
                         " reached");
}

std::pair<double, double> golden_maximize(const ScalarFn& f, double lo, double hi, double x_tol,
                                          int max_iter) {
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    // The ends are never evaluated inside the loop; include them so that a
    // monotone function reports its boundary maximum.
    std::pair<double, double> best = f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
    for (double x : {lo, hi}) {
        const double v = f(x);
        if (v > best.second) best = {x, v};
    }
    return best;
}

Max2Result maximize_2d(const PlaneFn& f, const Box2& box, const ToleranceConfig& cfg, int grid) {
    cfg.validate();
    grid = std::max(grid, 64);
    std::array<double, 2> width{};
    for (int k = 0; k < 2; ++k) {
        if (!(box.lo[k] <= box.hi[k])) {
            throw InvalidParam("maximize_2d: empty box");
        }
        width[k] = box.hi[k] - box.lo[k];
    }
    auto node = [&](int k, int i) {
        return i == grid - 1 ? box.hi[k] : box.lo[k] + width[k] * i / (grid - 1);
    };

    Max2Result best{{box.lo[0], box.lo[1]}, -std::numeric_limits<double>::infinity()};
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const double x = node(0, i), y = node(1, j);
            const double v = f(x, y);
            if (v > best.value) {
                best = {{x, y}, v};
            }
        }
    }
    if (!std::isfinite(best.value)) {
        return best;
    }

    // Each sweep line-searches one coordinate at a time inside a window of a
    // couple of grid cells around the incumbent, then tries an extrapolation
    // along the net displacement of the sweep.
    std::array<double, 2> step{width[0] * 2.0 / (grid - 1), width[1] * 2.0 / (grid - 1)};
    const int golden_iters = 200;
    for (int sweep = 0; sweep < cfg.max_iter; ++sweep) {
        const double before = best.value;
        const auto start = best.argmax;
        for (int k = 0; k < 2; ++k) {
            if (width[k] == 0.0) continue;
            const double lo = std::max(box.lo[k], best.argmax[k] - step[k]);
            const double hi = std::min(box.hi[k], best.argmax[k] + step[k]);
            auto line = [&](double t) {
                auto p = best.argmax;
                p[k] = t;
                return f(p[0], p[1]);
            };
            const auto [t, v] = golden_maximize(line, lo, hi, 1e-13 * width[k], golden_iters);
            if (v > best.value) {
                best.argmax[k] = t;
                best.value = v;
            }
        }
        const std::array<double, 2> disp{best.argmax[0] - start[0], best.argmax[1] - start[1]};
        if (disp[0] != 0.0 || disp[1] != 0.0) {
            // Largest t keeping start + t*disp inside the box, capped at 8 sweeps' worth.
            double tmax = 8.0;
            for (int k = 0; k < 2; ++k) {
                if (disp[k] > 0) tmax = std::min(tmax, (box.hi[k] - start[k]) / disp[k]);
                if (disp[k] < 0) tmax = std::min(tmax, (box.lo[k] - start[k]) / disp[k]);
            }
            if (tmax > 1.0) {
                auto ray = [&](double t) { return f(start[0] + t * disp[0], start[1] + t * disp[1]); };
                const auto [t, v] = golden_maximize(ray, 1.0, tmax, 1e-12, golden_iters);
                if (v > best.value) {
                    best.argmax = {start[0] + t * disp[0], start[1] + t * disp[1]};
                    best.value = v;
                }
            }
        }
        const double change = best.value - before;
        if (change <= cfg.opt_rel_tol * std::max(1.0, std::fabs(best.value)) && sweep > 0) {
            return best;
        }
    }
    throw NonConvergence("maximize_2d: sweep cap of " + std::to_string(cfg.max_iter) + " reached");
}

std::vector<double> solve_dense_linear(Matrix a, std::vector<double> b) {
    const std::size_t n = a.size();
    if (b.size() != n) {
        throw InvalidParam("solve_dense_linear: dimension mismatch");
    }
    std::vector<double> scale(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) {
            throw InvalidParam("solve_dense_linear: matrix is not square");
        }
        for (double v : a[i]) scale[i] = std::max(scale[i], std::fabs(v));
        if (scale[i] == 0.0) {
            throw SingularMatrix("solve_dense_linear: zero row");
        }
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        }
        if (std::fabs(a[piv][col]) < 1e-14 * scale[piv]) {
            throw SingularMatrix("solve_dense_linear: pivot below threshold in column " +
                                 std::to_string(col));
        }
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        std::swap(scale[piv], scale[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r][col] / a[col][col];
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

void LinearProgram::validate() const {
    const std::size_t n = num_vars();
    if (n == 0) {
        throw InvalidParam("LinearProgram: empty objective");
    }
    for (const auto* rows : {&equalities, &upper_rows}) {
        for (const auto& r : *rows) {
            if (r.coeffs.size() != n) {
                throw InvalidParam("LinearProgram: row dimension differs from objective");
            }
        }
    }
    if (!lower_bounds.empty()) {
        if (lower_bounds.size() != n) {
            throw InvalidParam("LinearProgram: lower bound vector has wrong length");
        }
        for (double lb : lower_bounds) {
            if (std::isnan(lb) || lb == std::numeric_limits<double>::infinity()) {
                throw InvalidParam("LinearProgram: lower bounds must be finite or -inf");
            }
        }
    }
}

namespace {

/// Standard-form tableau: rows of [A | b], basis index per row.
using Real = long double;

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : m_(rows), n_(cols), t_(rows, std::vector<Real>(cols + 1, 0)), basis_(rows, 0) {}

    std::vector<Real>& row(std::size_t i) { return t_[i]; }
    Real& rhs(std::size_t i) { return t_[i][n_]; }
    std::size_t& basic(std::size_t i) { return basis_[i]; }
    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }

    void pivot(std::size_t pr, std::size_t pc, std::vector<Real>* cost_row = nullptr) {
        auto& prow = t_[pr];
        const Real pv = prow[pc];
        for (Real& v : prow) v /= pv;
        prow[pc] = 1.0;
        auto eliminate = [&](std::vector<Real>& target) {
            const Real factor = target[pc];
            if (factor == 0.0) return;
            for (std::size_t c = 0; c <= n_; ++c) {
                if (prow[c] != 0.0) target[c] -= factor * prow[c];
            }
            target[pc] = 0.0;
        };
        for (std::size_t r = 0; r < m_; ++r) {
            if (r != pr) eliminate(t_[r]);
        }
        if (cost_row) eliminate(*cost_row);
        basis_[pr] = pc;
    }

    void drop_row(std::size_t r) {
        t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
        --m_;
    }

    std::vector<Real> reduced_costs(const std::vector<double>& cost) const {
        std::vector<Real> rc(n_ + 1, 0);
        std::copy(cost.begin(), cost.end(), rc.begin());
        for (std::size_t r = 0; r < m_; ++r) {
            const Real cb = cost[basis_[r]];
            if (cb == 0.0) continue;
            for (std::size_t c = 0; c <= n_; ++c) rc[c] -= cb * t_[r][c];
        }
        return rc;
    }

    /// Raises every basic value by a distinct relative amount in [eps, 2 eps)
    /// so that no vertex met afterwards is degenerate.
    void perturb(std::mt19937_64& rng, Real eps) {
        std::uniform_real_distribution<double> u(1.0, 2.0);
        for (auto& row : t_) row[n_] += eps * u(rng) * std::max<Real>(1, std::fabs(row[n_]));
    }

    /// Recomputes basic values from the unperturbed right-hand side. The
    /// columns [inv0, inv0 + b0.size()) hold the basis inverse.
    void restore(const std::vector<Real>& b0, std::size_t inv0) {
        for (auto& row : t_) {
            Real v = 0;
            for (std::size_t k = 0; k < b0.size(); ++k) v += row[inv0 + k] * b0[k];
            row[n_] = v;
        }
    }

    /// Dual simplex from a dual-feasible basis until all basic values are
    /// above -feas_tol. Returns false when some row admits no entering column.
    bool dual_repair(const std::vector<double>& cost, const std::vector<bool>& allowed, Real pivot_tol,
                     Real feas_tol, int max_pivots) {
        std::vector<Real> rc = reduced_costs(cost);
        for (int it = 0; it < max_pivots; ++it) {
            std::size_t leave = m_;
            for (std::size_t r = 0; r < m_; ++r) {
                if (t_[r][n_] < -feas_tol && (leave == m_ || t_[r][n_] < t_[leave][n_])) leave = r;
            }
            if (leave == m_) return true;
            const auto& row = t_[leave];
            Real bound = std::numeric_limits<Real>::infinity();
            for (std::size_t c = 0; c < n_; ++c) {
                if (allowed[c] && row[c] < -pivot_tol) bound = std::min(bound, (std::max<Real>(rc[c], 0) + feas_tol) / -row[c]);
            }
            if (std::isinf(bound)) return false;
            std::size_t enter = n_;
            for (std::size_t c = 0; c < n_; ++c) {
                if (allowed[c] && row[c] < -pivot_tol && std::max<Real>(rc[c], 0) / -row[c] <= bound &&
                    (enter == n_ || row[c] < row[enter])) {
                    enter = c;
                }
            }
            pivot(leave, enter, &rc);
        }
        throw NonConvergence("solve_lp: pivot cap reached");
    }

    /// Simplex minimizing cost . x over columns with allowed[c]: most
    /// negative reduced cost enters.
    /// Returns false when the problem is unbounded.
    bool minimize(const std::vector<double>& cost, const std::vector<bool>& allowed, double tol,
                  double pivot_tol, double feas_tol, int max_pivots) {
        std::vector<Real> rc = reduced_costs(cost);
        for (int it = 0; it < max_pivots; ++it) {
            std::size_t enter = n_;
            Real most = -tol;
            for (std::size_t c = 0; c < n_; ++c) {
                if (allowed[c] && rc[c] < most) {
                    most = rc[c];
                    enter = c;
                }
            }
            if (enter == n_) return true;

            // Harris two-pass ratio test: bound the step with a small slack,
            // then take the largest pivot among rows within that bound.
            Real bound = std::numeric_limits<Real>::infinity();
            for (std::size_t r = 0; r < m_; ++r) {
                const Real a = t_[r][enter];
                if (a > pivot_tol) bound = std::min(bound, (std::max<Real>(t_[r][n_], 0) + feas_tol) / a);
            }
            if (std::isinf(bound)) return false;
            std::size_t leave = m_;
            for (std::size_t r = 0; r < m_; ++r) {
                const Real a = t_[r][enter];
                if (a > pivot_tol && std::max<Real>(t_[r][n_], 0) / a <= bound &&
                    (leave == m_ || a > t_[leave][enter])) {
                    leave = r;
                }
            }
            if (t_[leave][n_] < 0.0) t_[leave][n_] = 0.0;
            pivot(leave, enter, &rc);
            for (std::size_t r = 0; r < m_; ++r) {
                if (t_[r][n_] < 0.0 && t_[r][n_] > -feas_tol) t_[r][n_] = 0.0;
            }
        }
        throw NonConvergence("solve_lp: pivot cap reached");
    }

private:
    std::size_t m_, n_;
    std::vector<std::vector<Real>> t_;
    std::vector<std::size_t> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const ToleranceConfig& cfg) {
    cfg.validate();
    lp.validate();
    const std::size_t n = lp.num_vars();
    std::vector<double> lb = lp.lower_bounds.empty() ? std::vector<double>(n, 0.0) : lp.lower_bounds;

    // Column map: finite bound -> one shifted column; free -> (plus, minus) pair.
    std::vector<std::size_t> plus_col(n), minus_col(n, SIZE_MAX);
    std::size_t ncols = 0;
    for (std::size_t j = 0; j < n; ++j) {
        plus_col[j] = ncols++;
        if (std::isinf(lb[j])) minus_col[j] = ncols++;
    }
    const std::size_t n_struct = ncols;
    const std::size_t n_eq = lp.equalities.size();
    const std::size_t n_ub = lp.upper_rows.size();
    const std::size_t m = n_eq + n_ub;
    const std::size_t n_slack = n_ub;
    const std::size_t slack0 = n_struct;
    const std::size_t art0 = slack0 + n_slack;
    const std::size_t total = art0 + m;

    Tableau tab(m, total);
    auto load_row = [&](std::size_t r, const LinearProgram::Row& src) {
        auto& row = tab.row(r);
        double rhs = src.rhs;
        for (std::size_t j = 0; j < n; ++j) {
            const double a = src.coeffs[j];
            if (a == 0.0) continue;
            row[plus_col[j]] = a;
            if (minus_col[j] != SIZE_MAX) {
                row[minus_col[j]] = -a;
            } else {
                rhs -= a * lb[j];
            }
        }
        tab.rhs(r) = rhs;
    };
    for (std::size_t i = 0; i < n_eq; ++i) load_row(i, lp.equalities[i]);
    for (std::size_t i = 0; i < n_ub; ++i) {
        load_row(n_eq + i, lp.upper_rows[i]);
        tab.row(n_eq + i)[slack0 + i] = 1.0;
    }
    for (std::size_t r = 0; r < m; ++r) {
        if (tab.rhs(r) < 0) {
            for (auto& v : tab.row(r)) v = -v;
        }
        tab.row(r)[art0 + r] = 1.0;
        tab.basic(r) = art0 + r;
    }

    const double tol = cfg.lp_feas_tol;
    const int max_pivots = std::max(cfg.max_iter, 50 * static_cast<int>(m + total));

    std::vector<Real> b0(m);
    for (std::size_t r = 0; r < m; ++r) b0[r] = tab.rhs(r);
    std::mt19937_64 rng(0x51a7);
    const double pivot_tol = 1e-9;
    // Solve a perturbed copy, then move back to the true right-hand side and
    // repair the few values that turn negative.
    auto settle = [&](const std::vector<double>& cost, const std::vector<bool>& allowed) {
        tab.perturb(rng, 1e-7);
        if (!tab.minimize(cost, allowed, tol * 1e-2, pivot_tol, tol, max_pivots)) return false;
        for (int round = 0; round < 4; ++round) {
            tab.restore(b0, art0);
            if (!tab.dual_repair(cost, allowed, pivot_tol, tol, max_pivots)) {
                throw Infeasible("solve_lp: no point satisfies the constraints");
            }
            if (!tab.minimize(cost, allowed, tol * 1e-2, pivot_tol, tol, max_pivots)) return false;
            bool feasible = true;
            for (std::size_t r = 0; r < tab.rows(); ++r) feasible = feasible && tab.rhs(r) >= -tol;
            if (feasible) break;
        }
        return true;
    };

    // Phase 1.
    std::vector<double> cost1(total, 0.0);
    for (std::size_t r = 0; r < m; ++r) cost1[art0 + r] = 1.0;
    settle(cost1, std::vector<bool>(total, true));
    double infeas = 0.0;
    for (std::size_t r = 0; r < tab.rows(); ++r) {
        if (tab.basic(r) >= art0) infeas += static_cast<double>(tab.rhs(r));
    }
    double rhs_scale = 1.0;
    for (const auto* rows : {&lp.equalities, &lp.upper_rows}) {
        for (const auto& r : *rows) rhs_scale = std::max(rhs_scale, std::fabs(r.rhs));
    }
    if (infeas > tol * rhs_scale) {
        throw Infeasible("solve_lp: no point satisfies the constraints");
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t r = 0; r < tab.rows();) {
        if (tab.basic(r) < art0) {
            ++r;
            continue;
        }
        std::size_t pc = art0;
        Real largest = tol;
        for (std::size_t c = 0; c < art0; ++c) {
            if (std::fabs(tab.row(r)[c]) > largest) {
                largest = std::fabs(tab.row(r)[c]);
                pc = c;
            }
        }
        if (pc == art0) {
            tab.drop_row(r);
        } else {
            tab.rhs(r) = 0;
            tab.pivot(r, pc);
            ++r;
        }
    }

    // Phase 2.
    std::vector<double> cost2(total, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        cost2[plus_col[j]] = lp.objective[j];
        if (minus_col[j] != SIZE_MAX) cost2[minus_col[j]] = -lp.objective[j];
    }
    std::vector<bool> allowed(total, false);
    for (std::size_t c = 0; c < art0; ++c) allowed[c] = true;
    if (!settle(cost2, allowed)) {
        throw Unbounded("solve_lp: objective is unbounded below");
    }

    std::vector<double> cols(total, 0.0);
    for (std::size_t r = 0; r < tab.rows(); ++r) {
        const double v = static_cast<double>(tab.rhs(r));
        if (v < -tol * rhs_scale) throw NonConvergence("solve_lp: final basis is not primal feasible");
        cols[tab.basic(r)] = std::max(v, 0.0);
    }
    LpSolution sol{std::vector<double>(n), 0.0};
    for (std::size_t j = 0; j < n; ++j) {
        sol.x[j] = minus_col[j] != SIZE_MAX ? cols[plus_col[j]] - cols[minus_col[j]]
                                            : cols[plus_col[j]] + lb[j];
        sol.objective += lp.objective[j] * sol.x[j];
    }
    auto activity = [&](const LinearProgram::Row& row) {
        double v = 0.0, mag = std::fabs(row.rhs);
        for (std::size_t j = 0; j < n; ++j) {
            v += row.coeffs[j] * sol.x[j];
            mag += std::fabs(row.coeffs[j] * sol.x[j]);
        }
        return std::pair{v - row.rhs, std::max(mag, 1.0)};
    };
    for (const auto& row : lp.equalities) {
        const auto [res, mag] = activity(row);
        if (std::fabs(res) > 1e3 * tol * mag) throw NonConvergence("solve_lp: equality residual too large");
    }
    for (const auto& row : lp.upper_rows) {
        const auto [res, mag] = activity(row);
        if (res > 1e3 * tol * mag) throw NonConvergence("solve_lp: inequality residual too large");
    }
    return sol;
}

}  // namespace qm::numerics
