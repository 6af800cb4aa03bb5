#pragma once

#include <array>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace qm::numerics {

/// Tolerances and iteration caps shared by every solver in the library.
struct ToleranceConfig {
    double root_abs_tol = 1e-12;  ///< final bracket width for root finding
    double opt_rel_tol = 1e-9;    ///< relative objective change that stops 2-D refinement
    double lp_feas_tol = 1e-10;   ///< feasibility/optimality slack in the simplex
    int max_iter = 200;           ///< per-solver iteration (or sweep) cap

    /// Throws InvalidParam unless all tolerances are positive and max_iter >= 1.
    void validate() const;
};

using ScalarFn = std::function<double(double)>;
using PlaneFn = std::function<double(double, double)>;

/// Brent-style bracketed root: bisection safeguarding secant and inverse
/// quadratic steps. Requires f(lo)*f(hi) < 0; throws NoSignChange otherwise.
/// The returned point is the bracket end with the smaller |f|.
double find_root_bracketed(const ScalarFn& f, double lo, double hi,
                           const ToleranceConfig& cfg = {});

/// One-dimensional golden-section maximization of a function assumed
/// unimodal on [lo, hi]. Returns (argmax, value).
std::pair<double, double> golden_maximize(const ScalarFn& f, double lo, double hi,
                                          double x_tol, int max_iter);

struct Box2 {
    std::array<double, 2> lo;
    std::array<double, 2> hi;
};

struct Max2Result {
    std::array<double, 2> argmax;
    double value;
};

/// Grid scan of the box followed by coordinate-wise golden-section sweeps.
/// `grid` is the number of nodes per axis and is clamped to at least 64.
Max2Result maximize_2d(const PlaneFn& f, const Box2& box, const ToleranceConfig& cfg = {},
                       int grid = 64);

using Matrix = std::vector<std::vector<double>>;

/// Gaussian elimination with partial pivoting. Throws SingularMatrix when a
/// pivot falls below 1e-14 times the scale of its row.
std::vector<double> solve_dense_linear(Matrix a, std::vector<double> b);

struct LinearProgram {
    struct Row {
        std::vector<double> coeffs;
        double rhs;
    };
    std::vector<double> objective;  ///< minimized
    std::vector<Row> equalities;
    std::vector<Row> upper_rows;  ///< coeffs . x <= rhs
    /// Per-variable lower bound; -infinity makes the variable free. Defaults
    /// to zero for every variable when left empty.
    std::vector<double> lower_bounds;

    std::size_t num_vars() const { return objective.size(); }
    void validate() const;
};

struct LpSolution {
    std::vector<double> x;
    double objective;
};

/// Dense two-phase simplex with Bland's rule. Throws Infeasible or Unbounded.
LpSolution solve_lp(const LinearProgram& lp, const ToleranceConfig& cfg = {});

}  // namespace qm::numerics
