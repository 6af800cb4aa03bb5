#include "qmlab/tables.hpp"

#include <cmath>
#include <string>

#include "qmlab/bounds.hpp"
#include "qmlab/corner.hpp"
#include "qmlab/errors.hpp"
#include "qmlab/power.hpp"
#include "qmlab/pwl.hpp"

namespace qm::tables {

namespace {

/// Reflected one-corner function: x -> u(1 - x) - 1 for the corner at 1 - s.
pwl::PiecewiseLinearFn reflected_corner(double gamma, double s) {
    const double alpha = 1.0 / (1.0 + s * (gamma - 1.0));
    return {{0.0, s, 1.0}, {0.0, -alpha * gamma * s, -1.0}};
}

double logistic_complement(double t) { return 1.0 / (1.0 + std::exp(t)); }

}  // namespace

std::string_view kind_name(RowKind k) {
    switch (k) {
        case RowKind::Table1: return "table1";
        case RowKind::Table2: return "table2";
        case RowKind::QtColumn: return "qt-column";
        case RowKind::UpperBound: return "upper-bound";
    }
    return "?";
}

RowKind kind_from_name(std::string_view name) {
    for (auto k : {RowKind::Table1, RowKind::Table2, RowKind::QtColumn, RowKind::UpperBound}) {
        if (kind_name(k) == name) return k;
    }
    throw InputError("unknown row kind '" + std::string(name) + "'");
}

double two_corner_energy(double gamma, double p, double s1, double s2) {
    if (!(s1 > 0.0 && s1 < 1.0 && s2 > 0.0 && s2 < 1.0)) {
        throw InvalidParam("two_corner_energy: corners must lie strictly inside (0, 1)");
    }
    return pwl::energy(pwl::pointwise_min(reflected_corner(gamma, s1), reflected_corner(gamma, s2)), p);
}

Table1Detail table1_detail(double Q, double p, const numerics::ToleranceConfig& cfg) {
    if (!(Q > 1.0) || !std::isfinite(Q)) throw InvalidParam("table1_row: Q must be > 1");
    const double gamma = corner::gamma_from_q(Q, p, cfg);
    // Corners are searched in logit coordinates t = log(c / (1 - c)) around
    // log k, where the one-corner optimum sits.
    const double centre = std::log(corner::corner_constant(gamma, p).k);
    const numerics::Box2 box{{centre - 10.0, centre - 10.0}, {centre + 10.0, centre + 10.0}};
    auto objective = [&](double t1, double t2) {
        return two_corner_energy(gamma, p, logistic_complement(t1), logistic_complement(t2));
    };
    const auto m = numerics::maximize_2d(objective, box, cfg);
    return {m.value, gamma, logistic_complement(m.argmax[0]), logistic_complement(m.argmax[1])};
}

TableRow table1_row(double Q, double p, const numerics::ToleranceConfig& cfg) {
    return {Q, p, table1_detail(Q, p, cfg).value, RowKind::Table1};
}

TableRow table2_row(double Q, double p, const numerics::ToleranceConfig& cfg) {
    return {Q, p, power::q_tilde(Q, Q, p, cfg).q_tilde, RowKind::Table2};
}

TableRow qt_row(double Q) {
    return {Q, 2.0, Q + power::qt_closed_form_p2(Q, Q).bound1, RowKind::QtColumn};
}

TableRow upper_bound_row(double Q) { return {Q, std::nullopt, bounds::min2_bound(Q, Q), RowKind::UpperBound}; }

std::vector<TableRow> table1(const numerics::ToleranceConfig& cfg) {
    std::vector<TableRow> rows;
    for (double Q : kTableQ) {
        for (double p : kTableP) rows.push_back(table1_row(Q, p, cfg));
    }
    for (double Q : kTableQ) rows.push_back(upper_bound_row(Q));
    return rows;
}

std::vector<TableRow> table2(const numerics::ToleranceConfig& cfg) {
    std::vector<TableRow> rows;
    for (double Q : kTableQ) {
        for (double p : kTableP) rows.push_back(table2_row(Q, p, cfg));
    }
    for (double Q : kTableQ) rows.push_back(upper_bound_row(Q));
    for (double Q : kTableQ) rows.push_back(qt_row(Q));
    return rows;
}

}  // namespace qm::tables
