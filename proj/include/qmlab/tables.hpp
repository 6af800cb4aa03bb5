#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "qmlab/numerics.hpp"

namespace qm::tables {

enum class RowKind { Table1, Table2, QtColumn, UpperBound };

std::string_view kind_name(RowKind k);
/// Throws InputError for unknown names.
RowKind kind_from_name(std::string_view name);

struct TableRow {
    double Q;
    std::optional<double> p;  ///< empty for rows that do not depend on p
    double value;
    RowKind kind;

    friend bool operator==(const TableRow&, const TableRow&) = default;
};

inline constexpr double kTableQ[] = {1.001, 1.01, 1.125, 2.0, 10.0, 100.0};
inline constexpr double kTableP[] = {1.2, 2.0, 100.0};

/// Energy on (0, 1) of the minimum of two one-corner functions with quotient
/// gamma, both running from (0, 0) to (1, 1), with corners at 1 - s1 and
/// 1 - s2. Works in the frame x -> 1 - x so corners near 1 keep their
/// resolution.
double two_corner_energy(double gamma, double p, double s1, double s2);

struct Table1Detail {
    double value;
    double gamma;
    double s1;  ///< 1 - c1
    double s2;  ///< 1 - c2
};

/// Maximizes two_corner_energy over both corners, gamma = gamma_from_q(Q, p).
Table1Detail table1_detail(double Q, double p, const numerics::ToleranceConfig& cfg = {});
TableRow table1_row(double Q, double p, const numerics::ToleranceConfig& cfg = {});

/// q_tilde(Q, Q, p).
TableRow table2_row(double Q, double p, const numerics::ToleranceConfig& cfg = {});
/// Q + bound1 of the p = 2 closed form.
TableRow qt_row(double Q);
/// min2_bound(Q, Q).
TableRow upper_bound_row(double Q);

/// 18 table1 rows (Q major, p minor) followed by 6 upper-bound rows.
std::vector<TableRow> table1(const numerics::ToleranceConfig& cfg = {});
/// 18 table2 rows, 6 upper-bound rows, 6 qt-column rows.
std::vector<TableRow> table2(const numerics::ToleranceConfig& cfg = {});

}  // namespace qm::tables
