#include <doctest.h>

#include <cmath>

#include "qmlab/errors.hpp"
#include "qmlab/tables.hpp"
#include "reference_values.hpp"
#include "support.hpp"

using namespace qm::tables;
using testing::rel_err;

TEST_CASE("minimum of two corners") {
    const auto rows = table1();
    REQUIRE(rows.size() == 24);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 3; ++j) {
            const auto& r = rows[3 * i + j];
            CAPTURE(r.Q);
            CAPTURE(*r.p);
            CHECK(r.kind == RowKind::Table1);
            CHECK(r.Q == kTableQ[i]);
            CHECK(r.p == kTableP[j]);
            CHECK(rel_err(r.value, reference::kTable1[i][j]) < 1e-6);
        }
        const double Q = kTableQ[i];
        CHECK(rel_err(rows[3 * i + 1].value, (4 * Q - 1) / 3) < 1e-9);
        CHECK(rows[3 * i].value < rows[3 * i + 1].value);
        CHECK(rows[3 * i + 1].value < rows[3 * i + 2].value);

        const auto& ub = rows[18 + i];
        CHECK(ub.kind == RowKind::UpperBound);
        CHECK(!ub.p.has_value());
        CHECK(rel_err(ub.value, 2 * Q * Q / (Q + 1)) < 1e-14);
        CHECK(rel_err(ub.value, reference::kUpperBound[i]) < 1e-9);
    }
}

TEST_CASE("two-corner energy") {
    const double gamma = 3.0, p = 2.0;
    CHECK(rel_err(two_corner_energy(gamma, p, 0.3, 0.6), two_corner_energy(gamma, p, 0.6, 0.3)) < 1e-14);
    const auto d = table1_detail(2.0, 2.0);
    CHECK(rel_err(two_corner_energy(d.gamma, 2.0, d.s1, d.s2), d.value) < 1e-14);
    for (double ds : {-1e-3, 1e-3}) {
        CHECK(two_corner_energy(d.gamma, 2.0, d.s1 + ds, d.s2) <= d.value);
        CHECK(two_corner_energy(d.gamma, 2.0, d.s1, d.s2 + ds) <= d.value);
    }
    CHECK_THROWS_AS(two_corner_energy(gamma, p, 0.0, 0.5), qm::InvalidParam);
    CHECK_THROWS_AS(two_corner_energy(gamma, p, 0.5, 1.0), qm::InvalidParam);
}

TEST_CASE("power-function blow-up") {
    const auto rows = table2();
    REQUIRE(rows.size() == 30);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 3; ++j) {
            const auto& r = rows[3 * i + j];
            CAPTURE(r.Q);
            CAPTURE(*r.p);
            CHECK(r.kind == RowKind::Table2);
            if (i == 5 && j == 0) {
                CHECK(rel_err(r.value, reference::kTable2Q100p12) < 1e-10);
                CHECK(rel_err(r.value, reference::kTable2[i][j]) < 1e-7);
            } else {
                CHECK(rel_err(r.value, reference::kTable2[i][j]) < 1e-8);
            }
            CHECK(r.value > kTableQ[i]);
            CHECK(r.value < rows[18 + i].value);
        }
        const auto& qt = rows[24 + i];
        CHECK(qt.kind == RowKind::QtColumn);
        CHECK(rel_err(qt.value, reference::kQtColumn[i]) < 1e-8);
        CHECK(qt.value < rows[3 * i + 1].value);
    }
}

TEST_CASE("row kinds") {
    for (auto k : {RowKind::Table1, RowKind::Table2, RowKind::QtColumn, RowKind::UpperBound}) {
        CHECK(kind_from_name(kind_name(k)) == k);
    }
    CHECK_THROWS_AS(kind_from_name("table3"), qm::InputError);
}
