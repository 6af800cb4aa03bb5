#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "qmlab/bounds.hpp"
#include "qmlab/errors.hpp"
#include "support.hpp"

using namespace qm::bounds;
using testing::rel_err;

TEST_CASE("two-function bounds at nine-eighths") {
    CHECK(std::fabs(km_bound(1.125, 1.125) - 81.0 / 64.0) < 1e-14);
    CHECK(std::fabs(min2_bound(1.125, 1.125) - 81.0 / 68.0) < 1e-14);
    CHECK(km_bound(3.0, 1.5) == 4.5);
    CHECK(km_bound(3.0, 4.0) == 7.0);
    CHECK(min2_bound(1.0, 1.0) == 1.0);
    CHECK(min2_bound(5.0, 1.0) == 5.0);
    CHECK_THROWS_AS(min2_bound(0.5, 2.0), qm::InvalidParam);
    CHECK_THROWS_AS(km_bound(2.0, NAN), qm::InvalidParam);
}

TEST_CASE("min2 bound properties") {
    testing::Gen g(51);
    for (int trial = 0; trial < 500; ++trial) {
        const double Q1 = g.q(), Q2 = g.q();
        const double b = min2_bound(Q1, Q2);
        const long double L1 = Q1, L2 = Q2;
        const double direct = static_cast<double>((L1 + L2 - 2) * L1 * L2 / (L1 * L2 - 1));
        CHECK(rel_err(b, direct) < 1e-12);
        CHECK(b == min2_bound(Q2, Q1));
        CHECK(b >= std::max(Q1, Q2));
        CHECK(b <= km_bound(Q1, Q2) * (1 + 1e-15));
        const auto s = min2_sandwich(Q1, Q2);
        CHECK(s.lower == Q1 + Q2 - 2);
        CHECK(s.upper == Q1 + Q2 - 1);
        CHECK(s.lower < b);
        CHECK(b < s.upper);
    }
}

TEST_CASE("three-function closed form") {
    CHECK(rel_err(min3_bound(2, 3, 4), 5.886843591191417) < 1e-14);
    testing::Gen g(52);
    for (int trial = 0; trial < 300; ++trial) {
        const double Q = g.q();
        CHECK(rel_err(min3_bound(Q, Q, Q), 6 * Q * Q * Q / ((Q + 1) * (2 * Q + 1))) < 1e-12);
        CHECK(min3_bound(Q, 1.0, 1.0) == Q);
        const double Q2 = g.q();
        CHECK(rel_err(min3_bound(Q, Q2, 1.0), min2_bound(Q, Q2)) < 1e-15);
        CHECK(rel_err(min3_bound(1.0, Q, Q2), min2_bound(Q, Q2)) < 1e-15);
    }
    CHECK(min3_bound(1, 1, 1) == 1.0);
}

TEST_CASE("closed form is symmetric and agrees with the multiplier system") {
    testing::Gen g(53);
    for (int trial = 0; trial < 300; ++trial) {
        std::array<double, 3> q{g.q(), g.q(), g.q()};
        const double b = min3_bound(q[0], q[1], q[2]);
        std::array<double, 3> r = q;
        std::sort(r.begin(), r.end());
        do {
            CHECK(rel_err(min3_bound(r[0], r[1], r[2]), b) < 1e-12);
        } while (std::next_permutation(r.begin(), r.end()));
        CHECK(b >= *std::max_element(q.begin(), q.end()));

        const auto s = min3_via_system(q[0], q[1], q[2]);
        CHECK(rel_err(s.Q_A0, b) < 1e-9);
        for (int k = 0; k < 3; ++k) {
            CHECK(s.Q_A1[k] <= s.Q_A0 * (1 + 1e-9));
            CHECK(s.Q_A2[k] <= s.Q_A0 * (1 + 1e-9));
            CHECK(s.x[k] >= -1e-12);
            CHECK(s.x_hat[k] >= -1e-12);
        }
    }
    CHECK_THROWS_AS(min3_via_system(1.0, 2.0, 3.0), qm::InvalidParam);
}
