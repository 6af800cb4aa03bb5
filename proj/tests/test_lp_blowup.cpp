#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "qmlab/bounds.hpp"
#include "qmlab/errors.hpp"
#include "qmlab/lp_blowup.hpp"
#include "coverage_rows.hpp"
#include "support.hpp"

using namespace qm::lp;
using testing::rel_err;

using coverage::as_rows;
using coverage::reference_rows;
using coverage::Row;

TEST_CASE("inequality family") {
    CHECK(enumerate_inequalities(2).size() == 4);
    CHECK(enumerate_inequalities(3).size() == 12);
    CHECK(enumerate_inequalities(4).size() == 32);
    CHECK(enumerate_inequalities(6).size() == 6 * 32);
    CHECK_THROWS_AS(enumerate_inequalities(1), qm::InvalidParam);
    CHECK_THROWS_AS(enumerate_inequalities(7), qm::InvalidParam);
    const auto e = enumerate_inequalities(3);
    for (const auto& q : e) CHECK((q.S >> q.i & 1u) == 0u);
    CHECK(e.front() == Inequality{0, 0});
    CHECK(e[1] == Inequality{0, 2});
    CHECK(e[3] == Inequality{0, 6});
    CHECK(e[4] == Inequality{1, 0});
}

TEST_CASE("coverage for three functions matches the reference table") {
    const int perm[] = {0, 1, 2};
    const auto rows = as_rows(region_coverage(3, perm));
    CHECK(rows.size() == 17);
    CHECK(rows == reference_rows(0, 1, 2));

    std::array<int, 3> p{0, 1, 2};
    do {
        CHECK(as_rows(region_coverage(3, p)) == reference_rows(p[0], p[1], p[2]));
    } while (std::next_permutation(p.begin(), p.end()));
    CHECK(region_coverage(3).size() == 6 * 17);
}

TEST_CASE("coverage for two functions") {
    // Regions u1 < u2 < v, u1 < v < u2 and the mirror pair.
    const int perm[] = {0, 1};
    const auto rows = as_rows(region_coverage(2, perm));
    const std::set<Row> want{{2, 0, 0, 0, kV, 0}, {2, 1, 0, 1, kV, 1}, {2, 0, 2, 0, 1, 0},
                             {1, 0, 0, 0, kV, 0}, {1, 0, 2, 0, kV, 0}};
    CHECK(rows == want);
}

TEST_CASE("every region is covered by the minimal function with S empty") {
    for (int N = 2; N <= 5; ++N) {
        const auto entries = region_coverage(N);
        std::set<std::pair<std::vector<int>, int>> covered;
        for (const auto& e : entries) {
            CHECK(e.lhs_fn == e.inequality.i);
            CHECK(e.constant_of == e.inequality.i);
            if (e.inequality.S == 0 && e.inequality.i == e.region.perm[0]) {
                covered.insert({e.region.perm, e.region.vpos});
            }
        }
        int fact = 1;
        for (int k = 2; k <= N; ++k) fact *= k;
        CHECK(covered.size() == static_cast<std::size_t>(fact * N));
    }
}

TEST_CASE("LP reference values") {
    // Reference optima from an independent LP solver on the same model.
    struct Case {
        std::vector<double> Q;
        double bound;
    };
    const Case cases[] = {
        {{2, 3}, 3.6},
        {{2, 3, 4}, 5.886843591191417},
        {{2, 2, 2}, 3.2},
        {{1.5, 7, 30}, 35.26015928236211},
        {{2, 2, 2, 2}, 3.657142857142857},
        {{2, 3, 4, 5}, 8.912731074907422},
        {{2, 3, 4, 5, 6}, 12.71513349554523},
        {{2, 3, 4, 5, 6, 7}, 17.3225593022097},
    };
    for (const auto& c : cases) {
        const auto r = solve_blowup_lp(c.Q);
        CHECK(rel_err(r.bound, c.bound) < 1e-9);
        CHECK(r.exploratory == (c.Q.size() >= 4));
        CHECK(r.multipliers.size() == r.inequalities.size());
        for (double m : r.multipliers) CHECK(m >= 0.0);
    }
    const double bad[] = {1.0, 2.0};
    CHECK_THROWS_AS(solve_blowup_lp(bad), qm::InvalidParam);
    const double seven[] = {2, 2, 2, 2, 2, 2, 2};
    CHECK_THROWS_AS(solve_blowup_lp(seven), qm::InvalidParam);
}

TEST_CASE("symmetrized and relaxed variants") {
    for (int N = 2; N <= 5; ++N) {
        for (double Q : {1.01, 2.0, 10.0}) {
            const std::vector<double> q(N, Q);
            const double full = solve_blowup_lp(q).bound;
            CHECK(rel_err(solve_blowup_lp(q, {}, {false, true}).bound, full) < 1e-9);
            CHECK(solve_blowup_lp(q, {}, {true, false}).bound <= full * (1 + 1e-9));
        }
    }
    const double uneq[] = {2, 3};
    CHECK_THROWS_AS(solve_blowup_lp(uneq, {}, {false, true}), qm::InvalidParam);
}

TEST_CASE("permutation symmetry, monotonicity and the sanity chain") {
    testing::Gen g(61);
    for (int trial = 0; trial < 100; ++trial) {
        const int N = g.integer(2, 4);
        std::vector<double> q;
        for (int k = 0; k < N; ++k) q.push_back(g.q(20.0));
        const double b = solve_blowup_lp(q).bound;
        CHECK(b >= *std::max_element(q.begin(), q.end()) * (1 - 1e-10));

        auto shuffled = q;
        std::reverse(shuffled.begin(), shuffled.end());
        CHECK(rel_err(solve_blowup_lp(shuffled).bound, b) < 1e-9);

        auto bigger = q;
        bigger[g.integer(0, N - 1)] *= g.uniform(1.0, 1.5);
        CHECK(solve_blowup_lp(bigger).bound >= b * (1 - 1e-9));

        auto order = q;
        std::sort(order.begin(), order.end());
        do {
            double fold = order[0];
            for (int k = 1; k < N; ++k) fold = qm::bounds::min2_bound(fold, order[k]);
            CHECK(b <= fold * (1 + 1e-9));
        } while (std::next_permutation(order.begin(), order.end()));
    }
}

TEST_CASE("three-function multipliers") {
    testing::Gen g(62);
    for (int trial = 0; trial < 100; ++trial) {
        const std::vector<double> q{g.q(), g.q(), g.q()};
        const auto r = solve_blowup_lp(q);
        const auto m = triple_multipliers(r, q);
        double qa0 = 0.0;
        for (int i = 0; i < 3; ++i) {
            qa0 += q[i] * m.x[i];
            CHECK(m.x[i] >= 0.0);
            CHECK(m.x_hat[i] >= 0.0);
        }
        CHECK(rel_err(qa0, r.bound) < 1e-9);
        // Pairwise minimum multiplier sums: u_i is the minimum in A0 for
        // every ordering, so its gradient coefficient totals 1.
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3, k = (i + 2) % 3;
            CHECK(std::fabs(m.x[i] + m.x_pair[i][j] + m.x_pair[i][k] + m.x_hat[i] - 1.0) < 1e-9);
        }
    }
    const double two[] = {2, 3};
    CHECK_THROWS_AS(triple_multipliers(solve_blowup_lp(two), two), qm::InvalidParam);
}
