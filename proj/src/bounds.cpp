#include "qmlab/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "qmlab/errors.hpp"
#include "qmlab/numerics.hpp"

namespace qm::bounds {

namespace {

void check_at_least_one(double Q) {
    if (!(Q >= 1.0) || !std::isfinite(Q)) throw InvalidParam("constants must be finite and >= 1");
}

void check_above_one(double Q) {
    if (!(Q > 1.0) || !std::isfinite(Q)) throw InvalidParam("constants must be finite and > 1");
}

}  // namespace

double km_bound(double Q1, double Q2) {
    check_at_least_one(Q1);
    check_at_least_one(Q2);
    return std::min(Q1 * Q2, Q1 + Q2);
}

double min2_bound(double Q1, double Q2) {
    check_at_least_one(Q1);
    check_at_least_one(Q2);
    if (Q1 == 1.0 || Q2 == 1.0) return std::max(Q1, Q2);
    const double e1 = Q1 - 1.0, e2 = Q2 - 1.0;
    return (e1 + e2) * (Q1 * Q2) / (e1 + e2 + e1 * e2);
}

double min3_bound(double Q1, double Q2, double Q3) {
    check_at_least_one(Q1);
    check_at_least_one(Q2);
    check_at_least_one(Q3);
    std::array<double, 3> q{Q1, Q2, Q3};
    std::sort(q.begin(), q.end());
    if (q[0] == 1.0) return min2_bound(q[1], q[2]);

    // Written in e = Q - 1 so nothing cancels as the constants approach 1.
    const double e1 = Q1 - 1.0, e2 = Q2 - 1.0, e3 = Q3 - 1.0;
    const double P = e1 * e2 + e2 * e3 + e1 * e3 + 2.0 * e1 * e2 * e3;
    auto R = [](double a, double b) { return a * b * (a + b) / (a + b + a * b); };
    return Q1 * Q2 * Q3 / P * (R(e2, e3) + R(e1, e3) + R(e1, e2));
}

TripleSystemReport min3_via_system(double Q1, double Q2, double Q3) {
    check_above_one(Q1);
    check_above_one(Q2);
    check_above_one(Q3);
    const std::array<double, 3> Q{Q1, Q2, Q3};
    std::array<double, 3> S{};
    for (int i = 0; i < 3; ++i) S[i] = Q[i] / (Q[i] - 1.0);

    const numerics::Matrix Sm{{0.0, S[2], S[1]}, {S[2], 0.0, S[0]}, {S[1], S[0], 0.0}};
    const numerics::Matrix Rm{{Q[0], 1.0, 1.0}, {1.0, Q[1], 1.0}, {1.0, 1.0, Q[2]}};

    numerics::Matrix A(3, std::vector<double>(3, 0.0));
    std::vector<double> rhs(3, 0.0);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (int l = 0; l < 3; ++l) A[i][j] += Sm[i][l] * Rm[l][j];
            rhs[i] += Sm[i][j] * Q[j];
        }
        A[i][i] -= 1.0;
    }
    const auto xs = numerics::solve_dense_linear(A, rhs);

    TripleSystemReport r{};
    for (int i = 0; i < 3; ++i) r.x[i] = xs[i];
    for (int i = 0; i < 3; ++i) {
        double rx = 0.0;
        for (int j = 0; j < 3; ++j) rx += Rm[i][j] * r.x[j];
        r.y[i] = Q[i] - rx;
    }
    // (1 - Q_a) x_ab = y_c for {a, b, c} = {1, 2, 3}.
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            if (a == b) continue;
            const int c = 3 - a - b;
            r.x_pair[a][b] = r.y[c] / (1.0 - Q[a]);
        }
    }
    r.Q_A0 = Q[0] * r.x[0] + Q[1] * r.x[1] + Q[2] * r.x[2];
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int k = (i + 2) % 3;
        // Cancellation of the second-lowest gradient in the ordering (i, j, k).
        r.x_hat[i] = (r.x[j] + r.x_pair[j][k] - Q[i] * r.x_pair[i][j]) / Q[i];
        r.Q_A1[k] = Q[i] * r.x[i] + Q[j] * r.x[j] + r.x[k];
        r.Q_A2[i] = Q[i] * (r.x[i] + r.x_pair[i][j] + r.x_pair[i][k] + r.x_hat[i]);
    }
    return r;
}

Sandwich min2_sandwich(double Q1, double Q2) {
    check_above_one(Q1);
    check_above_one(Q2);
    return {Q1 + Q2 - 2.0, Q1 + Q2 - 1.0};
}

}  // namespace qm::bounds
