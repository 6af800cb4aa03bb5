#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace testing {

inline double rel_err(double a, double b) {
    return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300});
}

/// Seeded generator; every suite draws its own stream so results do not
/// depend on test order.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    /// Log-uniform on [lo, hi], lo > 0.
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    /// Constant Q in (1, hi], weighted toward values close to 1.
    double q(double hi = 100.0) { return 1.0 + log_uniform(1e-4, hi - 1.0); }
    double p() { return integer(0, 3) == 0 ? uniform(1.05, 1.5) : log_uniform(1.2, 60.0); }

    /// Sorted strictly increasing points in (lo, hi) with a minimum gap.
    std::vector<double> sorted(int n, double lo, double hi) {
        std::vector<double> xs;
        while (static_cast<int>(xs.size()) < n) {
            xs.clear();
            for (int i = 0; i < n; ++i) xs.push_back(uniform(lo, hi));
            std::sort(xs.begin(), xs.end());
            for (std::size_t i = 1; i < xs.size(); ++i) {
                if (xs[i] - xs[i - 1] < 1e-3 * (hi - lo)) {
                    xs.clear();
                    break;
                }
            }
        }
        return xs;
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace testing
