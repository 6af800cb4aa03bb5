#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qmlab/numerics.hpp"

namespace qm::lp {

/// Test inequality for u_i against min over S of {u_s, v}. Functions are
/// indexed from 0; bit s of `S` marks membership.
struct Inequality {
    int i;
    std::uint32_t S;

    friend bool operator==(const Inequality&, const Inequality&) = default;
};

/// One ordering cell: u_perm[0] < ... < u_perm[N-1], with v lying above the
/// first `vpos` functions and below the rest (1 <= vpos <= N).
struct Region {
    std::vector<int> perm;
    int vpos;

    friend bool operator==(const Region&, const Region&) = default;
};

inline constexpr int kV = -1;  ///< rhs_fn marker for the comparison function v

struct CoverageEntry {
    Region region;
    Inequality inequality;
    int lhs_fn;
    int rhs_fn;       ///< function index, or kV
    int constant_of;  ///< the RHS is multiplied by Q[constant_of]
};

/// All N 2^(N-1) pairs (i, S), i ascending, S in binary counting order.
std::vector<Inequality> enumerate_inequalities(int N);

/// Every region (permutations in lexicographic order, vpos from N down to 1)
/// paired with each inequality whose integration set contains it.
std::vector<CoverageEntry> region_coverage(int N);

/// Coverage restricted to the regions of one permutation.
std::vector<CoverageEntry> region_coverage(int N, std::span<const int> perm);

struct BlowupLpOptions {
    /// Allow leftover gradient terms with the favourable sign instead of
    /// demanding exact cancellation.
    bool relaxed = false;
    /// Tie the multipliers to |S| only. Valid when all Q are equal.
    bool symmetrize = false;
};

struct BlowupLpResult {
    double bound;
    std::vector<Inequality> inequalities;
    std::vector<double> multipliers;  ///< aligned with `inequalities`
    bool exploratory;                 ///< N >= 4: no closed form to compare with
};

BlowupLpResult solve_blowup_lp(std::span<const double> Q, const numerics::ToleranceConfig& cfg = {},
                               const BlowupLpOptions& opts = {});

struct TripleMultipliers {
    double x[3];
    double x_pair[3][3];
    double x_hat[3];
    double y[3];
};

/// Reads the N = 3 multipliers in the (x_i, x_ij, x_hat_i, y_i) notation.
TripleMultipliers triple_multipliers(const BlowupLpResult& r, std::span<const double> Q);

}  // namespace qm::lp
