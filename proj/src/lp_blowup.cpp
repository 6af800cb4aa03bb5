#include "qmlab/lp_blowup.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "qmlab/errors.hpp"

namespace qm::lp {

namespace {

void check_n(int N) {
    if (N < 2 || N > 6) throw InvalidParam("N must lie in [2, 6], got " + std::to_string(N));
}

/// Appends the coverage of the regions of `perm` (vpos = N .. 1).
void cover_permutation(int N, std::span<const int> perm, const std::vector<Inequality>& ineqs,
                       std::vector<CoverageEntry>& out) {
    std::vector<int> rank(N);
    for (int r = 0; r < N; ++r) rank[perm[r]] = r;
    for (int vpos = N; vpos >= 1; --vpos) {
        const Region region{std::vector<int>(perm.begin(), perm.end()), vpos};
        for (const auto& q : ineqs) {
            if (rank[q.i] >= vpos) continue;  // needs u_i < v
            bool above = true;
            int rhs = kV;
            int rhs_rank = vpos;
            for (int s = 0; s < N; ++s) {
                if (!(q.S >> s & 1u)) continue;
                if (rank[s] < rank[q.i]) {
                    above = false;
                    break;
                }
                if (rank[s] < rhs_rank) {
                    rhs_rank = rank[s];
                    rhs = s;
                }
            }
            if (above) out.push_back({region, q, q.i, rhs, q.i});
        }
    }
}

}  // namespace

std::vector<Inequality> enumerate_inequalities(int N) {
    check_n(N);
    std::vector<Inequality> out;
    out.reserve(static_cast<std::size_t>(N) << (N - 1));
    for (int i = 0; i < N; ++i) {
        for (std::uint32_t S = 0; S < (1u << N); ++S) {
            if (!(S >> i & 1u)) out.push_back({i, S});
        }
    }
    return out;
}

std::vector<CoverageEntry> region_coverage(int N) {
    check_n(N);
    const auto ineqs = enumerate_inequalities(N);
    std::vector<int> perm(N);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<CoverageEntry> out;
    do {
        cover_permutation(N, perm, ineqs, out);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

std::vector<CoverageEntry> region_coverage(int N, std::span<const int> perm) {
    check_n(N);
    std::vector<int> sorted(perm.begin(), perm.end());
    std::sort(sorted.begin(), sorted.end());
    for (int r = 0; r < N; ++r) {
        if (static_cast<int>(sorted.size()) != N || sorted[r] != r) {
            throw InvalidParam("region_coverage: not a permutation of 0..N-1");
        }
    }
    std::vector<CoverageEntry> out;
    cover_permutation(N, perm, enumerate_inequalities(N), out);
    return out;
}

BlowupLpResult solve_blowup_lp(std::span<const double> Q, const numerics::ToleranceConfig& cfg,
                               const BlowupLpOptions& opts) {
    const int N = static_cast<int>(Q.size());
    check_n(N);
    for (double q : Q) {
        if (!(q > 1.0) || !std::isfinite(q)) throw InvalidParam("solve_blowup_lp: every Q must be > 1");
    }
    if (opts.symmetrize && std::any_of(Q.begin(), Q.end(), [&](double q) { return q != Q[0]; })) {
        throw InvalidParam("solve_blowup_lp: symmetrize requires equal constants");
    }

    const auto ineqs = enumerate_inequalities(N);
    std::map<std::pair<int, std::uint32_t>, int> index;
    for (std::size_t k = 0; k < ineqs.size(); ++k) index[{ineqs[k].i, ineqs[k].S}] = static_cast<int>(k);
    const int nlam = opts.symmetrize ? N : static_cast<int>(ineqs.size());
    auto var_of = [&](const Inequality& q) {
        return opts.symmetrize ? std::popcount(q.S) : index.at({q.i, q.S});
    };
    const int t = nlam;
    const int nvar = nlam + 1;

    // Rows are accumulated per region, then deduplicated.
    std::set<std::vector<double>> eq_rows, eq_one_rows, ub_rows;
    const auto coverage = region_coverage(N);
    std::size_t pos = 0;
    while (pos < coverage.size()) {
        std::size_t end = pos;
        while (end < coverage.size() && coverage[end].region == coverage[pos].region) ++end;
        const auto& region = coverage[pos].region;
        std::vector<std::vector<double>> net(N, std::vector<double>(nvar, 0.0));
        std::vector<double> vrow(nvar, 0.0);
        for (std::size_t e = pos; e < end; ++e) {
            const auto& c = coverage[e];
            const int v = var_of(c.inequality);
            net[c.lhs_fn][v] += 1.0;
            if (c.rhs_fn == kV) {
                vrow[v] += Q[c.constant_of];
            } else {
                net[c.rhs_fn][v] -= Q[c.constant_of];
            }
        }
        for (int f = 0; f < N; ++f) {
            if (f == region.perm[0]) {
                eq_one_rows.insert(net[f]);
            } else if (std::any_of(net[f].begin(), net[f].end(), [](double a) { return a != 0.0; })) {
                eq_rows.insert(net[f]);
            }
        }
        vrow[t] = -1.0;
        ub_rows.insert(vrow);
        pos = end;
    }

    numerics::LinearProgram lp;
    lp.objective.assign(nvar, 0.0);
    lp.objective[t] = 1.0;
    auto negated = [](std::vector<double> r) {
        for (double& a : r) a = -a;
        return r;
    };
    for (const auto& r : eq_one_rows) {
        if (opts.relaxed) {
            lp.upper_rows.push_back({negated(r), -1.0});
        } else {
            lp.equalities.push_back({r, 1.0});
        }
    }
    for (const auto& r : eq_rows) {
        if (opts.relaxed) {
            lp.upper_rows.push_back({negated(r), 0.0});
        } else {
            lp.equalities.push_back({r, 0.0});
        }
    }
    for (const auto& r : ub_rows) lp.upper_rows.push_back({r, 0.0});

    const auto sol = numerics::solve_lp(lp, cfg);
    BlowupLpResult out{sol.objective, ineqs, std::vector<double>(ineqs.size(), 0.0), N >= 4};
    for (std::size_t k = 0; k < ineqs.size(); ++k) out.multipliers[k] = sol.x[var_of(ineqs[k])];
    return out;
}

TripleMultipliers triple_multipliers(const BlowupLpResult& r, std::span<const double> Q) {
    if (Q.size() != 3 || r.inequalities.size() != 12) {
        throw InvalidParam("triple_multipliers: needs an N = 3 solution");
    }
    TripleMultipliers m{};
    for (std::size_t k = 0; k < r.inequalities.size(); ++k) {
        const auto& q = r.inequalities[k];
        const double lam = r.multipliers[k];
        switch (std::popcount(q.S)) {
            case 0: m.x[q.i] = lam; break;
            case 1: m.x_pair[q.i][std::countr_zero(q.S)] = lam; break;
            default: m.x_hat[q.i] = lam; break;
        }
    }
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int k = (i + 2) % 3;
        m.y[i] = (1.0 - Q[j]) * m.x_pair[j][k];
    }
    return m;
}

}  // namespace qm::lp
