// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "polya/moments.hpp"
#include "polya/simplex.hpp"
#include "polya/stats.hpp"
#include "polya/urn.hpp"

namespace polya {

// Self-contained consistency checks batching the cross-module invariants:
// the exact identities hold with zero tolerance, the stochastic ones run a
// fixed-seed simulation against an exact law. The CLI surfaces these as
// `verify`; tests can call individual checks with injected data.

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

enum class VerifyLevel { Quick, Full };

inline constexpr std::uint64_t kVerifySeed = 1234567;

/// The three recurrences must produce identical exact tables.
inline CheckResult check_recurrence_agreement(int m_max = 12, int d_max = 30) {
    const MomentTable a = moment_table(m_max, d_max, Recurrence::MultiTerm);
    const MomentTable b = moment_table(m_max, d_max, Recurrence::TwoTerm);
    const MomentTable c = moment_table(m_max, d_max, Recurrence::IteratedSum);
    for (int m = 0; m <= m_max; ++m)
        for (int d = 1; d <= d_max; ++d) {
            const auto& va = a.entries()[m][d - 1];
            if (va != b.entries()[m][d - 1] || va != c.entries()[m][d - 1])
                return {"recurrence agreement", false,
                        "mismatch at m=" + std::to_string(m) + ", d=" + std::to_string(d)};
        }
    return {"recurrence agreement", true,
            "3 recurrences identical on " + std::to_string((m_max + 1) * d_max) + " entries"};
}

/// Base cases, range, and the two-term relation, re-derived cell by cell on
/// a moment grid (rows m, columns d - 1). Corruption anywhere fails.
inline CheckResult check_table_consistency(const std::vector<std::vector<Rational>>& grid) {
    const int m_max = static_cast<int>(grid.size()) - 1;
    for (int m = 0; m <= m_max; ++m) {
        const int d_max = static_cast<int>(grid[m].size());
        for (int d = 1; d <= d_max; ++d) {
            const Rational& v = grid[m][d - 1];
            const std::string at = "m=" + std::to_string(m) + ", d=" + std::to_string(d);
            if ((m == 0 || d == 1) && v != 1)
                return {"moment table consistency", false, "base case broken at " + at};
            if (m >= 1) {
                if (v > 1 || v * rational_pow(Rational(d), static_cast<unsigned long>(m)) < 1)
                    return {"moment table consistency", false, "value out of range at " + at};
            }
            if (m >= 1 && d >= 2) {
                const Rational expect =
                    make_rational(d - 1, m + d - 1) * grid[m][d - 2] +
                    make_rational(m, static_cast<long>(d) * (m + d - 1)) * grid[m - 1][d - 1];
                if (v != expect)
                    return {"moment table consistency", false, "recurrence broken at " + at};
            }
        }
    }
    return {"moment table consistency", true,
            "base cases, range and recurrence hold on all entries"};
}

/// binom(alpha d - 1, d - 1) = 1 + sum of block cardinalities, exactly.
inline CheckResult check_partition_identity(long long alpha_max = 10, int d_max = 10) {
    for (long long alpha = 2; alpha <= alpha_max; ++alpha)
        for (int d = 2; d <= d_max; ++d)
            if (!partition_identity_check(alpha, d))
                return {"partition identity", false,
                        "fails at alpha=" + std::to_string(alpha) + ", d=" + std::to_string(d)};
    return {"partition identity", true,
            "holds for all 2 <= alpha <= " + std::to_string(alpha_max) +
                ", 2 <= d <= " + std::to_string(d_max)};
}

/// Each block cardinality matches a filtered enumeration, and the blocks
/// plus the all-equal vector tile the simplex.
inline CheckResult check_partition_blocks(long long alpha_max = 6, int d_max = 6) {
    for (long long alpha = 2; alpha <= alpha_max; ++alpha) {
        for (int d = 2; d <= d_max; ++d) {
            std::map<std::pair<long long, int>, BigInt> found;
            BigInt all_equal = 0, total = 0;
            SimplexEnumerator en(SimplexSpec{d, alpha * d});
            while (const auto* v = en.next()) {
                const long long mn = *std::min_element(v->begin(), v->end());
                const int tau = static_cast<int>(std::count(v->begin(), v->end(), mn));
                if (tau == d)
                    ++all_equal;
                else
                    ++found[{mn, tau}];
                ++total;
            }
            if (all_equal != 1)
                return {"partition blocks", false, "all-equal vector not unique"};
            BigInt covered = 1;
            for (long long mu = 1; mu <= alpha - 1; ++mu)
                for (int tau = 1; tau <= d - 1; ++tau) {
                    const BigInt expect = t_cardinality(TBlockSpec{alpha, d, mu, tau});
                    BigInt got = 0;
                    if (auto it = found.find({mu, tau}); it != found.end()) got = it->second;
                    if (got != expect)
                        return {"partition blocks", false,
                                "block (alpha=" + std::to_string(alpha) + ", d=" +
                                    std::to_string(d) + ", mu=" + std::to_string(mu) +
                                    ", tau=" + std::to_string(tau) + ") has " + got.get_str() +
                                    " states, expected " + expect.get_str()};
                    covered += got;
                }
            if (covered != total || total != simplex_cardinality(d, (alpha - 1) * d))
                return {"partition blocks", false, "blocks do not tile the simplex"};
        }
    }
    return {"partition blocks", true,
            "cardinalities match filtered enumeration for alpha, d <= " +
                std::to_string(d_max)};
}

/// The forward process law is exactly uniform on the simplex.
inline CheckResult check_uniformity_dp(int d_max = 4, int m_max = 8) {
    for (int d = 1; d <= d_max; ++d)
        for (long long m = 0; m <= m_max; ++m) {
            try {
                const ExactDistribution law = exact_state_distribution(d, m);
                if (BigInt(static_cast<long>(law.probabilities.size())) !=
                    simplex_cardinality(d, m))
                    return {"process-law uniformity", false,
                            "support size wrong at d=" + std::to_string(d) +
                                ", m=" + std::to_string(m)};
            } catch (const std::logic_error& e) {
                return {"process-law uniformity", false, e.what()};
            }
        }
    return {"process-law uniformity", true,
            "exact DP uniform for d <= " + std::to_string(d_max) +
                ", m <= " + std::to_string(m_max)};
}

/// Enumeration and the partition recursion must agree exactly.
inline CheckResult check_oracle_equivalence(int d_max = 4, long long t_max = 24,
                                            int m_max = 4) {
    for (int d = 1; d <= d_max; ++d)
        for (long long t = d; t <= t_max; ++t)
            for (int m = 0; m <= m_max; ++m)
                if (exact_finite_moment(d, t, m) != partition_finite_moment(d, t, m))
                    return {"finite-moment oracle equivalence", false,
                            "mismatch at d=" + std::to_string(d) + ", t=" + std::to_string(t) +
                                ", m=" + std::to_string(m)};
    return {"finite-moment oracle equivalence", true,
            "enumeration == partition recursion for d <= " + std::to_string(d_max) +
                ", t <= " + std::to_string(t_max) + ", m <= " + std::to_string(m_max)};
}

/// log d / d <= mean <= (log d + 1) / d across the grid.
inline CheckResult check_mean_bounds(int d_max = 10000) {
    Rational h = 0;
    for (int d = 1; d <= d_max; ++d) {
        h += make_rational(1, d);
        const double mean = to_double(h) / d;
        const auto [lo, hi] = mean_bounds(d);
        if (!(lo <= mean && mean <= hi))
            return {"mean bounds", false, "violated at d=" + std::to_string(d)};
    }
    return {"mean bounds", true, "bracket the exact mean for d <= " + std::to_string(d_max)};
}

/// The coefficient of variation peaks at d = 10 inside [0.268, 0.273] and
/// declines through d = 1024 sampled at powers of two.
inline CheckResult check_cv_peak() {
    int argmax = 1;
    double best = -1.0;
    for (int d = 1; d <= 50; ++d) {
        const double cv = coefficient_of_variation(d);
        if (cv > best) {
            best = cv;
            argmax = d;
        }
    }
    if (argmax != 10)
        return {"coefficient-of-variation peak", false,
                "argmax over d <= 50 is " + std::to_string(argmax) + ", expected 10"};
    if (!(best >= 0.268 && best <= 0.273))
        return {"coefficient-of-variation peak", false,
                "cv(10) = " + std::to_string(best) + " outside [0.268, 0.273]"};
    double prev = best;
    for (int d = 16; d <= 1024; d *= 2) {
        const double cv = coefficient_of_variation(d);
        if (!(cv < prev))
            return {"coefficient-of-variation peak", false,
                    "not decreasing at d=" + std::to_string(d)};
        prev = cv;
    }
    return {"coefficient-of-variation peak", true,
            "peak at d=10, cv(10)=" + std::to_string(best) +
                ", strictly decreasing through d=1024"};
}

/// Simulated terminal states at (d=3, n=8, gamma=1) against the exact
/// uniform 21-state law, chi-square at significance 1e-3.
inline CheckResult check_small_state_chi_square(int replicates = 1'000'000,
                                                std::uint64_t seed = kVerifySeed) {
    const int d = 3;
    const long long n = 8;
    std::map<std::vector<long long>, std::size_t> index;
    {
        SimplexEnumerator en(SimplexSpec{d, n});
        std::size_t i = 0;
        while (const auto* v = en.next()) index[*v] = i++;
    }
    std::vector<long long> observed(index.size(), 0);
    for (int r = 0; r < replicates; ++r) {
        const UrnState state =
            run_single(d, n, 1.0, derive_stream_seed(seed, static_cast<std::uint64_t>(r)));
        ++observed[index.at(state.counts)];
    }
    const ChiSquareResult res = chi_square_uniform(observed);
    const bool ok = res.p_value > 1e-3;
    return {"small-state chi-square", ok,
            "statistic=" + std::to_string(res.statistic) + ", df=" + std::to_string(res.df) +
                ", p=" + std::to_string(res.p_value) +
                (ok ? " (> 1e-3)" : " (<= 1e-3)")};
}

inline std::vector<CheckResult> run_verification(VerifyLevel level) {
    std::vector<CheckResult> results;
    results.push_back(check_recurrence_agreement());
    results.push_back(check_table_consistency(
        moment_table(8, 16, Recurrence::TwoTerm).entries()));
    results.push_back(check_partition_identity());
    results.push_back(check_partition_blocks());
    results.push_back(check_uniformity_dp());
    results.push_back(check_oracle_equivalence());
    results.push_back(check_mean_bounds());
    results.push_back(check_cv_peak());
    if (level == VerifyLevel::Full) results.push_back(check_small_state_chi_square());
    return results;
}

inline bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return true;
}

}  // namespace polya
