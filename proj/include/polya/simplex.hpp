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
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "polya/combinatorics.hpp"
#include "polya/errors.hpp"
#include "polya/rational.hpp"

namespace polya {

// Exact finite-n ground truth for the critical urn. After m balls are added
// to d bins that start with one ball each, the count vector is uniform on
// the discrete simplex S(d, m) = { v >= 1 componentwise, sum v = d + m }.
// Everything here is a pure function of its arguments.

inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

/// Identifies S(d, t - d): count vectors of length d, entries >= 1, summing
/// to the total t.
struct SimplexSpec {
    int d = 1;         // bins, >= 1
    long long t = 1;   // total balls, >= d
};

/// |S(d, m)| = binom(m + d - 1, d - 1).
inline BigInt simplex_cardinality(int d, long long m) {
    if (d < 1) throw std::domain_error("simplex needs d >= 1");
    if (m < 0) throw std::domain_error("simplex needs m >= 0");
    return binomial(m + d - 1, d - 1);
}

namespace detail {
inline void validate_spec(const SimplexSpec& spec) {
    if (spec.d < 1) throw std::domain_error("simplex needs d >= 1");
    if (spec.t < spec.d) throw std::domain_error("simplex needs t >= d");
}

inline void check_enumeration_cap(const BigInt& states, std::size_t cap) {
    if (states > static_cast<unsigned long>(cap)) {
        throw resource_limit_error("enumeration of " + states.get_str() +
                                   " states exceeds cap " + std::to_string(cap));
    }
}
}  // namespace detail

/// Streams the vectors of S(d, t - d) in lexicographic order, each exactly
/// once. Refuses specs whose cardinality exceeds the cap.
class SimplexEnumerator {
public:
    explicit SimplexEnumerator(SimplexSpec spec,
                               std::size_t cap = kDefaultEnumerationCap)
        : spec_(spec) {
        detail::validate_spec(spec);
        detail::check_enumeration_cap(simplex_cardinality(spec.d, spec.t - spec.d), cap);
        current_.assign(static_cast<std::size_t>(spec.d), 1);
        current_.back() = spec.t - spec.d + 1;
    }

    /// Next vector, or nullptr once exhausted. The pointee is reused.
    const std::vector<long long>* next() {
        if (fresh_) {
            fresh_ = false;
            return &current_;
        }
        const int d = spec_.d;
        long long suffix = current_.back();
        for (int i = d - 2; i >= 0; --i) {
            if (suffix > d - 1 - i) {
                // bump position i, reset the tail to its lexicographic minimum
                ++current_[static_cast<std::size_t>(i)];
                long long rest = suffix - 1;
                for (int j = i + 1; j < d - 1; ++j) {
                    current_[static_cast<std::size_t>(j)] = 1;
                    --rest;
                }
                current_.back() = rest;
                return &current_;
            }
            suffix += current_[static_cast<std::size_t>(i)];
        }
        return nullptr;
    }

    const SimplexSpec& spec() const { return spec_; }

private:
    SimplexSpec spec_;
    std::vector<long long> current_;
    bool fresh_ = true;
};

/// Everything the enumerator yields, collected.
inline std::vector<std::vector<long long>> enumerate_simplex(
    SimplexSpec spec, std::size_t cap = kDefaultEnumerationCap) {
    SimplexEnumerator en(spec, cap);
    std::vector<std::vector<long long>> out;
    while (const auto* v = en.next()) out.push_back(*v);
    return out;
}

/// The law of the count vector after m additions, with exact probabilities.
struct ExactDistribution {
    SimplexSpec spec;
    std::map<std::vector<long long>, Rational> probabilities;
};

/// Runs the process law forward by exact dynamic programming: each step
/// moves mass v_k / total to the state with bin k incremented. The result
/// is checked to be exactly uniform, not assumed.
inline ExactDistribution exact_state_distribution(
    int d, long long m, std::size_t cap = kDefaultEnumerationCap) {
    if (d < 1) throw std::domain_error("process needs d >= 1");
    if (m < 0) throw std::domain_error("process needs m >= 0");
    const BigInt states = simplex_cardinality(d, m);
    detail::check_enumeration_cap(states, cap);

    std::map<std::vector<long long>, Rational> law;
    law[std::vector<long long>(static_cast<std::size_t>(d), 1)] = 1;
    for (long long step = 0; step < m; ++step) {
        const long long total = d + step;
        std::map<std::vector<long long>, Rational> next;
        for (const auto& [v, p] : law) {
            for (int k = 0; k < d; ++k) {
                auto w = v;
                ++w[static_cast<std::size_t>(k)];
                next[std::move(w)] +=
                    p * make_rational(v[static_cast<std::size_t>(k)], total);
            }
        }
        law = std::move(next);
    }

    const Rational uniform = make_rational(BigInt(1), states);
    Rational mass = 0;
    for (const auto& [v, p] : law) {
        if (p != uniform)
            throw std::logic_error("process law is not uniform at d=" +
                                   std::to_string(d) + ", m=" + std::to_string(m));
        mass += p;
    }
    if (mass != 1) throw std::logic_error("process law does not sum to 1");
    return ExactDistribution{SimplexSpec{d, d + m}, std::move(law)};
}

/// Identifies the block of S(d, (alpha-1)d) whose minimum entry is mu,
/// attained exactly tau times.
struct TBlockSpec {
    long long alpha = 2;  // >= 2
    int d = 2;            // >= 2
    long long mu = 1;     // in [1, alpha - 1]
    int tau = 1;          // in [1, d - 1]
};

/// Block cardinality: binom((alpha - mu) d - 1, d - tau - 1) * binom(d, tau).
inline BigInt t_cardinality(const TBlockSpec& block) {
    if (block.alpha < 2) throw std::domain_error("block needs alpha >= 2");
    if (block.d < 2) throw std::domain_error("block needs d >= 2");
    if (block.mu < 1 || block.mu > block.alpha - 1)
        throw std::domain_error("block needs mu in [1, alpha - 1]");
    if (block.tau < 1 || block.tau > block.d - 1)
        throw std::domain_error("block needs tau in [1, d - 1]");
    return binomial((block.alpha - block.mu) * block.d - 1, block.d - block.tau - 1) *
           binomial(block.d, block.tau);
}

/// The blocks plus the all-equal vector partition the whole simplex:
/// binom(alpha d - 1, d - 1) = 1 + sum of block cardinalities.
inline bool partition_identity_check(long long alpha, int d) {
    if (alpha < 2) throw std::domain_error("identity needs alpha >= 2");
    if (d < 2) throw std::domain_error("identity needs d >= 2");
    BigInt rhs = 1;
    for (long long mu = 1; mu <= alpha - 1; ++mu)
        for (int tau = 1; tau <= d - 1; ++tau)
            rhs += t_cardinality(TBlockSpec{alpha, d, mu, tau});
    return binomial(alpha * d - 1, d - 1) == rhs;
}

/// E[(max_k v_k / n)^m] under the uniform law on S(d, n - d), by direct
/// enumeration.
inline Rational exact_finite_moment(int d, long long n, int m,
                                    std::size_t cap = kDefaultEnumerationCap) {
    if (m < 0) throw std::domain_error("moment order must be >= 0");
    SimplexEnumerator en(SimplexSpec{d, n}, cap);
    BigInt numerator = 0;
    BigInt states = 0;
    while (const auto* v = en.next()) {
        const long long mx = *std::max_element(v->begin(), v->end());
        numerator += ipow(to_bigint(mx), static_cast<unsigned long>(m));
        ++states;
    }
    return make_rational(numerator,
                         states * ipow(to_bigint(n), static_cast<unsigned long>(m)));
}

namespace detail {

// E[max_k v_k ^ k-th power] on S(d, t - d), via the minimum-value partition.
// Conditioning on { min = mu, attained tau times } reduces the law of the
// maximum to the one on S(d - tau, t - d mu) shifted by mu, so
//   |S| E[H^k] = [d | t] (t/d)^k
//              + sum_{mu, tau} |T(mu, tau)| sum_i C(k, i) E[H'^(k-i)] mu^i .
inline Rational heavy_count_power_mean(
    int d, long long t, int k,
    std::map<std::tuple<int, long long, int>, Rational>& memo) {
    if (k == 0) return Rational(1);
    if (d == 1) return Rational(ipow(to_bigint(t), static_cast<unsigned long>(k)));
    const auto key = std::make_tuple(d, t, k);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    Rational acc = (t % d == 0)
                       ? Rational(ipow(to_bigint(t / d), static_cast<unsigned long>(k)))
                       : Rational(0);
    for (long long mu = 1; t - static_cast<long long>(d) * mu >= 1; ++mu) {
        const long long rest = t - static_cast<long long>(d) * mu;
        for (int tau = 1; tau <= d - 1; ++tau) {
            const BigInt block = binomial(rest - 1, d - tau - 1) * binomial(d, tau);
            if (block == 0) continue;
            Rational inner = 0;
            BigInt mu_power = 1;
            for (int i = 0; i <= k; ++i) {
                inner += Rational(binomial(k, i) * mu_power) *
                         heavy_count_power_mean(d - tau, rest, k - i, memo);
                mu_power *= to_bigint(mu);
            }
            acc += Rational(block) * inner;
        }
    }
    acc /= Rational(simplex_cardinality(d, t - d));
    memo.emplace(key, acc);
    return acc;
}

}  // namespace detail

/// E[(max_k v_k / t)^m] without enumerating states, through the partition
/// recursion above. Agrees exactly with exact_finite_moment.
inline Rational partition_finite_moment(int d, long long t, int m) {
    if (d < 1) throw std::domain_error("simplex needs d >= 1");
    if (t < d) throw std::domain_error("simplex needs t >= d");
    if (m < 0) throw std::domain_error("moment order must be >= 0");
    std::map<std::tuple<int, long long, int>, Rational> memo;
    return detail::heavy_count_power_mean(d, t, m, memo) /
           Rational(ipow(to_bigint(t), static_cast<unsigned long>(m)));
}

/// Closed form of int_0^c x^a (c - x)^b dx = a! b! / (a+b+1)! * c^(a+b+1).
inline double beta_integral(int a, int b, double c) {
    if (a < 1 || b < 1) throw std::domain_error("beta integral needs a, b >= 1");
    if (!(c > 0)) throw std::domain_error("beta integral needs c > 0");
    const Rational coeff =
        make_rational(BigInt(1), binomial(a + b, a) * BigInt(a + b + 1));
    return to_double(coeff) * std::pow(c, a + b + 1);
}

}  // namespace polya
