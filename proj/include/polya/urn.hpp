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
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "polya/fenwick.hpp"
#include "polya/rng.hpp"

namespace polya {

// Monte Carlo sampler of the Polya urn with attachment exponent gamma: d
// bins start with one ball each, and each arriving ball joins bin k with
// probability counts[k]^gamma / sum_j counts[j]^gamma.

/// One batch: which process, how many replicates, and which summaries.
struct SimConfig {
    int d = 1;
    long long n = 1000;        // final total balls, >= d
    double gamma = 1.0;        // >= 0; negative exponents are rejected
    int samples = 10000;       // >= 1
    std::uint64_t seed = 0;
    std::vector<double> quantiles;  // ascending, each in (0, 1)

    void validate() const {
        if (d < 1) throw std::domain_error("urn needs d >= 1");
        if (n < d) throw std::domain_error("urn needs n >= d");
        if (!(gamma >= 0.0)) throw std::domain_error("urn needs gamma >= 0");
        if (samples < 1) throw std::domain_error("batch needs samples >= 1");
        for (std::size_t i = 0; i < quantiles.size(); ++i) {
            if (!(quantiles[i] > 0.0 && quantiles[i] < 1.0))
                throw std::domain_error("quantile levels must lie in (0, 1)");
            if (i > 0 && quantiles[i] < quantiles[i - 1])
                throw std::domain_error("quantile levels must be ascending");
        }
    }
};

/// Per-bin counts of one realization.
struct UrnState {
    std::vector<long long> counts;
    long long total = 0;
};

/// Batch summary over the heaviest-bin fractions.
struct SampleSummary {
    int d = 0;
    long long n = 0;
    double gamma = 0.0;
    int samples = 0;
    double mean = 0.0;
    std::vector<std::pair<double, double>> quantile_values;  // (q, value)
    std::vector<double> fractions;  // retained only when requested
};

/// gamma = 1 fast path: a flat ball -> bin identity array. One uniform index
/// per step picks an existing ball, which selects its bin with probability
/// proportional to the bin's count, in O(1).
class ProportionalUrn {
public:
    explicit ProportionalUrn(int d, long long n_hint = 0) {
        counts_.assign(static_cast<std::size_t>(d), 1);
        balls_.reserve(static_cast<std::size_t>(std::max<long long>(n_hint, d)));
        for (int k = 0; k < d; ++k) balls_.push_back(k);
    }

    template <UniformSource Source>
    int step(Source& src) {
        return place(src.next_below(balls_.size()));
    }

    /// Places a ball in the bin owning ball `draw`; exposed so tests can
    /// drive the sampler with scripted draws.
    int place(std::uint64_t draw) {
        const int k = balls_[static_cast<std::size_t>(draw)];
        balls_.push_back(k);
        ++counts_[static_cast<std::size_t>(k)];
        return k;
    }

    /// The draw -> bin decode map.
    int bin_of_ball(std::uint64_t draw) const {
        return balls_[static_cast<std::size_t>(draw)];
    }

    long long total() const { return static_cast<long long>(balls_.size()); }
    const std::vector<long long>& counts() const { return counts_; }

private:
    std::vector<int> balls_;
    std::vector<long long> counts_;
};

/// gamma = 1 reference path: integer count weights in a prefix-sum tree.
/// Consumes the same kind of draw (a uniform ball index) as ProportionalUrn
/// but decodes it through cumulative counts.
class CountPrefixUrn {
public:
    explicit CountPrefixUrn(int d) : tree_(d) {
        counts_.assign(static_cast<std::size_t>(d), 1);
        total_ = d;
        for (int k = 0; k < d; ++k) tree_.add(k, 1);
    }

    template <UniformSource Source>
    int step(Source& src) {
        return place(src.next_below(static_cast<std::uint64_t>(total_)));
    }

    int place(std::uint64_t draw) {
        const int k = pick_bin(draw);
        ++counts_[static_cast<std::size_t>(k)];
        ++total_;
        tree_.add(k, 1);
        return k;
    }

    /// The draw -> bin decode map.
    int pick_bin(std::uint64_t draw) const { return tree_.upper_bound(draw); }

    long long total() const { return total_; }
    const std::vector<long long>& counts() const { return counts_; }

private:
    FenwickTree<std::uint64_t> tree_;
    std::vector<long long> counts_;
    long long total_ = 0;
};

/// General gamma >= 0: per-bin weights counts[k]^gamma kept in a prefix-sum
/// tree; each insertion touches one bin in O(log d).
class PowerWeightUrn {
public:
    PowerWeightUrn(int d, double gamma) : tree_(d), gamma_(gamma) {
        counts_.assign(static_cast<std::size_t>(d), 1);
        weights_.assign(static_cast<std::size_t>(d), 1.0);  // 1^gamma
        total_ = d;
        for (int k = 0; k < d; ++k) tree_.add(k, 1.0);
    }

    template <UniformSource Source>
    int step(Source& src) {
        const double x = src.next_unit() * tree_.total();
        const int k = tree_.upper_bound(x);
        const auto idx = static_cast<std::size_t>(k);
        const double updated =
            std::pow(static_cast<double>(counts_[idx] + 1), gamma_);
        tree_.add(k, updated - weights_[idx]);
        weights_[idx] = updated;
        ++counts_[idx];
        ++total_;
        return k;
    }

    long long total() const { return total_; }
    const std::vector<long long>& counts() const { return counts_; }

private:
    FenwickTree<double> tree_;
    std::vector<long long> counts_;
    std::vector<double> weights_;
    long long total_ = 0;
    double gamma_;
};

/// One realization: start from the all-ones state and add n - d balls.
/// Deterministic given stream_seed.
inline UrnState run_single(int d, long long n, double gamma,
                           std::uint64_t stream_seed) {
    if (d < 1) throw std::domain_error("urn needs d >= 1");
    if (n < d) throw std::domain_error("urn needs n >= d");
    if (!(gamma >= 0.0)) throw std::domain_error("urn needs gamma >= 0");
    RandomSource src(stream_seed);
    if (gamma == 1.0) {
        ProportionalUrn urn(d, n);
        for (long long t = d; t < n; ++t) urn.step(src);
        return UrnState{urn.counts(), n};
    }
    PowerWeightUrn urn(d, gamma);
    for (long long t = d; t < n; ++t) urn.step(src);
    return UrnState{urn.counts(), n};
}

/// max(counts) / total.
inline double heaviest_fraction(const UrnState& state) {
    if (state.counts.empty()) throw std::domain_error("empty urn state");
    const long long mx = *std::max_element(state.counts.begin(), state.counts.end());
    return static_cast<double>(mx) / static_cast<double>(state.total);
}

/// Nearest-rank quantile: element at index ceil(q * len) - 1 of the sorted
/// sample.
inline double quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw std::domain_error("quantile of an empty sample");
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("quantile level must lie in (0, 1)");
    auto rank = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(sorted.size())));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

/// Runs config.samples independent replicates, replicate r seeded by
/// derive_stream_seed(config.seed, r). Results are identical for a fixed
/// (config, seed) regardless of worker count: replicates land in a vector
/// by index, the mean is reduced in index order, and quantiles come from
/// one sort.
inline SampleSummary simulate_batch(const SimConfig& config, int workers = 0,
                                    bool keep_fractions = false) {
    config.validate();
    const int replicates = config.samples;
    std::vector<double> fractions(static_cast<std::size_t>(replicates));

    auto run_range = [&](int lo, int hi) {
        for (int r = lo; r < hi; ++r) {
            const UrnState state =
                run_single(config.d, config.n, config.gamma,
                           derive_stream_seed(config.seed, static_cast<std::uint64_t>(r)));
            fractions[static_cast<std::size_t>(r)] = heaviest_fraction(state);
        }
    };

    int w = workers > 0 ? workers
                        : static_cast<int>(std::thread::hardware_concurrency());
    w = std::clamp(w, 1, replicates);
    if (w == 1) {
        run_range(0, replicates);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(w));
        const int chunk = (replicates + w - 1) / w;
        for (int i = 0; i < w; ++i) {
            const int lo = i * chunk;
            const int hi = std::min(replicates, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    SampleSummary summary;
    summary.d = config.d;
    summary.n = config.n;
    summary.gamma = config.gamma;
    summary.samples = config.samples;
    double acc = 0.0;
    for (double f : fractions) acc += f;
    summary.mean = acc / static_cast<double>(replicates);

    std::vector<double> sorted = fractions;
    std::sort(sorted.begin(), sorted.end());
    summary.quantile_values.reserve(config.quantiles.size());
    for (double q : config.quantiles)
        summary.quantile_values.emplace_back(q, quantile(sorted, q));
    if (keep_fractions) summary.fractions = std::move(fractions);
    return summary;
}

/// Median terminal heaviest fraction across replicates; a qualitative probe
/// of the gamma < 1 / gamma = 1 / gamma > 1 phases.
inline double regime_probe(int d, double gamma, long long n, int replicates,
                           std::uint64_t seed) {
    SimConfig config{d, n, gamma, replicates, seed, {0.5}};
    return simulate_batch(config).quantile_values.front().second;
}

}  // namespace polya
