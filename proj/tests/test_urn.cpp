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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "polya/fenwick.hpp"
#include "polya/simplex.hpp"
#include "polya/stats.hpp"
#include "polya/urn.hpp"

using namespace polya;

namespace {

/// Replays a fixed list of bounded draws; fails the test if a sampler asks
/// for more randomness than scripted or a draw is out of range.
struct ScriptedSource {
    std::vector<std::uint64_t> draws;
    std::size_t at = 0;
    std::uint64_t next_below(std::uint64_t bound) {
        REQUIRE(at < draws.size());
        REQUIRE(draws[at] < bound);
        return draws[at++];
    }
    double next_unit() {
        FAIL("scripted source has no unit draws");
        return 0.0;
    }
};

double sample_std(const std::vector<double>& xs, double mean) {
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / (static_cast<double>(xs.size()) - 1.0));
}

}  // namespace

TEST_CASE("fenwick tree prefix search") {
    FenwickTree<std::uint64_t> tree(5);
    const std::uint64_t weights[5] = {2, 1, 4, 0, 3};
    for (int i = 0; i < 5; ++i) tree.add(i, weights[i]);
    CHECK(tree.total() == 10);
    CHECK(tree.prefix(0) == 2);
    CHECK(tree.prefix(2) == 7);
    // draws 0,1 -> slot 0; 2 -> slot 1; 3..6 -> slot 2; 7..9 -> slot 4
    const int expected[10] = {0, 0, 1, 2, 2, 2, 2, 4, 4, 4};
    for (std::uint64_t x = 0; x < 10; ++x) CHECK(tree.upper_bound(x) == expected[x]);
    CHECK(tree.upper_bound(10) == 4);  // top-edge clamp

    std::mt19937 rng(3);
    FenwickTree<std::uint64_t> big(37);
    std::vector<std::uint64_t> w(37);
    for (int i = 0; i < 37; ++i) {
        w[i] = rng() % 9;
        big.add(i, w[i]);
    }
    for (std::uint64_t x = 0; x < big.total(); ++x) {
        std::uint64_t acc = 0;
        int slot = 0;
        while (acc + w[slot] <= x) acc += w[slot++];
        REQUIRE(big.upper_bound(x) == slot);
    }
}

TEST_CASE("stream seeds are stable and spread out") {
    CHECK(derive_stream_seed(1, 0) == derive_stream_seed(1, 0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t r = 0; r < 1000; ++r) seen.insert(derive_stream_seed(42, r));
    CHECK(seen.size() == 1000);
}

TEST_CASE("bounded draws stay in range") {
    RandomSource src(99);
    for (std::uint64_t bound : {1ull, 2ull, 3ull, 7ull, 1000ull}) {
        for (int i = 0; i < 200; ++i) REQUIRE(src.next_below(bound) < bound);
    }
    for (int i = 0; i < 200; ++i) {
        const double u = src.next_unit();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("heaviest fraction") {
    CHECK(heaviest_fraction(UrnState{{1, 1}, 2}) == 0.5);
    CHECK(heaviest_fraction(UrnState{{3, 1}, 4}) == 0.75);
    CHECK(heaviest_fraction(UrnState{{5, 3, 2}, 10}) == 0.5);
    CHECK_THROWS_AS(heaviest_fraction(UrnState{}), std::domain_error);
}

TEST_CASE("nearest-rank quantile") {
    CHECK(quantile({0.5, 0.6, 0.7, 0.8}, 0.5) == 0.6);
    CHECK(quantile({0.4}, 0.01) == 0.4);
    CHECK(quantile({0.4}, 0.99) == 0.4);
    std::vector<double> ten(10);
    for (int i = 0; i < 10; ++i) ten[i] = 0.1 * (i + 1);
    CHECK(quantile(ten, 0.95) == Catch::Approx(1.0));
    CHECK(quantile(ten, 0.05) == Catch::Approx(0.1));
    CHECK_THROWS_AS(quantile({}, 0.5), std::domain_error);
    CHECK_THROWS_AS(quantile({0.5}, 0.0), std::domain_error);
    CHECK_THROWS_AS(quantile({0.5}, 1.0), std::domain_error);
}

TEST_CASE("run_single degenerate cases") {
    const UrnState one_bin = run_single(1, 100, 1.0, 5);
    REQUIRE(one_bin.counts == std::vector<long long>{100});
    CHECK(one_bin.total == 100);

    const UrnState no_additions = run_single(2, 2, 1.0, 5);
    REQUIRE(no_additions.counts == std::vector<long long>({1, 1}));

    CHECK_THROWS_AS(run_single(0, 5, 1.0, 1), std::domain_error);
    CHECK_THROWS_AS(run_single(3, 2, 1.0, 1), std::domain_error);
    CHECK_THROWS_AS(run_single(2, 5, -0.5, 1), std::domain_error);
}

TEST_CASE("conservation across regimes") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 8);
        const long long n = d + static_cast<long long>(rng() % 200);
        const double gamma = std::vector<double>{0.0, 0.5, 1.0, 2.0}[rng() % 4];
        const UrnState state = run_single(d, n, gamma, rng());
        long long sum = 0;
        for (long long c : state.counts) {
            REQUIRE(c >= 1);
            sum += c;
        }
        REQUIRE(sum == n);
        const double f = heaviest_fraction(state);
        REQUIRE(f >= 1.0 / d - 1e-12);
        REQUIRE(f <= 1.0);
    }
}

TEST_CASE("uniform attachment concentrates at 1/2") {
    int hits = 0;
    for (int s = 0; s < 100; ++s) {
        const double f = heaviest_fraction(run_single(2, 100000, 0.0, derive_stream_seed(77, s)));
        if (std::abs(f - 0.5) <= 0.02) ++hits;
    }
    CHECK(hits >= 95);
}

TEST_CASE("batch summary basics") {
    SimConfig config;
    config.d = 1;
    config.n = 50;
    config.samples = 100;
    config.quantiles = {0.05, 0.5, 0.95};
    const SampleSummary summary = simulate_batch(config);
    CHECK(summary.mean == 1.0);
    for (const auto& [q, v] : summary.quantile_values) CHECK(v == 1.0);
}

TEST_CASE("batch summaries are deterministic across worker counts") {
    SimConfig config;
    config.d = 4;
    config.n = 500;
    config.samples = 200;
    config.seed = 99;
    config.quantiles = {0.2, 0.8};
    const SampleSummary a = simulate_batch(config, 1, true);
    const SampleSummary b = simulate_batch(config, 4, true);
    const SampleSummary c = simulate_batch(config, 3, true);
    REQUIRE(a.fractions == b.fractions);
    REQUIRE(a.fractions == c.fractions);
    CHECK(a.mean == b.mean);
    CHECK(a.quantile_values == b.quantile_values);

    SimConfig other = config;
    other.seed = 100;
    CHECK(simulate_batch(other, 1, true).fractions != a.fractions);
}

TEST_CASE("batch summary invariants") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 6; ++trial) {
        SimConfig config;
        config.d = 2 + static_cast<int>(rng() % 6);
        config.n = config.d + 50 + static_cast<long long>(rng() % 300);
        config.gamma = std::vector<double>{0.0, 1.0, 1.5}[rng() % 3];
        config.samples = 50 + static_cast<int>(rng() % 100);
        config.seed = rng();
        config.quantiles = {0.1, 0.25, 0.5, 0.75, 0.9};
        const SampleSummary s = simulate_batch(config, 0, true);
        double lo = 1.0, hi = 0.0;
        for (double f : s.fractions) {
            REQUIRE(f >= 1.0 / config.d - 1e-12);
            REQUIRE(f <= 1.0);
            lo = std::min(lo, f);
            hi = std::max(hi, f);
        }
        REQUIRE(s.mean >= lo);
        REQUIRE(s.mean <= hi);
        for (std::size_t i = 1; i < s.quantile_values.size(); ++i)
            REQUIRE(s.quantile_values[i].second >= s.quantile_values[i - 1].second);
    }
}

TEST_CASE("config validation") {
    SimConfig config;
    config.quantiles = {0.5, 0.2};
    CHECK_THROWS_AS(config.validate(), std::domain_error);
    config.quantiles = {0.0};
    CHECK_THROWS_AS(config.validate(), std::domain_error);
    config.quantiles = {};
    config.samples = 0;
    CHECK_THROWS_AS(config.validate(), std::domain_error);
    config.samples = 1;
    config.gamma = -1.0;
    CHECK_THROWS_AS(config.validate(), std::domain_error);
}

TEST_CASE("both proportional samplers match the exact law") {
    // d = 2, n = 5: four states, each with exact probability 1/4
    const auto law = exact_state_distribution(2, 3);
    std::map<std::vector<long long>, std::size_t> index;
    std::size_t next_index = 0;
    for (const auto& [state, p] : law.probabilities) index[state] = next_index++;

    const int replicates = 100000;
    std::vector<long long> ball_counts(index.size(), 0);
    std::vector<long long> prefix_counts(index.size(), 0);
    for (int r = 0; r < replicates; ++r) {
        RandomSource src_a(derive_stream_seed(2024, r));
        ProportionalUrn a(2, 5);
        for (int t = 2; t < 5; ++t) a.step(src_a);
        ++ball_counts[index.at(a.counts())];

        RandomSource src_b(derive_stream_seed(4048, r));
        CountPrefixUrn b(2);
        for (int t = 2; t < 5; ++t) b.step(src_b);
        ++prefix_counts[index.at(b.counts())];
    }
    CHECK(chi_square_uniform(ball_counts).p_value > 0.001);
    CHECK(chi_square_uniform(prefix_counts).p_value > 0.001);
}

TEST_CASE("samplers agree on recoded decision traces") {
    // Fix a bin-decision sequence, recode each decision as a uniform draw
    // through each sampler's own decode map, and expect both to walk through
    // identical states.
    std::mt19937 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 4);
        const int additions = 1 + static_cast<int>(rng() % 12);
        ProportionalUrn balls(d);
        CountPrefixUrn prefix(d);
        for (int step = 0; step < additions; ++step) {
            REQUIRE(balls.counts() == prefix.counts());
            const long long total = balls.total();

            // exhaustive decode check: both maps send exactly counts[k]
            // draws to bin k, so the one-step laws coincide exactly
            std::vector<long long> from_balls(static_cast<std::size_t>(d), 0);
            std::vector<long long> from_prefix(static_cast<std::size_t>(d), 0);
            for (long long u = 0; u < total; ++u) {
                ++from_balls[static_cast<std::size_t>(balls.bin_of_ball(u))];
                ++from_prefix[static_cast<std::size_t>(prefix.pick_bin(u))];
            }
            REQUIRE(from_balls == balls.counts());
            REQUIRE(from_prefix == prefix.counts());

            // recode one decision for both samplers
            const int k = static_cast<int>(rng() % d);
            std::uint64_t ball_draw = 0;
            while (balls.bin_of_ball(ball_draw) != k) ++ball_draw;
            std::uint64_t prefix_draw = 0;
            for (int j = 0; j < k; ++j)
                prefix_draw += static_cast<std::uint64_t>(prefix.counts()[j]);
            ScriptedSource script_a{{ball_draw}};
            ScriptedSource script_b{{prefix_draw}};
            REQUIRE(balls.step(script_a) == k);
            REQUIRE(prefix.step(script_b) == k);
        }
        REQUIRE(balls.counts() == prefix.counts());
    }

    // at the all-ones state the two decode maps are literally identical
    ProportionalUrn balls(4);
    CountPrefixUrn prefix(4);
    for (std::uint64_t u = 0; u < 4; ++u)
        REQUIRE(balls.bin_of_ball(u) == prefix.pick_bin(u));
}

TEST_CASE("simulated states follow the uniform law at d=3, n=8") {
    std::map<std::vector<long long>, std::size_t> index;
    {
        SimplexEnumerator en(SimplexSpec{3, 8});
        std::size_t i = 0;
        while (const auto* v = en.next()) index[*v] = i++;
    }
    REQUIRE(index.size() == 21);
    std::vector<long long> observed(index.size(), 0);
    const int replicates = 100000;
    for (int r = 0; r < replicates; ++r)
        ++observed[index.at(run_single(3, 8, 1.0, derive_stream_seed(5150, r)).counts)];
    const auto res = chi_square_uniform(observed);
    CHECK(res.df == 20);
    CHECK(res.p_value > 0.001);
}

TEST_CASE("batch mean approaches the limiting mean at d=2") {
    SimConfig config;
    config.d = 2;
    config.n = 20000;
    config.samples = 10000;
    config.seed = 314159;
    const SampleSummary s = simulate_batch(config);
    CHECK(std::abs(s.mean - 0.75) < 0.01);
}

TEST_CASE("sample coefficient of variation near its peak") {
    SimConfig config;
    config.d = 10;
    config.n = 20000;
    config.samples = 10000;
    config.seed = 271828;
    const SampleSummary s = simulate_batch(config, 0, true);
    const double cv = sample_std(s.fractions, s.mean) / s.mean;
    CHECK(std::abs(cv - 0.27) < 0.02);
}

TEST_CASE("regime probes") {
    CHECK(regime_probe(1, 1.7, 1000, 10, 8) == 1.0);
    CHECK(regime_probe(2, 2.0, 100000, 100, 8) > 0.95);   // winner takes all
    CHECK(regime_probe(4, 0.5, 100000, 100, 8) < 0.35);   // egalitarian
}
