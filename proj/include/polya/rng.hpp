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

#include <concepts>
#include <cstdint>
#include <random>

namespace polya {

// Replicate seeding is counter-based: replicate r of a batch draws its own
// generator seed from (seed, r) alone, so scheduling and worker count can
// never change results. The generator identifiers below are recorded in run
// manifests because exact sample values depend on them.
inline constexpr char kGeneratorId[] = "mt19937_64";
inline constexpr char kSeedMixId[] = "splitmix64";

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Element r of the splitmix64 stream rooted at seed.
inline constexpr std::uint64_t derive_stream_seed(std::uint64_t seed,
                                                  std::uint64_t r) {
    return splitmix64(seed + (r + 1) * 0x9E3779B97F4A7C15ull);
}

/// Anything the samplers draw randomness from.
template <class S>
concept UniformSource = requires(S s, std::uint64_t bound) {
    { s.next_below(bound) } -> std::convertible_to<std::uint64_t>;
    { s.next_unit() } -> std::convertible_to<double>;
};

/// mt19937_64 behind an unbiased bounded draw (multiply-shift with
/// rejection) and a 53-bit unit-interval draw.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t stream_seed) : gen_(stream_seed) {}

    /// Uniform integer in [0, bound), bound >= 1.
    std::uint64_t next_below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(gen_()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(gen_()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1).
    double next_unit() { return (gen_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 gen_;
};

}  // namespace polya
