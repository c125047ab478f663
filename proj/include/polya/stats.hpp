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

#include <boost/math/distributions/chi_squared.hpp>

#include <stdexcept>
#include <vector>

namespace polya {

struct ChiSquareResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};

/// Goodness of fit of observed category counts against the uniform law.
inline ChiSquareResult chi_square_uniform(const std::vector<long long>& observed) {
    if (observed.size() < 2)
        throw std::domain_error("chi-square needs at least two categories");
    long long n = 0;
    for (long long o : observed) n += o;
    if (n <= 0) throw std::domain_error("chi-square needs a nonempty sample");

    const double expected =
        static_cast<double>(n) / static_cast<double>(observed.size());
    double stat = 0.0;
    for (long long o : observed) {
        const double diff = static_cast<double>(o) - expected;
        stat += diff * diff / expected;
    }
    const int df = static_cast<int>(observed.size()) - 1;
    const double p =
        boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), stat));
    return ChiSquareResult{stat, df, p};
}

/// Upper critical value: reject uniformity at the given significance when
/// the statistic exceeds this.
inline double chi_square_critical(int df, double significance) {
    return boost::math::quantile(boost::math::chi_squared(df), 1.0 - significance);
}

}  // namespace polya
