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

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polya/errors.hpp"
#include "polya/rational.hpp"

namespace polya {

// Limiting moments of the heaviest-bin fraction of the critical (gamma = 1)
// Polya urn on d bins: M(m, d) = lim_n E[(max_k count_k / n)^m]. All three
// recurrences below produce the same exact rationals; they differ only in
// which previously computed entries they consume.
enum class Recurrence {
    MultiTerm,    // M(m,d) from M(0..m, d-1)
    TwoTerm,      // M(m,d) from M(m, d-1) and M(m-1, d)
    IteratedSum,  // M(m,d) from M(m-1, 1..d)
};

inline const char* to_string(Recurrence r) {
    switch (r) {
        case Recurrence::MultiTerm: return "multi-term";
        case Recurrence::TwoTerm: return "two-term";
        case Recurrence::IteratedSum: return "iterated-sum";
    }
    return "?";
}

/// Exact harmonic number: sum_{k=1}^{d} 1/k.
inline Rational harmonic(long d) {
    if (d < 1) throw std::domain_error("harmonic number needs d >= 1");
    Rational h = 0;
    for (long k = 1; k <= d; ++k) h += make_rational(1, k);
    return h;
}

/// Memoized table of the limiting moments M(m, d). Filling is bottom-up and
/// single-writer; once built, the table is immutable and may be shared
/// across threads.
class MomentTable {
public:
    static constexpr std::size_t kDefaultEntryCap = 1'000'000;

    explicit MomentTable(Recurrence rec = Recurrence::TwoTerm,
                         std::size_t entry_cap = kDefaultEntryCap)
        : rec_(rec), cap_(entry_cap) {}

    /// M(m, d), extending the stored rectangle on demand.
    const Rational& get(int m, int d) {
        ensure(m, d);
        return grid_[static_cast<std::size_t>(m)][static_cast<std::size_t>(d - 1)];
    }

    Recurrence recurrence() const { return rec_; }
    int max_m() const { return filled_m_; }
    int max_d() const { return filled_d_; }

    /// Stored entries, rows indexed by m, columns by d - 1.
    const std::vector<std::vector<Rational>>& entries() const { return grid_; }

private:
    const Rational& cell(int m, int d) const {
        return grid_[static_cast<std::size_t>(m)][static_cast<std::size_t>(d - 1)];
    }

    // m >= 1, d >= 2, every predecessor already stored. Factorial ratios are
    // carried incrementally so no factorial is ever materialized.
    Rational compute_cell(int m, int d) const {
        switch (rec_) {
            case Recurrence::MultiTerm: {
                // sum_{k=0}^{m} (d-1)/d^k * m!/(m-k)! * (m+d-k-2)!/(m+d-1)! * M(m-k, d-1)
                Rational coeff = make_rational(d - 1, m + d - 1);
                Rational acc = coeff * cell(m, d - 1);
                for (int k = 1; k <= m; ++k) {
                    coeff *= make_rational(m - k + 1,
                                           static_cast<long>(d) * (m + d - k - 1));
                    acc += coeff * cell(m - k, d - 1);
                }
                return acc;
            }
            case Recurrence::TwoTerm: {
                return make_rational(d - 1, m + d - 1) * cell(m, d - 1) +
                       make_rational(m, static_cast<long>(d) * (m + d - 1)) *
                           cell(m - 1, d);
            }
            case Recurrence::IteratedSum: {
                // m/(m+d-1) * sum_{j=1}^{d} (d-1)!/j! * (m+j-2)!/(m+d-2)! * M(m-1, j),
                // accumulated from j = d downward where the coefficient is 1/d.
                Rational coeff = make_rational(1, d);
                Rational acc = coeff * cell(m - 1, d);
                for (int j = d - 1; j >= 1; --j) {
                    coeff *= make_rational(j + 1, m + j - 1);
                    acc += coeff * cell(m - 1, j);
                }
                return make_rational(m, m + d - 1) * acc;
            }
        }
        throw std::logic_error("unknown recurrence");
    }

    void ensure(int m, int d) {
        if (m < 0) throw std::domain_error("moment order must be >= 0");
        if (d < 1) throw std::domain_error("bin count must be >= 1");
        if (m <= filled_m_ && d <= filled_d_) return;

        const int target_m = std::max(m, filled_m_);
        const int target_d = std::max(d, filled_d_);
        const std::size_t entries = (static_cast<std::size_t>(target_m) + 1) *
                                    static_cast<std::size_t>(target_d);
        if (entries > cap_) {
            throw resource_limit_error("moment table would need " +
                                       std::to_string(entries) +
                                       " entries, cap is " + std::to_string(cap_));
        }

        grid_.resize(static_cast<std::size_t>(target_m) + 1);
        for (auto& row : grid_) row.resize(static_cast<std::size_t>(target_d));
        for (int mm = 0; mm <= target_m; ++mm) {
            for (int dd = 1; dd <= target_d; ++dd) {
                if (mm <= filled_m_ && dd <= filled_d_) continue;
                grid_[static_cast<std::size_t>(mm)][static_cast<std::size_t>(dd - 1)] =
                    (mm == 0 || dd == 1) ? Rational(1) : compute_cell(mm, dd);
            }
        }
        filled_m_ = target_m;
        filled_d_ = target_d;
    }

    Recurrence rec_;
    std::size_t cap_;
    std::vector<std::vector<Rational>> grid_;
    int filled_m_ = -1;
    int filled_d_ = 0;
};

/// One moment from a cold table.
inline Rational limiting_moment(int m, int d,
                                Recurrence rec = Recurrence::TwoTerm) {
    MomentTable table(rec);
    return table.get(m, d);
}

/// Fully populated table for 0 <= m <= m_max, 1 <= d <= d_max.
inline MomentTable moment_table(int m_max, int d_max, Recurrence rec,
                                std::size_t entry_cap = MomentTable::kDefaultEntryCap) {
    MomentTable table(rec, entry_cap);
    table.get(m_max, d_max);
    return table;
}

/// Limiting mean of the heaviest-bin fraction: harmonic(d) / d.
inline Rational mean_fraction(int d) {
    if (d < 1) throw std::domain_error("bin count must be >= 1");
    return harmonic(d) / d;
}

/// (log d / d, (log d + 1) / d); the limiting mean always lies between them.
inline std::pair<double, double> mean_bounds(int d) {
    if (d < 1) throw std::domain_error("bin count must be >= 1");
    const double ln = std::log(static_cast<double>(d));
    return {ln / d, (ln + 1.0) / d};
}

/// Limiting second moment: 2/(d(d+1)) * sum_{j=1}^{d} harmonic(j)/j.
inline Rational second_moment(int d) {
    if (d < 1) throw std::domain_error("bin count must be >= 1");
    Rational h = 0, acc = 0;
    for (long j = 1; j <= d; ++j) {
        h += make_rational(1, j);
        acc += h / j;
    }
    return make_rational(2, static_cast<long>(d) * (d + 1)) * acc;
}

/// Standard deviation over mean of the limiting heaviest-bin fraction.
/// The variance is formed in exact arithmetic; floats appear only in the
/// final square root.
inline double coefficient_of_variation(int d) {
    const Rational m1 = mean_fraction(d);
    const Rational variance = second_moment(d) - m1 * m1;
    return std::sqrt(to_double(variance)) / to_double(m1);
}

}  // namespace polya
