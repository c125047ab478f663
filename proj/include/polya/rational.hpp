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

#include <gmpxx.h>

#include <cstdio>
#include <stdexcept>
#include <string>

namespace polya {

// Exact arithmetic used everywhere below: arbitrary-precision integers and
// rationals in canonical form (lowest terms, positive denominator). GMP
// keeps results canonical as long as inputs are, so construction goes
// through make_rational.
using BigInt = mpz_class;
using Rational = mpq_class;

// gmpxx has no long long constructors; long is 64-bit on every platform we
// build for.
static_assert(sizeof(long) >= 8, "64-bit long required");

inline BigInt to_bigint(long long v) { return BigInt(static_cast<long>(v)); }

inline Rational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational make_rational(long num, long den) {
    return make_rational(BigInt(num), BigInt(den));
}

inline BigInt ipow(const BigInt& base, unsigned long exp) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

inline Rational rational_pow(const Rational& base, unsigned long exp) {
    return make_rational(ipow(base.get_num(), exp), ipow(base.get_den(), exp));
}

inline double to_double(const Rational& r) { return r.get_d(); }

/// "p/q" when the denominator is not 1, plain "p" otherwise.
inline std::string to_fraction_string(const Rational& r) { return r.get_str(); }

/// Decimal rendering with the given number of significant digits.
inline std::string to_decimal_string(const Rational& r, int significant = 12) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant, r.get_d());
    return buf;
}

}  // namespace polya
