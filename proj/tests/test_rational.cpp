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

#include <random>

#include "polya/combinatorics.hpp"
#include "polya/moments.hpp"
#include "polya/rational.hpp"

using namespace polya;

TEST_CASE("make_rational canonicalizes") {
    CHECK(make_rational(2, 4) == make_rational(1, 2));
    CHECK(make_rational(-2, -4) == make_rational(1, 2));
    CHECK(make_rational(3, -6) == make_rational(-1, 2));
    CHECK(make_rational(0, 7) == 0);
    CHECK_THROWS_AS(make_rational(1, 0), std::domain_error);
}

TEST_CASE("rationals stay in lowest terms with positive denominator") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<long> num(-999, 999);
    std::uniform_int_distribution<long> den(1, 999);
    Rational acc = 0;
    for (int i = 0; i < 500; ++i) {
        const Rational r = make_rational(num(rng), den(rng));
        acc += r;
        acc *= make_rational(num(rng) | 1, den(rng));
        REQUIRE(acc.get_den() > 0);
        BigInt g;
        mpz_gcd(g.get_mpz_t(), acc.get_num().get_mpz_t(), acc.get_den().get_mpz_t());
        REQUIRE(g == 1);
    }
}

TEST_CASE("string renderings") {
    CHECK(to_fraction_string(make_rational(3, 4)) == "3/4");
    CHECK(to_fraction_string(Rational(1)) == "1");
    CHECK(to_fraction_string(make_rational(-11, 18)) == "-11/18");
    CHECK(to_decimal_string(make_rational(7, 12)) == "0.583333333333");
    CHECK(to_decimal_string(Rational(1)) == "1");
    CHECK(to_decimal_string(make_rational(3, 4)) == "0.75");
}

TEST_CASE("integer and rational powers") {
    CHECK(ipow(BigInt(3), 0) == 1);
    CHECK(ipow(BigInt(2), 20) == 1048576);
    CHECK(rational_pow(make_rational(2, 3), 3) == make_rational(8, 27));
    CHECK(to_bigint(1'000'000'007LL) == BigInt(1000000007L));
}

TEST_CASE("harmonic numbers") {
    CHECK(harmonic(1) == 1);
    CHECK(harmonic(2) == make_rational(3, 2));
    CHECK(harmonic(4) == make_rational(25, 12));
    CHECK_THROWS_AS(harmonic(0), std::domain_error);

    // difference property: H_d - H_{d-1} = 1/d
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> pick(2, 200);
    for (int i = 0; i < 20; ++i) {
        const long d = pick(rng);
        REQUIRE(harmonic(d) - harmonic(d - 1) == make_rational(1, d));
    }
}

TEST_CASE("binomial coefficients") {
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(4, 1) == 4);
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(35, 5) == 324632);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(3, -1) == 0);
    CHECK_THROWS_AS(binomial(-2, 1), std::domain_error);

    // symmetry and the Pascal identity
    std::mt19937 rng(11);
    std::uniform_int_distribution<long> npick(1, 80);
    for (int i = 0; i < 50; ++i) {
        const long n = npick(rng);
        std::uniform_int_distribution<long> kpick(0, n);
        const long k = kpick(rng);
        REQUIRE(binomial(n, k) == binomial(n, n - k));
        REQUIRE(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
    }
}
