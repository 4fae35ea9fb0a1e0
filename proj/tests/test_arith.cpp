#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"

#include "alq/arith.hpp"
#include "alq/errors.hpp"

using namespace alq::arith;

namespace {

bool trial_division_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

u64 divisor_sum(u64 n) {
    u64 s = 0;
    for (u64 d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        s += d;
        if (d * d != n) s += n / d;
    }
    return s;
}

u64 multiply_back(const Factorization& f) {
    u64 n = 1;
    for (const auto& pp : f.entries())
        for (unsigned i = 0; i < pp.exponent; ++i) n *= pp.prime;
    return n;
}

u64 random_prime(std::mt19937_64& rng, u64 lo, u64 hi) {
    std::uniform_int_distribution<u64> d(lo, hi);
    for (;;) {
        const u64 c = d(rng) | 1;
        if (trial_division_prime(c)) return c;
    }
}

}  // namespace

TEST_CASE("is_prime small cases") {
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(1));
    CHECK(is_prime(2));
    CHECK(is_prime(97));
    CHECK_FALSE(is_prime(91));
    for (u64 n = 0; n < 20'000; ++n) CHECK(is_prime(n) == trial_division_prime(n));
}

TEST_CASE("is_prime near 10^12 against trial division") {
    for (u64 n = 1'000'000'000'000ull; n < 1'000'000'000'000ull + 200; ++n)
        CHECK(is_prime(n) == trial_division_prime(n));
    CHECK(is_prime(1'000'000'000'039ull));
}

TEST_CASE("is_prime on strong pseudoprimes and large values") {
    CHECK_FALSE(is_prime(3'215'031'751ull));          // spsp to bases 2,3,5,7
    CHECK_FALSE(is_prime(3'825'123'056'546'413'051ull));  // spsp to bases up to 23
    CHECK(is_prime(18'446'744'073'709'551'557ull));   // largest 64-bit prime
    CHECK_FALSE(is_prime(18'446'744'073'709'551'615ull));
}

TEST_CASE("factorize 360 and 1") {
    const auto f = factor(360);
    REQUIRE(f.size() == 3);
    CHECK(f[0] == PrimePower{2, 3});
    CHECK(f[1] == PrimePower{3, 2});
    CHECK(f[2] == PrimePower{5, 1});
    CHECK(factor(1).empty());
    CHECK_THROWS_AS(factor(0), alq::ParameterError);
}

TEST_CASE("semiprimes of two 10-digit primes") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 5; ++i) {
        const u64 p = random_prime(rng, 1'000'000'000ull, 4'000'000'000ull);
        const u64 q = random_prime(rng, 1'000'000'000ull, 4'000'000'000ull);
        const auto f = factor(p * q);
        CHECK(multiply_back(f) == p * q);
        for (const auto& pp : f.entries()) CHECK(trial_division_prime(pp.prime));
        CHECK(f[0].prime == std::min(p, q));
    }
}

TEST_CASE("factorization round trip on random values") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        const u64 n = rng() >> (rng() % 40);
        if (n == 0) continue;
        const auto f = factor(n);
        CHECK(multiply_back(f) == n);
        for (std::size_t k = 1; k < f.size(); ++k) CHECK(f[k - 1].prime < f[k].prime);
        for (const auto& pp : f.entries()) CHECK(is_prime(pp.prime));
    }
}

TEST_CASE("effort exhaustion is reported, not guessed") {
    const u64 p = 4'294'967'291ull, q = 4'294'967'279ull;
    const auto r = factorize(p * q, Effort{1});
    CHECK_FALSE(r.complete());
    CHECK(multiply_back(r.factors) * r.unresolved == p * q);
    CHECK_THROWS_AS(factor(p * q, Effort{1}), alq::ResourceError);
}

TEST_CASE("sigma examples") {
    CHECK(sigma(factor(12)) == 28);
    CHECK(sigma(factor(1)) == 1);
    CHECK(sigma(factor(32)) == 63);
    CHECK(sigma(factor(28)) == 56);
    CHECK(sigma_prime_power(2, 5) == 63u);
    CHECK_FALSE(sigma_prime_power(2, 64).has_value());
    CHECK(sigma(factor(1ull << 63)) == 18'446'744'073'709'551'615ull);
    CHECK_THROWS_AS(sigma(factor(3ull << 62)), alq::OverflowError);
}

TEST_CASE("aliquot_sum examples") {
    CHECK(aliquot_sum(1) == 0);
    CHECK(aliquot_sum(97) == 1);
    CHECK(aliquot_sum(1'000'000'007ull) == 1);
    CHECK(aliquot_sum(28) == 28);
    CHECK(aliquot_sum(12) == 16);
}

TEST_CASE("nu examples") {
    CHECK(nu(factor(1)) == 0);
    CHECK(nu(factor(12)) == 2);
    CHECK(nu(factor(30)) == 3);
}

TEST_CASE("sigma oracle equivalence up to 10^4") {
    for (u64 n = 1; n <= 10'000; ++n) {
        CHECK(sigma(factor(n)) == divisor_sum(n));
        CHECK(sigma_oracle(n) == divisor_sum(n));
    }
}

TEST_CASE("multiplicativity on coprime pairs") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<u64> d(1, 100'000);
    int checked = 0;
    while (checked < 500) {
        const u64 a = d(rng), b = d(rng);
        if (std::gcd(a, b) != 1) continue;
        CHECK(sigma(factor(a * b)) == sigma(factor(a)) * sigma(factor(b)));
        ++checked;
    }
}

TEST_CASE("even n has sigma(n)/n >= 3/2") {
    for (u64 n = 2; n <= 20'000; n += 2) CHECK(2 * sigma(factor(n)) >= 3 * n);
}

TEST_CASE("perfect numbers up to 10^4") {
    std::vector<u64> found;
    for (u64 n = 2; n <= 10'000; ++n)
        if (aliquot_sum(n) == n) found.push_back(n);
    CHECK(found == std::vector<u64>{6, 28, 496, 8128});
}

TEST_CASE("square helpers") {
    CHECK(is_square(0));
    CHECK(is_square(1));
    CHECK(is_square(4'294'967'295ull * 4'294'967'295ull));
    CHECK_FALSE(is_square(4'294'967'295ull * 4'294'967'295ull + 1));
    CHECK_FALSE(is_square(18'446'744'073'709'551'615ull));
    CHECK(is_square_or_twice_square(18));
    CHECK(is_square_or_twice_square(16));
    CHECK_FALSE(is_square_or_twice_square(12));
}

TEST_CASE("factorization container invariants") {
    Factorization f;
    f.push(3, 2);
    CHECK_THROWS_AS(f.push(3, 1), std::logic_error);
    f.multiply_by_two();
    CHECK(f.n() == 18);
    CHECK(f[0] == PrimePower{2, 1});
    f.multiply_by_two();
    CHECK(f.n() == 36);
    CHECK(f[0] == PrimePower{2, 2});
}
