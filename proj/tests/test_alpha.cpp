#include <cmath>

#include "doctest.h"

#include "alq/alpha.hpp"
#include "alq/errors.hpp"
#include "alq/primes.hpp"

using namespace alq::alpha;

TEST_CASE("alpha_term examples") {
    CHECK(alpha_term(2, 1) == doctest::Approx(0.5 * std::log(1.5)).epsilon(1e-15));
    CHECK(std::abs(alpha_term(2, 1) - 0.2027325541) < 1e-10);
    CHECK(alpha_term(2, 2) == doctest::Approx(0.25 * std::log(7.0 / 6.0)).epsilon(1e-15));
    for (std::uint64_t p = 2; p <= 100; ++p) {
        if (!alq::primes::count_primes(p, p)) continue;
        for (unsigned m = 1; m <= 10; ++m) {
            const double pm = std::pow(double(p), m);
            CHECK(alpha_term(p, m) <= (1 / pm) * (1 / pm) * (1 + 1e-12));
        }
    }
}

TEST_CASE("tail_A examples") {
    CHECK(tail_A(2, 15) == doctest::Approx(2 * std::ldexp(1.0, -32)).epsilon(1e-14));
    CHECK(std::abs(tail_A(2, 15) - 4.6566e-10) < 1e-14);
    CHECK(std::abs(2 * tail_A(2, 15) - 9.3132e-10) < 1e-14);
    CHECK(tail_A(3, 15) == doctest::Approx(1.5 * std::pow(3.0, -32)).epsilon(1e-14));
}

TEST_CASE("tail_A dominates the truncated series") {
    for (std::uint64_t p = 2; p <= 100; ++p) {
        if (!alq::primes::count_primes(p, p)) continue;
        for (unsigned M : {2u, 5u, 15u}) {
            double rest = 0;
            for (unsigned m = M + 1; m <= 60; ++m) rest += alpha_term(p, m);
            CHECK(rest <= tail_A(p, M));
        }
    }
}

TEST_CASE("p = 2 part converges within its tail") {
    const auto deep = alpha_two_part(60);
    const auto l15 = alpha_two_part(15);
    CHECK(deep.value - l15.value <= std::ldexp(1.0, -30));
    CHECK(deep.value - l15.value >= 0);
    // limit of the rearranged form: 2 sum_m (1/2^m) log(1 + 1/2 + ... + 1/2^m)
    double limit = 0;
    for (unsigned m = 1; m <= 60; ++m) limit += std::ldexp(1.0, -int(m)) * std::log(2 - std::ldexp(1.0, -int(m)));
    CHECK(std::abs(deep.value - limit) < 1e-15);
}

TEST_CASE("the two forms of alpha(p) agree") {
    for (std::uint64_t p = 2; p <= 100; ++p) {
        if (!alq::primes::count_primes(p, p)) continue;
        double direct = 0;
        for (unsigned m = 1; m <= 60; ++m) direct += alpha_term(p, m);
        CHECK(std::abs(direct - alpha_prime_series(p, 60)) < 1e-14);
    }
}

TEST_CASE("sum over all primes is about 0.4457") {
    double A = 0;
    alq::primes::for_each_prime(2, 1'000'000, [&](std::uint64_t p) { A += alpha_prime_series(p, 15); });
    CHECK(std::abs(A - 0.4457) < 2e-5);
}

TEST_CASE("table values for N = 10^4 and 10^6") {
    const auto r4 = alpha_upper_bound({10'000, 15, 15});
    CHECK(std::abs(r4.sums.value - 0.6983072233) < 1e-9);
    CHECK(r4.tail_total == doctest::Approx(1.0000093132e-4).epsilon(1e-9));
    const auto r6 = alpha_upper_bound({1'000'000, 15, 15});
    CHECK(std::abs(r6.sums.value - 0.6983169710) < 1e-9);
    CHECK(r6.tail_total == doctest::Approx(1.0009313233e-6).epsilon(1e-9));
    CHECK(r6.prime_count == 78498);
    CHECK(r6.upper_bound >= r6.sums.upper() + r6.tail_total);
}

TEST_CASE("upper bound is monotone in N") {
    double prev = 1;
    for (std::uint64_t N : {1'000ull, 10'000ull, 100'000ull, 1'000'000ull}) {
        const auto r = alpha_upper_bound({N, 15, 15});
        CHECK(r.upper_bound <= prev + 1e-15);
        prev = r.upper_bound;
    }
}

TEST_CASE("worker count and block size do not change the result") {
    const auto a = alpha_upper_bound({300'000, 15, 15}, {1, 65'536});
    const auto b = alpha_upper_bound({300'000, 15, 15}, {4, 65'536});
    CHECK(a.sums == b.sums);
    CHECK(a.upper_bound == b.upper_bound);
    const auto c = alpha_upper_bound({300'000, 15, 15}, {1, 10'000'000});
    CHECK(std::abs(c.sums.value - a.sums.value) <= c.sums.error_radius + a.sums.error_radius);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(alpha_upper_bound({2, 15, 15}), alq::ParameterError);
    CHECK_THROWS_AS(alpha_upper_bound({100, 1, 15}), alq::ParameterError);
    CHECK_THROWS_AS(alpha_upper_bound({100, 15, 0}), alq::ParameterError);
}

TEST_CASE("json echoes parameters") {
    const auto j = to_json(alpha_upper_bound({1000, 12, 13}));
    CHECK(j["params"]["N"] == 1000);
    CHECK(j["params"]["L"] == 12);
    CHECK(j["params"]["M"] == 13);
}
