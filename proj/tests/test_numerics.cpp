#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "doctest.h"

#include "alq/errors.hpp"
#include "alq/numerics.hpp"

using namespace alq::numerics;

TEST_CASE("empty sum") {
    const std::vector<double> none;
    const auto r = compensated_sum(none);
    CHECK(r.value == 0.0);
    CHECK(r.error_radius == 0.0);
}

TEST_CASE("cancellation") {
    const std::vector<double> xs{1.0, -1.0};
    const auto r = compensated_sum(xs);
    CHECK(r.value == 0.0);
    CHECK(r.error_radius >= 0.0);
    CHECK(r.error_radius <= 4 * kEps);
}

TEST_CASE("million copies of 0.1 against an exact rational oracle") {
    std::vector<double> xs(1'000'000, 0.1);
    const auto r = compensated_sum(xs);
    mpq_class exact(0.1);
    exact *= 1'000'000;
    const mpq_class diff = abs(mpq_class(r.value) - exact);
    CHECK(diff.get_d() < 1e-9);
    CHECK(diff.get_d() <= r.error_radius);
    CHECK(std::abs(r.value - 100000.0) < 1e-9);
}

TEST_CASE("non-finite terms are rejected") {
    const std::vector<double> xs{1.0, NAN, 2.0};
    CHECK_THROWS_AS(compensated_sum(xs), alq::ParameterError);
    const std::vector<double> ys{INFINITY};
    CHECK_THROWS_AS(compensated_sum(ys), alq::ParameterError);
}

TEST_CASE("radius covers the exact error on ill-conditioned data") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> xs;
        mpq_class exact = 0;
        for (int i = 0; i < 2000; ++i) {
            const double x = std::ldexp(u(rng), static_cast<int>(rng() % 80) - 40);
            xs.push_back(x);
            xs.push_back(-x * (1 + 1e-3 * u(rng)));
        }
        for (double x : xs) exact += mpq_class(x);
        const auto r = compensated_sum(xs);
        const mpq_class err = abs(mpq_class(r.value) - exact);
        CHECK(err <= mpq_class(r.error_radius));
    }
}

TEST_CASE("certified combine") {
    const auto s = CertifiedValue{1.0, 0.0} + CertifiedValue{2.0, 0.0};
    CHECK(s.value == 3.0);
    CHECK(s.error_radius <= kEps);

    const auto d = CertifiedValue{0.5, 1e-9} - CertifiedValue{0.2, 1e-9};
    CHECK(std::abs(d.value - 0.3) < 1e-15);
    CHECK(d.error_radius >= 2e-9);

    const auto lo = d.lower(), hi = d.upper();
    CHECK(lo < 0.3 - 2e-9 + 1e-15);
    CHECK(hi > 0.3 + 2e-9 - 1e-15);
}

TEST_CASE("combine keeps the rounding residual") {
    // 1 + 2^-60 is not representable; the lost part must land in the radius.
    const auto r = certified_combine({1.0, 0.0}, {std::ldexp(1.0, -60), 0.0}, Combine::add);
    CHECK(r.value == 1.0);
    CHECK(r.error_radius >= std::ldexp(1.0, -60));
}

TEST_CASE("block sum of 1..100") {
    const BlockSumPlan plan{1, 100, 10};
    CHECK(plan.block_count() == 10);
    const auto r = deterministic_block_reduce(plan, [](std::int64_t n) { return double(n); });
    CHECK(r.value == 5050.0);
}

TEST_CASE("worker count does not change the result") {
    const BlockSumPlan plan{1, 200'000, 997};
    auto term = [](std::int64_t n) { return std::sin(double(n)) / double(n); };
    const auto one = deterministic_block_reduce(plan, term, 1);
    for (unsigned w : {2u, 3u, 8u}) {
        const auto many = deterministic_block_reduce(plan, term, w);
        CHECK(many.value == one.value);
        CHECK(many.error_radius == one.error_radius);
    }
}

TEST_CASE("value is stable under reordering and block size") {
    std::vector<double> xs;
    for (int n = 1; n <= 100'000; ++n) xs.push_back(1.0 / n);
    const auto fwd = compensated_sum(xs);
    std::reverse(xs.begin(), xs.end());
    const auto rev = compensated_sum(xs);
    CHECK(std::abs(fwd.value - rev.value) <= fwd.error_radius + rev.error_radius);

    auto term = [](std::int64_t n) { return 1.0 / double(n); };
    for (std::int64_t b : {1'000, 7'777, 100'000}) {
        const auto r = deterministic_block_reduce({1, 100'000, b}, term);
        CHECK(std::abs(r.value - fwd.value) <= r.error_radius + fwd.error_radius);
    }
}

TEST_CASE("block plan edges") {
    const BlockSumPlan plan{5, 27, 10};
    CHECK(plan.block_count() == 3);
    CHECK(plan.block(0) == std::pair<std::int64_t, std::int64_t>{5, 14});
    CHECK(plan.block(2) == std::pair<std::int64_t, std::int64_t>{25, 27});
    const BlockSumPlan empty{1, 0, 10};
    CHECK(empty.block_count() == 0);
    CHECK(deterministic_block_reduce(empty, [](std::int64_t) { return 1.0; }).value == 0.0);
}

TEST_CASE("rounding helpers move outward") {
    CHECK(round_up(1.0) > 1.0);
    CHECK(round_down(1.0) < 1.0);
    const CertifiedValue v{2.0, 0.5};
    CHECK(v.lower() <= 1.5);
    CHECK(v.upper() >= 2.5);
}

TEST_CASE("scale, divide and multiply enclose the exact value") {
    const CertifiedValue a{1.0 / 3.0, 1e-17};
    const auto q = divide(a, 7.0);
    const mpq_class exact = mpq_class(a.value) / 7;
    CHECK(abs(mpq_class(q.value) - exact) <= mpq_class(q.error_radius));
    const auto s = scale(a, 3.0);
    CHECK(std::abs(s.value - 1.0) <= s.error_radius + 1e-16);
    const auto m = multiply(a, CertifiedValue{3.0, 0.0});
    CHECK(abs(mpq_class(m.value) - mpq_class(a.value) * 3) <= mpq_class(m.error_radius));
}
