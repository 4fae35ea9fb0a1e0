#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"

#include "alq/aliquot.hpp"
#include "alq/arith.hpp"

using namespace alq::aliquot;

namespace {

std::vector<std::string> as_strings(const TrajectoryRecord& r) {
    std::vector<std::string> out;
    for (const auto& t : r.terms) out.push_back(t.get_str());
    return out;
}

}  // namespace

TEST_CASE("12 terminates through 16 and 9") {
    const auto r = trace(12, 100);
    CHECK(as_strings(r) == std::vector<std::string>{"12", "16", "15", "9", "4", "3", "1"});
    CHECK(r.classification.outcome == Outcome::terminates_at_1);
    // indices of 16, 9 and 4: the terms after which the parity flips
    CHECK(r.parity_events == std::vector<std::size_t>{1, 3, 4});
}

TEST_CASE("6 is a fixed point") {
    const auto r = trace(6, 10);
    CHECK(r.classification.outcome == Outcome::cycle);
    CHECK(r.classification.cycle_length == 1);
    CHECK(r.classification.cycle_entry == 0);
}

TEST_CASE("220 and 284 are amicable") {
    const auto r = trace(220, 10);
    CHECK(as_strings(r) == std::vector<std::string>{"220", "284", "220"});
    CHECK(r.classification.outcome == Outcome::cycle);
    CHECK(r.classification.cycle_length == 2);
    const auto r2 = trace(1184, 10);
    CHECK(as_strings(r2) == std::vector<std::string>{"1184", "1210", "1184"});
}

TEST_CASE("25 falls into the perfect number 6") {
    const auto r = trace(25, 10);
    CHECK(as_strings(r) == std::vector<std::string>{"25", "6", "6"});
    CHECK(r.classification.outcome == Outcome::cycle);
    CHECK(r.classification.cycle_entry == 1);
    CHECK(r.classification.cycle_length == 1);
    CHECK(r.parity_events == std::vector<std::size_t>{0});
}

TEST_CASE("perfect numbers are fixed points") {
    for (unsigned long n : {6ul, 28ul, 496ul, 8128ul, 33550336ul}) {
        const auto r = trace(BigInt(n), 5);
        CHECK(r.classification.outcome == Outcome::cycle);
        CHECK(r.classification.cycle_length == 1);
    }
    const auto big = trace(BigInt("2305843008139952128"), 3);
    CHECK(big.classification.cycle_length == 1);
}

TEST_CASE("sociable cycle of length 5") {
    const auto r = trace(12496, 20);
    CHECK(r.classification.outcome == Outcome::cycle);
    CHECK(r.classification.cycle_length == 5);
}

TEST_CASE("step limit") {
    const auto r = trace(276, 5);
    CHECK(r.classification.outcome == Outcome::step_limit_reached);
    CHECK(r.terms.size() == 6);
    CHECK(r.terms[1] == 396);
}

TEST_CASE("sequences beyond 64 bits") {
    const auto r = trace(276, 200);
    CHECK(r.classification.outcome == Outcome::step_limit_reached);
    const BigInt limit = BigInt(1) << 64;
    CHECK(*std::max_element(r.terms.begin(), r.terms.end()) > limit);
    for (std::size_t k = 0; k + 1 < r.terms.size(); ++k) {
        if (r.terms[k] < (BigInt(1) << 60)) {
            CHECK(BigInt(std::to_string(alq::arith::aliquot_sum(std::stoull(r.terms[k].get_str())))) ==
                  r.terms[k + 1]);
        }
    }
}

TEST_CASE("big factorization and sum") {
    BigInt p, q;
    mpz_nextprime(p.get_mpz_t(), BigInt(1'000'000'000).get_mpz_t());
    mpz_nextprime(q.get_mpz_t(), BigInt(BigInt(1) << 70).get_mpz_t());
    const auto f = factorize_big(p * q);
    REQUIRE(f.complete);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].prime == p);
    CHECK(f.factors[1].prime == q);
    BigInt s;
    REQUIRE(aliquot_sum_big(p * q, s));
    CHECK(s == p + q + 1);
}

TEST_CASE("parity flips exactly at squares and twice squares") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<unsigned long> d(1, 5'000'000);
    for (int i = 0; i < 1000; ++i) {
        const BigInt start(2 * d(rng));
        const auto r = trace(start, 30);
        const std::set<std::size_t> events(r.parity_events.begin(), r.parity_events.end());
        for (std::size_t k = 0; k + 1 < r.terms.size(); ++k) {
            if (r.terms[k] == 1) break;
            const bool flips = mpz_odd_p(r.terms[k].get_mpz_t()) != mpz_odd_p(r.terms[k + 1].get_mpz_t());
            CHECK(flips == (events.count(k) == 1));
        }
    }
}

TEST_CASE("json keeps integers exact") {
    const auto j = to_json(trace(BigInt("100000000000000000000000"), 1));
    CHECK(j["start"] == "100000000000000000000000");
    CHECK(j["terms"].size() == 2);
    CHECK(j["classification"]["kind"] == "step_limit_reached");
    const auto c = to_json(trace(220, 5));
    CHECK(c["classification"]["length"] == 2);
}
