#pragma once

#include <cstdint>

#include "json.hpp"

#include "alq/numerics.hpp"

namespace alq::alpha {

struct AlphaParams {
    std::uint64_t N = 1'000'000;  // odd primes p <= N are summed explicitly
    unsigned L = 15;              // depth of the p = 2 series
    unsigned M = 15;              // depth of each odd-prime series

    void validate() const;  // N > 2, L > 1, M > 1
};

struct AlphaOptions {
    unsigned workers = 1;
    std::uint64_t block_size = 10'000'000;  // integers per prime block
};

struct AlphaResult {
    AlphaParams params;
    numerics::CertifiedValue sums;
    double tail_total = 0.0;   // 2 A(2,L) + sum_{3<=p<=N} A(p,M) + 1/N
    double upper_bound = 0.0;  // sums.upper() + tail_total, rounded up
    std::uint64_t prime_count = 0;
};

// (1/p^m) log((1 + p + ... + p^m) / (p + ... + p^m)), via log1p.
double alpha_term(std::uint64_t p, unsigned m);

// Bound on the series tail beyond depth M: p/(p-1) * p^(-2(M+1)).
double tail_A(std::uint64_t p, unsigned M);

// 2 alpha(2) truncated at depth L; its truncation tail is at most 2 A(2,L).
numerics::CertifiedValue alpha_two_part(unsigned L);

// alpha(p) = (1 - 1/p) sum_{m>=1} p^(-m) log(1 + 1/p + ... + p^(-m)) truncated
// at `depth`; independent route used to check alpha_term.
double alpha_prime_series(std::uint64_t p, unsigned depth);

AlphaResult alpha_upper_bound(const AlphaParams& params, const AlphaOptions& opt = {});

nlohmann::json to_json(const AlphaResult& r);

}  // namespace alq::alpha
