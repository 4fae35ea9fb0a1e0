#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>
#include "json.hpp"

#include "alq/arith.hpp"

namespace alq::aliquot {

using BigInt = mpz_class;

enum class Outcome { terminates_at_1, cycle, effort_exhausted, step_limit_reached };

std::string to_string(Outcome o);

struct Classification {
    Outcome outcome = Outcome::step_limit_reached;
    std::size_t cycle_length = 0;  // cycle only
    std::size_t cycle_entry = 0;   // cycle only: terms[entry + length] == terms[entry]
};

struct TrajectoryRecord {
    BigInt start;
    std::vector<BigInt> terms;
    Classification classification;
    // Indices k (term_k > 1) whose term is a square or twice a square: the only
    // places where s can change parity.
    std::vector<std::size_t> parity_events;
};

struct BigFactor {
    BigInt prime;
    unsigned exponent;
};

// Factorization of an arbitrary-size integer. `complete` is false when the
// Pollard-rho budget ran out on some composite cofactor. Primes above 64 bits
// are certified by GMP's BPSW + Miller-Rabin test.
struct BigFactorResult {
    std::vector<BigFactor> factors;
    bool complete = true;
};

BigFactorResult factorize_big(const BigInt& n, arith::Effort effort = {});

// s(n) for n >= 1; nullopt-equivalent signalled by returning false.
bool aliquot_sum_big(const BigInt& n, BigInt& out, arith::Effort effort = {});

TrajectoryRecord trace(const BigInt& start, std::size_t max_steps, arith::Effort effort = {});

nlohmann::json to_json(const TrajectoryRecord& r);

}  // namespace alq::aliquot
