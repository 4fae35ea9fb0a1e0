#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

namespace alq::arith {

using u64 = std::uint64_t;

struct PrimePower {
    u64 prime = 0;
    unsigned exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Prime-power decomposition of a positive integer, primes strictly increasing.
// Inline storage: a 64-bit integer has at most 15 distinct prime factors.
class Factorization {
public:
    static constexpr std::size_t kCapacity = 15;

    Factorization() = default;

    u64 n() const { return n_; }
    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    std::span<const PrimePower> entries() const { return {entries_.data(), size_}; }
    const PrimePower& operator[](std::size_t i) const { return entries_[i]; }

    // Appends p^e; p must exceed every prime already present. Throws OverflowError
    // if the represented value no longer fits in 64 bits.
    void push(u64 p, unsigned e);
    // Raises the exponent of 2 by one (n -> 2n).
    void multiply_by_two();

    friend bool operator==(const Factorization& a, const Factorization& b) {
        if (a.n_ != b.n_ || a.size_ != b.size_) return false;
        for (std::size_t i = 0; i < a.size_; ++i)
            if (!(a.entries_[i] == b.entries_[i])) return false;
        return true;
    }

private:
    std::array<PrimePower, kCapacity> entries_{};
    std::size_t size_ = 0;
    u64 n_ = 1;
};

// Bounded work for the Pollard-rho stage, counted in modular multiplications.
struct Effort {
    u64 rho_iterations = 1'000'000;
};

// factorize() result: `factors` is complete iff `unresolved` is 1; otherwise
// `unresolved` is a composite cofactor the effort budget could not split and
// `factors` holds the part already found.
struct FactorResult {
    Factorization factors;
    u64 unresolved = 1;

    bool complete() const { return unresolved == 1; }
};

u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 base, u64 exp, u64 m);

// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime(u64 n);

FactorResult factorize(u64 n, Effort effort = {});
// Convenience wrapper; throws ResourceError when the cofactor stays unresolved.
Factorization factor(u64 n, Effort effort = {});

// Checked p^m; nullopt on overflow.
std::optional<u64> checked_pow(u64 p, unsigned m);
// 1 + p + ... + p^m, checked.
std::optional<u64> sigma_prime_power(u64 p, unsigned m);

// Exact sigma(n) from a factorization; throws OverflowError.
u64 sigma(const Factorization& f);
// s(n) = sigma(n) - n, with s(1) = 0.
u64 aliquot_sum(u64 n, Effort effort = {});
unsigned nu(const Factorization& f);

// sigma(n) by enumerating divisors up to sqrt(n); no factorization.
u64 sigma_oracle(u64 n);

bool is_square(u64 n);
bool is_square_or_twice_square(u64 n);

}  // namespace alq::arith
