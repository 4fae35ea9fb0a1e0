#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "alq/arith.hpp"

namespace alq::primes {

using arith::u64;

inline constexpr u64 kMaxSieveBound = 10'000'000'000ull;
inline constexpr std::size_t kDefaultPrimeSegment = std::size_t{1} << 20;
inline constexpr std::size_t kDefaultFactorSegment = std::size_t{1} << 18;
// primes_in_range refuses to materialize more than this many primes.
inline constexpr std::size_t kDefaultMaxPrimes = std::size_t{1} << 27;

// Base primes up to `limit` by a plain sieve.
std::vector<std::uint32_t> base_primes(std::uint32_t limit);

// Visits every prime in [lo, hi] in ascending order; memory bounded by the
// segment size.
void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& visit,
                    std::size_t segment_size = kDefaultPrimeSegment);

std::vector<u64> primes_in_range(u64 lo, u64 hi, std::size_t max_count = kDefaultMaxPrimes,
                                 std::size_t segment_size = kDefaultPrimeSegment);

u64 count_primes(u64 lo, u64 hi, std::size_t segment_size = kDefaultPrimeSegment);

struct RangeOptions {
    bool odd_only = false;
    std::size_t segment_size = kDefaultFactorSegment;
};

// Pull-style stream of (n, factorization of n) for n in [lo, hi]. Each segment
// is factored by dividing out every base prime <= sqrt(hi) at its multiples;
// the leftover cofactor is prime.
class FactoredRangeStream {
public:
    FactoredRangeStream(u64 lo, u64 hi, RangeOptions options = {});

    // Fills `out` with the next factorization; false when exhausted.
    bool next(arith::Factorization& out);

    template <class Fn>
    void for_each(Fn&& fn) {
        arith::Factorization f;
        while (next(f)) fn(static_cast<const arith::Factorization&>(f));
    }

private:
    struct Slot {
        std::uint32_t primes[10];
        std::uint8_t exponents[10];
        std::uint8_t count;
    };

    void fill_segment();

    u64 first_ = 0;       // first value in the stream
    u64 count_ = 0;       // number of values in the stream
    u64 step_ = 1;        // 1 or 2
    u64 emitted_ = 0;     // values emitted so far
    u64 seg_begin_ = 0;   // stream index of slot 0
    std::size_t seg_len_ = 0;
    std::size_t segment_size_;
    std::vector<std::uint32_t> base_;
    std::vector<Slot> slots_;
    std::vector<u64> rest_;
};

inline FactoredRangeStream factored_range(u64 lo, u64 hi, bool odd_only = false,
                                          std::size_t segment_size = kDefaultFactorSegment) {
    return FactoredRangeStream(lo, hi, {odd_only, segment_size});
}

}  // namespace alq::primes
