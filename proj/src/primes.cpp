#include "alq/primes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "alq/errors.hpp"

namespace alq::primes {

namespace {

u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

void check_range(u64 hi) {
    if (hi > kMaxSieveBound)
        throw ResourceError("sieve bound " + std::to_string(hi) + " exceeds supported maximum 1e10");
}

}  // namespace

std::vector<std::uint32_t> base_primes(std::uint32_t limit) {
    std::vector<std::uint32_t> out;
    if (limit < 2) return out;
    std::vector<char> composite(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    return out;
}

void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& visit, std::size_t segment_size) {
    check_range(hi);
    if (segment_size == 0) throw ParameterError("segment size must be positive");
    lo = std::max<u64>(lo, 2);
    if (hi < lo) return;
    const auto base = base_primes(static_cast<std::uint32_t>(isqrt(hi)));
    std::vector<char> sieve(segment_size);
    for (u64 seg = lo; seg <= hi; seg += segment_size) {
        const u64 seg_hi = std::min<u64>(hi, seg + segment_size - 1);
        const std::size_t len = seg_hi - seg + 1;
        std::fill_n(sieve.begin(), len, 1);
        for (std::uint32_t p : base) {
            const u64 pp = u64{p} * p;
            if (pp > seg_hi) break;
            u64 start = std::max(pp, (seg + p - 1) / p * p);
            for (u64 k = start; k <= seg_hi; k += p) sieve[k - seg] = 0;
        }
        for (std::size_t i = 0; i < len; ++i)
            if (sieve[i]) visit(seg + i);
    }
}

std::vector<u64> primes_in_range(u64 lo, u64 hi, std::size_t max_count, std::size_t segment_size) {
    check_range(hi);
    if (hi >= lo) {
        // pi(x) <= 1.26 x / log x for x > 1
        const double x = static_cast<double>(std::max<u64>(hi, 3));
        const double estimate = 1.25506 * x / std::log(x);
        if (estimate > static_cast<double>(max_count))
            throw ResourceError("primes_in_range: up to " + std::to_string(static_cast<u64>(estimate)) +
                                " primes requested, cap is " + std::to_string(max_count) +
                                "; split the range or use for_each_prime");
    }
    std::vector<u64> out;
    for_each_prime(lo, hi, [&](u64 p) { out.push_back(p); }, segment_size);
    return out;
}

u64 count_primes(u64 lo, u64 hi, std::size_t segment_size) {
    u64 c = 0;
    for_each_prime(lo, hi, [&](u64) { ++c; }, segment_size);
    return c;
}

FactoredRangeStream::FactoredRangeStream(u64 lo, u64 hi, RangeOptions options)
    : segment_size_(options.segment_size) {
    check_range(hi);
    if (lo == 0) throw ParameterError("factored_range: lo must be >= 1");
    if (segment_size_ == 0) throw ParameterError("segment size must be positive");
    step_ = options.odd_only ? 2 : 1;
    first_ = options.odd_only ? (lo | 1) : lo;
    count_ = hi >= first_ ? (hi - first_) / step_ + 1 : 0;
    if (count_ > 0) base_ = base_primes(static_cast<std::uint32_t>(isqrt(hi)));
    slots_.resize(std::min<u64>(segment_size_, std::max<u64>(count_, 1)));
    rest_.resize(slots_.size());
}

void FactoredRangeStream::fill_segment() {
    seg_begin_ = emitted_;
    seg_len_ = static_cast<std::size_t>(std::min<u64>(slots_.size(), count_ - emitted_));
    const u64 v0 = first_ + seg_begin_ * step_;
    const u64 v_last = v0 + (seg_len_ - 1) * step_;
    for (std::size_t i = 0; i < seg_len_; ++i) {
        rest_[i] = v0 + i * step_;
        slots_[i].count = 0;
    }
    for (std::uint32_t p : base_) {
        if (step_ == 2 && p == 2) continue;
        if (p > v_last) break;
        // first multiple of p in the segment with the stream's parity
        u64 m = (v0 + p - 1) / p * p;
        if (step_ == 2 && (m & 1) == 0) m += p;
        for (u64 v = m; v <= v_last; v += p * step_) {
            const std::size_t i = (v - v0) / step_;
            std::uint8_t e = 0;
            u64 r = rest_[i];
            do {
                r /= p;
                ++e;
            } while (r % p == 0);
            rest_[i] = r;
            Slot& s = slots_[i];
            s.primes[s.count] = p;
            s.exponents[s.count] = e;
            ++s.count;
        }
    }
}

bool FactoredRangeStream::next(arith::Factorization& out) {
    if (emitted_ >= count_) return false;
    if (emitted_ == 0 || emitted_ - seg_begin_ >= seg_len_) fill_segment();
    const std::size_t i = emitted_ - seg_begin_;
    out = arith::Factorization{};
    const Slot& s = slots_[i];
    for (std::uint8_t k = 0; k < s.count; ++k) out.push(s.primes[k], s.exponents[k]);
    if (rest_[i] > 1) out.push(rest_[i], 1);
    ++emitted_;
    return true;
}

}  // namespace alq::primes
