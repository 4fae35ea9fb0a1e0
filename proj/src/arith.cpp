#include "alq/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "alq/errors.hpp"

namespace alq::arith {

namespace {

using u128 = unsigned __int128;

constexpr u64 kTrialLimit = 1u << 16;

const std::vector<u64>& small_primes() {
    static const std::vector<u64> primes = [] {
        std::vector<char> composite(kTrialLimit + 1, 0);
        std::vector<u64> out;
        for (u64 i = 2; i <= kTrialLimit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (u64 j = i * i; j <= kTrialLimit; j += i) composite[j] = 1;
        }
        return out;
    }();
    return primes;
}

bool checked_mul(u64 a, u64 b, u64& out) { return !__builtin_mul_overflow(a, b, &out); }

// Brent's variant of Pollard rho. Returns a nontrivial factor of the odd
// composite n, or 0 if the budget runs out.
u64 rho_brent(u64 n, u64& budget) {
    constexpr u64 kBatch = 128;
    for (u64 c = 1; c < n && budget > 0; ++c) {
        u64 y = 2, x = 2, ys = 2, q = 1, g = 1;
        u64 r = 1;
        auto f = [&](u64 v) { return static_cast<u64>((static_cast<u128>(v) * v + c) % n); };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                const u64 lim = std::min(kBatch, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += lim;
                budget = budget > lim ? budget - lim : 0;
            } while (k < r && g == 1 && budget > 0);
            r <<= 1;
        } while (g == 1 && budget > 0);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != 1 && g != n) return g;
    }
    return 0;
}

// Splits n (no factor below kTrialLimit) into primes; unresolved composites go
// to `stuck`.
void split(u64 n, u64& budget, std::vector<u64>& primes, std::vector<u64>& stuck) {
    if (n == 1) return;
    if (is_prime(n)) {
        primes.push_back(n);
        return;
    }
    const u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    for (u64 c = r > 0 ? r - 1 : 0; c <= r + 1; ++c) {
        if (c > 1 && c * c == n) {
            split(c, budget, primes, stuck);
            split(c, budget, primes, stuck);
            return;
        }
    }
    const u64 d = budget > 0 ? rho_brent(n, budget) : 0;
    if (d == 0) {
        stuck.push_back(n);
        return;
    }
    split(d, budget, primes, stuck);
    split(n / d, budget, primes, stuck);
}

}  // namespace

void Factorization::push(u64 p, unsigned e) {
    if (size_ == kCapacity) throw OverflowError("factorization capacity exceeded");
    if (size_ > 0 && p <= entries_[size_ - 1].prime)
        throw std::logic_error("Factorization::push: primes must be strictly increasing");
    const auto pe = checked_pow(p, e);
    u64 next = 0;
    if (!pe || !checked_mul(n_, *pe, next)) throw OverflowError("factorization value exceeds 64 bits");
    entries_[size_++] = {p, e};
    n_ = next;
}

void Factorization::multiply_by_two() {
    u64 next = 0;
    if (!checked_mul(n_, 2, next)) throw OverflowError("factorization value exceeds 64 bits");
    if (size_ > 0 && entries_[0].prime == 2) {
        ++entries_[0].exponent;
    } else {
        if (size_ == kCapacity) throw OverflowError("factorization capacity exceeded");
        std::move_backward(entries_.begin(), entries_.begin() + size_, entries_.begin() + size_ + 1);
        entries_[0] = {2, 1};
        ++size_;
    }
    n_ = next;
}

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These twelve bases are a deterministic witness set below 3.3e24.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

FactorResult factorize(u64 n, Effort effort) {
    if (n == 0) throw ParameterError("factorize: n must be positive");
    FactorResult out;
    std::vector<std::pair<u64, unsigned>> found;
    for (u64 p : small_primes()) {
        if (p * p > n) break;
        if (n % p) continue;
        unsigned e = 0;
        do {
            n /= p;
            ++e;
        } while (n % p == 0);
        found.emplace_back(p, e);
    }
    std::vector<u64> big, stuck;
    if (n > 1) {
        if (n <= kTrialLimit * kTrialLimit) {
            big.push_back(n);  // trial division was exhaustive
        } else {
            u64 budget = effort.rho_iterations;
            split(n, budget, big, stuck);
        }
    }
    std::sort(big.begin(), big.end());
    for (std::size_t i = 0; i < big.size();) {
        std::size_t k = i;
        while (k < big.size() && big[k] == big[i]) ++k;
        found.emplace_back(big[i], static_cast<unsigned>(k - i));
        i = k;
    }
    std::sort(found.begin(), found.end());
    for (auto [p, e] : found) out.factors.push(p, e);
    for (u64 c : stuck) out.unresolved *= c;
    return out;
}

Factorization factor(u64 n, Effort effort) {
    auto r = factorize(n, effort);
    if (!r.complete())
        throw ResourceError("factorize: unresolved cofactor " + std::to_string(r.unresolved) + " of " +
                            std::to_string(n));
    return r.factors;
}

std::optional<u64> checked_pow(u64 p, unsigned m) {
    u64 r = 1;
    for (unsigned i = 0; i < m; ++i)
        if (!checked_mul(r, p, r)) return std::nullopt;
    return r;
}

std::optional<u64> sigma_prime_power(u64 p, unsigned m) {
    u64 s = 1, pk = 1;
    for (unsigned i = 0; i < m; ++i) {
        if (!checked_mul(pk, p, pk) || __builtin_add_overflow(s, pk, &s)) return std::nullopt;
    }
    return s;
}

u64 sigma(const Factorization& f) {
    u64 s = 1;
    for (const auto& [p, m] : f.entries()) {
        const auto t = sigma_prime_power(p, m);
        if (!t || !checked_mul(s, *t, s)) throw OverflowError("sigma(" + std::to_string(f.n()) + ") exceeds 64 bits");
    }
    return s;
}

u64 aliquot_sum(u64 n, Effort effort) {
    if (n == 0) throw ParameterError("aliquot_sum: n must be positive");
    if (n == 1) return 0;
    return sigma(factor(n, effort)) - n;
}

unsigned nu(const Factorization& f) { return static_cast<unsigned>(f.size()); }

u64 sigma_oracle(u64 n) {
    if (n == 0) throw ParameterError("sigma_oracle: n must be positive");
    u64 s = 0;
    for (u64 d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        s += d;
        if (d != n / d) s += n / d;
    }
    return s;
}

bool is_square(u64 n) {
    u64 r = std::min<u64>(static_cast<u64>(std::sqrt(static_cast<double>(n))), 0xFFFFFFFFull);
    while (r * r > n) --r;
    while (r < 0xFFFFFFFFull && (r + 1) * (r + 1) <= n) ++r;
    return r * r == n;
}

bool is_square_or_twice_square(u64 n) { return is_square(n) || (n % 2 == 0 && is_square(n / 2)); }

}  // namespace alq::arith
