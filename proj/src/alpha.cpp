#include "alq/alpha.hpp"

#include <cmath>
#include <string>

#include "alq/arith.hpp"
#include "alq/errors.hpp"
#include "alq/primes.hpp"

namespace alq::alpha {

namespace {

using numerics::CertifiedValue;
using numerics::CompensatedSum;

// alpha_term: pow, division, log1p and a product, each within an ulp.
constexpr double kTermUlps = 8.0;

}  // namespace

void AlphaParams::validate() const {
    if (N <= 2) throw ParameterError("alpha: N must exceed 2");
    if (L <= 1) throw ParameterError("alpha: L must exceed 1");
    if (M <= 1) throw ParameterError("alpha: M must exceed 1");
    if (N > primes::kMaxSieveBound) throw ResourceError("alpha: N exceeds the sieve bound 1e10");
}

double alpha_term(std::uint64_t p, unsigned m) {
    if (p < 2 || m < 1) throw ParameterError("alpha_term: need p >= 2, m >= 1");
    // p + ... + p^m
    double denom = 0;
    if (const auto s = arith::sigma_prime_power(p, m)) {
        denom = static_cast<double>(*s - 1);
    } else {
        const double pd = static_cast<double>(p);
        denom = pd * (std::pow(pd, m) - 1) / (pd - 1);
    }
    const double weight = std::pow(static_cast<double>(p), -static_cast<double>(m));
    if (!std::isfinite(denom) || weight == 0) throw OverflowError("alpha_term: p^m out of floating range");
    return weight * std::log1p(1.0 / denom);
}

double tail_A(std::uint64_t p, unsigned M) {
    const double pd = static_cast<double>(p);
    return pd / (pd - 1) * std::pow(pd, -2.0 * (M + 1));
}

CertifiedValue alpha_two_part(unsigned L) {
    if (L <= 1) throw ParameterError("alpha_two_part: L must exceed 1");
    CompensatedSum acc;
    for (unsigned m = 1; m <= L; ++m) acc.add(alpha_term(2, m));
    // Doubling is exact.
    auto c = acc.certified(kTermUlps);
    return {2 * c.value, 2 * c.error_radius};
}

double alpha_prime_series(std::uint64_t p, unsigned depth) {
    const double x = 1.0 / static_cast<double>(p);
    double partial = 1.0, power = 1.0, sum = 0.0;
    for (unsigned m = 1; m <= depth; ++m) {
        power *= x;
        partial += power;
        sum += power * std::log(partial);
    }
    return (1 - x) * sum;
}

AlphaResult alpha_upper_bound(const AlphaParams& params, const AlphaOptions& opt) {
    params.validate();
    AlphaResult out;
    out.params = params;

    const numerics::BlockSumPlan plan{3, static_cast<std::int64_t>(params.N),
                                      static_cast<std::int64_t>(opt.block_size)};
    // channels: main sums, sum of A(p,M), prime count
    const numerics::BlockFn fn = [&](std::int64_t lo, std::int64_t hi) {
        CompensatedSum sums, tails;
        double primes_seen = 0;
        primes::for_each_prime(static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi), [&](std::uint64_t p) {
            for (unsigned m = 1; m <= params.M; ++m) sums.add(alpha_term(p, m));
            tails.add(tail_A(p, params.M));
            primes_seen += 1;
        });
        return numerics::BlockResult{sums.certified(kTermUlps), tails.certified(kTermUlps), {primes_seen, 0}};
    };
    const auto r = numerics::reduce_blocks(plan, 3, fn, opt.workers);

    out.sums = alpha_two_part(params.L) + r[0];
    out.prime_count = static_cast<std::uint64_t>(r[2].value) + 1;
    // Tail pieces are upper bounds; round each sum upward.
    const double odd_tails = r[1].upper();
    const double prime_tail = numerics::round_up(1.0 / static_cast<double>(params.N));
    out.tail_total = numerics::round_up(numerics::round_up(numerics::round_up(2 * tail_A(2, params.L) * (1 + 4 * numerics::kEps)) + odd_tails) + prime_tail);
    out.upper_bound = numerics::round_up(out.sums.upper() + out.tail_total);
    return out;
}

nlohmann::json to_json(const AlphaResult& r) {
    return {{"params", {{"N", r.params.N}, {"L", r.params.L}, {"M", r.params.M}}},
            {"sums", {{"value", r.sums.value}, {"error_radius", r.sums.error_radius}}},
            {"tail_total", r.tail_total},
            {"upper_bound", r.upper_bound},
            {"odd_primes_summed", r.prime_count - 1}};
}

}  // namespace alq::alpha
