#include "alq/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "alq/errors.hpp"

namespace alq::numerics {

namespace {

constexpr double kUnit = kEps / 2;  // unit roundoff

struct TwoSum {
    double sum;
    double err;
};

TwoSum two_sum(double a, double b) {
    const double s = a + b;
    const double bv = s - a;
    const double av = s - bv;
    return {s, (a - av) + (b - bv)};
}

// a + b rounded toward +inf.
double add_up(double a, double b) {
    const auto [s, e] = two_sum(a, b);
    return e > 0 ? std::nextafter(s, std::numeric_limits<double>::infinity()) : s;
}

// a * b rounded toward +inf, a, b >= 0.
double mul_up(double a, double b) {
    const double p = a * b;
    const double e = std::fma(a, b, -p);
    return e > 0 ? std::nextafter(p, std::numeric_limits<double>::infinity()) : p;
}

double gamma(std::uint64_t n) {
    const double nu = static_cast<double>(n) * kUnit;
    return round_up(nu / (1.0 - nu));
}

}  // namespace

double round_up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
double round_down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }

double CertifiedValue::lower() const {
    const auto [s, e] = two_sum(value, -error_radius);
    return e < 0 ? round_down(s) : s;
}

double CertifiedValue::upper() const { return add_up(value, error_radius); }

void CompensatedSum::add(double x) {
    const auto [s, e] = two_sum(head_, x);
    head_ = s;
    tail_ += e;
    abs_sum_ += std::abs(x);
    ++count_;
}

double CompensatedSum::summation_radius() const {
    if (count_ < 2) return 0.0;
    // sum|x| itself is a float sum with relative error <= gamma_n.
    const double abs_bound = mul_up(abs_sum_, add_up(1.0, gamma(count_)));
    const double g = gamma(count_ - 1);
    return add_up(mul_up(kEps, std::abs(value())), mul_up(mul_up(g, g), abs_bound));
}

CertifiedValue CompensatedSum::certified(double term_ulps) const {
    double radius = summation_radius();
    if (term_ulps > 0) radius = add_up(radius, mul_up(mul_up(term_ulps, kEps), abs_sum_ * (1 + 1e-6)));
    return {value(), radius};
}

CertifiedValue compensated_sum(std::span<const double> terms) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (!std::isfinite(terms[i]))
            throw ParameterError("compensated_sum: non-finite term at index " + std::to_string(i));
        acc.add(terms[i]);
    }
    return acc.certified();
}

CertifiedValue certified_combine(const CertifiedValue& a, const CertifiedValue& b, Combine kind) {
    const double rhs = kind == Combine::add ? b.value : -b.value;
    const auto [s, e] = two_sum(a.value, rhs);
    return {s, add_up(add_up(a.error_radius, b.error_radius), std::abs(e))};
}

CertifiedValue operator+(const CertifiedValue& a, const CertifiedValue& b) {
    return certified_combine(a, b, Combine::add);
}

CertifiedValue operator-(const CertifiedValue& a, const CertifiedValue& b) {
    return certified_combine(a, b, Combine::subtract);
}

CertifiedValue scale(const CertifiedValue& a, double factor) {
    const double v = a.value * factor;
    const double e = std::fma(a.value, factor, -v);
    return {v, add_up(mul_up(a.error_radius, std::abs(factor)), std::abs(e))};
}

CertifiedValue divide(const CertifiedValue& a, double divisor) {
    if (divisor == 0) throw ParameterError("divide: zero divisor");
    const double q = a.value / divisor;
    const double rem = std::fma(-q, divisor, a.value);  // exact
    const double d = std::abs(divisor);
    return {q, add_up(round_up(a.error_radius / d), round_up(std::abs(rem) / d))};
}

CertifiedValue multiply(const CertifiedValue& a, const CertifiedValue& b) {
    const double v = a.value * b.value;
    const double e = std::fma(a.value, b.value, -v);
    double r = mul_up(std::abs(a.value), b.error_radius);
    r = add_up(r, mul_up(std::abs(b.value), a.error_radius));
    r = add_up(r, mul_up(a.error_radius, b.error_radius));
    return {v, add_up(r, std::abs(e))};
}

std::int64_t BlockSumPlan::block_count() const {
    if (block_size <= 0) throw ParameterError("block_size must be positive");
    if (range_end < range_start) return 0;
    return (range_end - range_start) / block_size + 1;
}

std::pair<std::int64_t, std::int64_t> BlockSumPlan::block(std::int64_t b) const {
    const std::int64_t lo = range_start + b * block_size;
    return {lo, std::min(range_end, lo + block_size - 1)};
}

BlockResult reduce_blocks(const BlockSumPlan& plan, std::size_t channels, const BlockFn& block_fn,
                          unsigned workers, const BlockStore* store) {
    const std::int64_t blocks = plan.block_count();
    std::vector<std::optional<BlockResult>> results(static_cast<std::size_t>(blocks));

    if (store && store->load) {
        for (std::int64_t b = 0; b < blocks; ++b) results[b] = store->load(b);
    }

    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    auto work = [&] {
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= blocks) return;
            if (results[b]) continue;
            {
                std::lock_guard lock(mu);
                if (failure) return;
            }
            try {
                const auto [lo, hi] = plan.block(b);
                BlockResult r = block_fn(lo, hi);
                if (r.size() != channels) throw std::logic_error("block function returned wrong channel count");
                std::lock_guard lock(mu);
                if (store && store->save) store->save(b, r);
                results[b] = std::move(r);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    workers = std::max(1u, workers);
    if (workers == 1 || blocks <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < std::min<std::int64_t>(workers, blocks); ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    BlockResult out(channels);
    for (std::size_t c = 0; c < channels; ++c) {
        CompensatedSum acc;
        double radii = 0.0;
        for (const auto& r : results) {
            acc.add((*r)[c].value);
            radii = add_up(radii, (*r)[c].error_radius);
        }
        out[c] = {acc.value(), add_up(radii, acc.summation_radius())};
    }
    return out;
}

CertifiedValue deterministic_block_reduce(const BlockSumPlan& plan,
                                          const std::function<double(std::int64_t)>& term,
                                          unsigned workers, double term_ulps) {
    const BlockFn fn = [&](std::int64_t lo, std::int64_t hi) {
        CompensatedSum acc;
        for (std::int64_t n = lo; n <= hi; ++n) {
            const double t = term(n);
            if (!std::isfinite(t))
                throw ParameterError("deterministic_block_reduce: non-finite term at n = " + std::to_string(n));
            acc.add(t);
        }
        return BlockResult{acc.certified(term_ulps)};
    };
    return reduce_blocks(plan, 1, fn, workers)[0];
}

}  // namespace alq::numerics
