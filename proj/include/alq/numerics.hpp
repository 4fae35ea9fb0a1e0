#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace alq::numerics {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// A computed real together with a rigorous absolute error radius.
struct CertifiedValue {
    double value = 0.0;
    double error_radius = 0.0;

    double lower() const;  // value - radius, rounded down
    double upper() const;  // value + radius, rounded up

    friend bool operator==(const CertifiedValue&, const CertifiedValue&) = default;
};

// Upward/downward directed helpers for a single rounded operation.
double round_up(double x);
double round_down(double x);

// Streaming compensated accumulator (cascaded TwoSum). The value is the sum of
// the running head and the accumulated rounding tails; the reported radius is
// the a-posteriori bound eps*|s| + gamma_{n-1}^2 * sum|x_i|.
class CompensatedSum {
public:
    void add(double x);
    void add(const CompensatedSum& other);

    double value() const { return head_ + tail_; }
    double abs_sum() const { return abs_sum_; }
    std::uint64_t count() const { return count_; }

    // Radius from summation only.
    double summation_radius() const;

    // Radius including a per-term evaluation allowance of
    // term_ulps * eps * sum|x_i|.
    CertifiedValue certified(double term_ulps = 0.0) const;

private:
    double head_ = 0.0;
    double tail_ = 0.0;
    double abs_sum_ = 0.0;
    std::uint64_t count_ = 0;
};

// Throws ParameterError naming the first non-finite index.
CertifiedValue compensated_sum(std::span<const double> terms);

enum class Combine { add, subtract };

CertifiedValue certified_combine(const CertifiedValue& a, const CertifiedValue& b, Combine kind);
CertifiedValue operator+(const CertifiedValue& a, const CertifiedValue& b);
CertifiedValue operator-(const CertifiedValue& a, const CertifiedValue& b);
// Product with an exactly known scalar.
CertifiedValue scale(const CertifiedValue& a, double factor);
// Quotient by an exactly known nonzero divisor.
CertifiedValue divide(const CertifiedValue& a, double divisor);
// Product of two certified values.
CertifiedValue multiply(const CertifiedValue& a, const CertifiedValue& b);

struct BlockSumPlan {
    std::int64_t range_start = 1;
    std::int64_t range_end = 0;
    std::int64_t block_size = 1;

    std::int64_t block_count() const;
    // [lo, hi] of block b (inclusive).
    std::pair<std::int64_t, std::int64_t> block(std::int64_t b) const;
};

// Result of summing one block: one certified value per output channel.
using BlockResult = std::vector<CertifiedValue>;
using BlockFn = std::function<BlockResult(std::int64_t lo, std::int64_t hi)>;

// Optional persistence hooks used for checkpoint/resume.
struct BlockStore {
    std::function<std::optional<BlockResult>(std::int64_t block)> load;
    std::function<void(std::int64_t block, const BlockResult&)> save;
};

// Runs block_fn on every block of the plan using up to `workers` threads and
// merges the per-channel results in ascending block order. The result does not
// depend on the worker count.
BlockResult reduce_blocks(const BlockSumPlan& plan, std::size_t channels, const BlockFn& block_fn,
                          unsigned workers = 1, const BlockStore* store = nullptr);

// Single-channel convenience: sums term(n) over the plan's range.
CertifiedValue deterministic_block_reduce(const BlockSumPlan& plan,
                                          const std::function<double(std::int64_t)>& term,
                                          unsigned workers = 1, double term_ulps = 0.0);

}  // namespace alq::numerics
