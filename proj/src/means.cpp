#include "alq/means.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "alq/errors.hpp"
#include "alq/primes.hpp"

namespace alq::means {

namespace {

using numerics::BlockResult;
using numerics::CertifiedValue;
using numerics::CompensatedSum;

// s(m)/m is one rounding away from exact; log adds at most one more ulp.
constexpr double kTermUlps = 4.0;

struct ClassSums {
    CertifiedValue ratio_sum;  // sum of s(m)/m, m = 1 included as 0
    CertifiedValue log_sum;    // sum of log(s(m)/m) over m > 1
    std::int64_t log_terms = 0;
};

// Sums over the class members with index 1..count.
ClassSums class_sums(Residue c, std::int64_t count, const MeanOptions& opt) {
    const numerics::BlockSumPlan plan{1, count, opt.block_size};
    const numerics::BlockFn fn = [c](std::int64_t lo, std::int64_t hi) {
        CompensatedSum ratios, logs;
        auto visit = [&](arith::Factorization f) {
            if (c == Residue::even) f.multiply_by_two();
            const arith::u64 m = f.n();
            if (m == 1) {
                ratios.add(0.0);
                return;
            }
            const arith::u64 s = arith::sigma(f) - m;
            const double r = static_cast<double>(s) / static_cast<double>(m);
            ratios.add(r);
            logs.add(std::log(r));
        };
        if (c == Residue::odd) {
            primes::factored_range(2 * lo - 1, 2 * hi - 1, true).for_each(visit);
        } else {
            primes::factored_range(lo, hi).for_each(visit);
        }
        return BlockResult{ratios.certified(kTermUlps), logs.certified(kTermUlps)};
    };
    const auto r = numerics::reduce_blocks(plan, 2, fn, opt.workers);
    // Only the even class has no member equal to 1.
    const std::int64_t skipped = (c == Residue::even || count == 0) ? 0 : 1;
    return {r[0], r[1], count - skipped};
}

std::int64_t members_up_to(Residue c, std::int64_t N) {
    switch (c) {
        case Residue::all: return N;
        case Residue::even: return N / 2;
        case Residue::odd: return (N + 1) / 2;
    }
    return 0;
}

}  // namespace

std::string to_string(Residue c) {
    switch (c) {
        case Residue::all: return "all";
        case Residue::even: return "even";
        case Residue::odd: return "odd";
    }
    return "?";
}

Residue residue_from_string(const std::string& s) {
    if (s == "all") return Residue::all;
    if (s == "even") return Residue::even;
    if (s == "odd") return Residue::odd;
    throw ParameterError("unknown residue class '" + s + "' (expected all, even or odd)");
}

double closed_form(Residue c) {
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    switch (c) {
        case Residue::all: return pi2 / 6 - 1;
        case Residue::even: return 5 * pi2 / 24 - 1;
        case Residue::odd: return 3 * pi2 / 24 - 1;
    }
    return 0;
}

CertifiedValue arithmetic_mean(Residue c, std::int64_t N, const MeanOptions& opt) {
    if (N < 2) throw ParameterError("arithmetic_mean: N must be >= 2");
    const auto sums = class_sums(c, N, opt);
    return numerics::divide(sums.ratio_sum, static_cast<double>(N));
}

CertifiedValue log_mean(Residue c, std::int64_t N, const MeanOptions& opt) {
    if (N < 4) throw ParameterError("log_mean: N must be >= 4");
    const auto sums = class_sums(c, members_up_to(c, N), opt);
    return numerics::divide(sums.log_sum, static_cast<double>(sums.log_terms));
}

MeanReport mean_report(Residue c, std::int64_t N, const MeanOptions& opt) {
    if (N < 4) throw ParameterError("means: N must be >= 4");
    const std::int64_t k = members_up_to(c, N);
    const auto sums = class_sums(c, k, opt);
    MeanReport r;
    r.residue = c;
    r.N = N;
    r.samples = k;
    r.arithmetic_mean = numerics::divide(sums.ratio_sum, static_cast<double>(k));
    r.log_mean = numerics::divide(sums.log_sum, static_cast<double>(sums.log_terms));
    r.closed_form_limit = closed_form(c);
    return r;
}

nlohmann::json to_json(const MeanReport& r) {
    return {{"class", to_string(r.residue)},
            {"N", r.N},
            {"samples", r.samples},
            {"arithmetic_mean", {{"value", r.arithmetic_mean.value}, {"error_radius", r.arithmetic_mean.error_radius}}},
            {"log_mean", {{"value", r.log_mean.value}, {"error_radius", r.log_mean.error_radius}}},
            {"geometric_mean", std::exp(r.log_mean.value)},
            {"closed_form", r.closed_form_limit}};
}

std::string csv_header() { return "class,N,arithmetic_mean,log_mean,closed_form,error_radius"; }

std::string csv_row(const MeanReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << to_string(r.residue) << ',' << r.N << ',' << r.arithmetic_mean.value << ',' << r.log_mean.value << ','
       << r.closed_form_limit << ',' << std::max(r.arithmetic_mean.error_radius, r.log_mean.error_radius);
    return os.str();
}

}  // namespace alq::means
