#include "alq/beta.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "alq/checkpoint.hpp"
#include "alq/errors.hpp"
#include "alq/primes.hpp"

namespace alq::beta {

namespace {

using numerics::CompensatedSum;

// Evaluation allowance for one beta_j(n): a handful of correctly rounded
// transcendental calls and products per prime power.
constexpr double kTermUlps = 256.0;

constexpr u64 kSaturated = std::numeric_limits<u64>::max();

u64 saturating_mul(u64 a, u64 b) {
    u64 r;
    return __builtin_mul_overflow(a, b, &r) ? kSaturated : r;
}

// p + p^2 + ... + p^m = p sigma(p^(m-1)) as a double.
double upper_geometric(u64 p, unsigned m) {
    if (const auto s = arith::sigma_prime_power(p, m)) return static_cast<double>(*s - 1);
    const double pd = static_cast<double>(p);
    return pd * (std::pow(pd, m) - 1) / (pd - 1);
}

// log(sigma(p^m)/p^m) = log(1 - p^-(m+1)) - log(1 - 1/p)
double log_sigma_ratio(u64 p, unsigned m) {
    const double pd = static_cast<double>(p);
    return std::log1p(-std::pow(pd, -static_cast<double>(m + 1))) - std::log1p(-1.0 / pd);
}

double pow_e(u64 pm, double e) { return std::pow(static_cast<double>(pm), e); }

void check_e(unsigned j, double e) {
    if (!(e > 0.0 && e < 1.0)) throw ParameterError("exponent e must lie in (0,1) (got " + std::to_string(e) + ")");
    if (j < 1) throw ParameterError("j must be >= 1");
}

}  // namespace

double g_prime_power(unsigned j, u64 p, unsigned m) {
    if (m == 0) return 1.0;
    return std::pow(static_cast<double>(p), -static_cast<double>(m)) * std::exp(-static_cast<double>(j) * log_sigma_ratio(p, m));
}

double h_prime_power(unsigned j, u64 p, unsigned m) {
    if (m == 0) return 1.0;
    const double x = 1.0 / upper_geometric(p, m);
    return std::expm1(static_cast<double>(j) * std::log1p(x));
}

double h_prime_power_binomial(unsigned j, u64 p, unsigned m) {
    if (m == 0) return 1.0;
    const double x = 1.0 / upper_geometric(p, m);
    double sum = 0, binom = 1, xk = 1;
    for (unsigned k = 1; k <= j; ++k) {
        binom = binom * (j - k + 1) / k;
        xk *= x;
        sum += binom * xk;
    }
    return sum;
}

double g(unsigned j, const arith::Factorization& f) {
    double r = 1.0;
    for (const auto& [p, m] : f.entries()) r *= g_prime_power(j, p, m);
    return r;
}

double h(unsigned j, const arith::Factorization& f) {
    double r = 1.0;
    for (const auto& [p, m] : f.entries()) r *= h_prime_power(j, p, m);
    return r;
}

double beta_signed(unsigned j, const arith::Factorization& f) {
    if (f.n() % 2 == 0) throw ParameterError("beta_signed: n must be odd");
    const double v = g(j, f) * h(j, f);
    return f.size() % 2 ? -v : v;
}

CertifiedValue two_beta2_minus_one(unsigned j, unsigned K2) {
    if (K2 < 8) throw ParameterError("two_beta2_minus_one: K2 must be >= 8");
    CompensatedSum acc;
    for (unsigned m = 1; m <= K2; ++m) acc.add(g_prime_power(j, 2, m));
    auto c = acc.certified(kTermUlps);
    // sum_{m > K2} g_j(2^m) <= (2/3)^j 2^-K2
    const double tail = std::pow(2.0 / 3.0, j) * std::ldexp(1.0, 1 - static_cast<int>(K2));
    c.error_radius = numerics::round_up(c.error_radius + tail);
    return c;
}

CertifiedValue beta_prime(unsigned j, u64 p, unsigned depth) {
    if (depth < 4) throw ParameterError("beta_prime: depth must be >= 4");
    CompensatedSum acc;
    acc.add(1.0);
    for (unsigned m = 1; m <= depth; ++m)
        acc.add(std::pow(static_cast<double>(p), -static_cast<double>(m)) *
                std::exp(-static_cast<double>(j) * log_sigma_ratio(p, m)));
    const auto series = acc.certified(kTermUlps);
    const double pd = static_cast<double>(p);
    auto out = numerics::scale(series, 1.0 - 1.0 / pd);
    out.error_radius = numerics::round_up(out.error_radius + out.value * 4 * numerics::kEps +
                                          std::pow(pd, -static_cast<double>(depth)) / (pd - 1));
    return out;
}

std::vector<PrimePowerEntry> t_set(unsigned j, double e, double c, const SetOptions& opt) {
    check_e(j, e);
    if (!(c >= 1.0)) throw ParameterError("t_set: c must be >= 1");
    const double X = std::pow(2.0 * j * c, 1.0 / (1.0 - e));
    if (!(X <= static_cast<double>(opt.max_scan)))
        throw ResourceError("t_set: prime-power cutoff " + std::to_string(X) + " exceeds scan cap " +
                            std::to_string(opt.max_scan));
    const u64 limit = static_cast<u64>(X);
    const double threshold = 1.0 - opt.slack;
    const double two_j = 2.0 * j;

    auto check_bound = [&](u64 p, unsigned m, u64 pm, double hv) {
        if (static_cast<double>(pm) >= two_j && hv > two_j / static_cast<double>(pm) * (1 + 1e-12))
            throw std::logic_error("t_set: h_j(p^m) <= 2j/p^m violated at p=" + std::to_string(p) +
                                   " m=" + std::to_string(m));
    };

    std::vector<PrimePowerEntry> out;
    for (std::uint32_t p32 : primes::base_primes(static_cast<std::uint32_t>(std::max<u64>(limit, 2)))) {
        const u64 p = p32;
        if (opt.odd_only && p == 2) continue;
        if (p > limit) break;
        u64 pm = 1;
        for (unsigned m = 1;; ++m) {
            pm = saturating_mul(pm, p);
            const double hv = h_prime_power(j, p, m);
            check_bound(p, m, pm, hv);
            if (pm > limit) {
                // first power beyond the cutoff must already fail the test
                if (hv * c * pow_e(pm, e) >= 1.0)
                    throw std::logic_error("t_set: entry beyond cutoff satisfies the defining inequality");
                break;
            }
            const double w = hv * pow_e(pm, e);
            if (w * c >= threshold) out.push_back({p, m, hv, g_prime_power(j, p, m), w});
        }
    }
    return out;
}

double m_const(unsigned j, double e, const SetOptions& opt) {
    std::map<u64, double> best;
    for (const auto& t : t_set(j, e, 1.0, opt)) {
        auto& b = best[t.p];
        b = std::max({b, 1.0, t.weight});
    }
    double M = 1.0;
    for (const auto& [p, w] : best) M *= w;
    return M;
}

SSetSummary for_each_s_element(unsigned j, double e, const std::function<void(const SElement&)>& visit,
                               const SetOptions& opt) {
    SSetSummary summary;
    if (j == 1 && e == 1.0) return summary;  // h_1(n) n <= 1 for every n
    check_e(j, e);
    summary.M = m_const(j, e, opt);
    const auto entries = t_set(j, e, summary.M, opt);
    summary.t_size = entries.size();

    // group by prime, ascending
    std::vector<std::vector<PrimePowerEntry>> groups;
    for (const auto& t : entries) {
        if (groups.empty() || groups.back().front().p != t.p) groups.emplace_back();
        groups.back().push_back(t);
    }
    const std::size_t P = groups.size();
    std::vector<double> suffix(P + 1, 1.0);
    for (std::size_t k = P; k-- > 0;) {
        double best = 1.0;
        for (const auto& t : groups[k]) best = std::max(best, t.weight);
        suffix[k] = suffix[k + 1] * best;
    }
    const double threshold = 1.0 - opt.slack;

    std::vector<arith::PrimePower> stack;
    SElement el;
    auto dfs = [&](auto&& self, std::size_t from, u64 n, double log_n, double hv, double gv, double w) -> void {
        for (std::size_t k = from; k < P; ++k) {
            if (w * suffix[k] <= threshold) return;
            for (const auto& t : groups[k]) {
                const double w2 = w * t.weight;
                if (w2 * suffix[k + 1] <= threshold && w2 <= threshold) continue;
                ++summary.nodes_visited;
                const u64 pm = *arith::checked_pow(t.p, t.m);
                const u64 n2 = saturating_mul(n, pm);
                const double log2n = log_n + std::log(static_cast<double>(pm));
                stack.push_back({t.p, t.m});
                if (w2 > threshold) {
                    if (++summary.size > opt.max_elements)
                        throw ResourceError("s_set(j=" + std::to_string(j) + ", e=" + std::to_string(e) +
                                            "): more than " + std::to_string(opt.max_elements) +
                                            " elements (partial count " + std::to_string(summary.size - 1) + ")");
                    el.n = n2;
                    el.exact = n2 != kSaturated;
                    el.log_n = log2n;
                    el.h_value = hv * t.h_value;
                    el.g_value = gv * t.g_value;
                    el.weight = w2;
                    el.nu = static_cast<unsigned>(stack.size());
                    el.factors = stack;
                    visit(el);
                }
                if (w2 * suffix[k + 1] > threshold)
                    self(self, k + 1, n2, log2n, hv * t.h_value, gv * t.g_value, w2);
                stack.pop_back();
            }
        }
    };
    dfs(dfs, 0, 1, 0.0, 1.0, 1.0, 1.0);
    return summary;
}

std::vector<SMember> s_set(unsigned j, double e, const SetOptions& opt) {
    std::vector<SMember> out;
    for_each_s_element(
        j, e,
        [&](const SElement& el) {
            if (!el.exact) throw ResourceError("s_set: element exceeds 64 bits; use for_each_s_element");
            out.push_back({el.n, el.h_value, {el.factors.begin(), el.factors.end()}});
        },
        opt);
    std::sort(out.begin(), out.end(), [](const SMember& a, const SMember& b) { return a.n < b.n; });
    return out;
}

void BetaJConfig::validate() const {
    if (j < 1) throw ParameterError("beta: j must be >= 1");
    if (N < 2 || N % 2) throw ParameterError("beta: N_j must be an even integer > 1 (j=" + std::to_string(j) + ")");
    if (N > primes::kMaxSieveBound) throw ResourceError("beta: N_j exceeds the sieve bound 1e10");
    if (e == 1.0 && j != 1) throw ParameterError("beta: e = 1 is only admissible for j = 1");
    if (!(e > 0.0 && e <= 1.0)) throw ParameterError("beta: e_j must lie in (0,1]");
    if (K2 < 8) throw ParameterError("beta: K2 must be >= 8");
}

double error_term(unsigned j, double e, u64 N) {
    return std::pow(2.0 / 3.0, j) / (2.0 * j * e * std::pow(static_cast<double>(N), e));
}

double tail_bound(unsigned j, double e, u64 N) {
    const double n1 = static_cast<double>(N) + 1.0;
    const double odd_sum = std::pow(n1, -1.0 - e) + 1.0 / (2.0 * e * std::pow(n1, e));
    return numerics::round_up(std::pow(2.0 / 3.0, j) * odd_sum / j * (1 + 16 * numerics::kEps));
}

double mixed_region_bound(unsigned j, double e, u64 N, double M) {
    if (!(e < 1.0)) return std::numeric_limits<double>::infinity();
    return std::pow(2.0 / 3.0, j) * 2.0 * M / ((1.0 - e) * std::pow(static_cast<double>(N), e));
}

std::vector<CertifiedValue> odd_sums(std::span<const BetaJConfig> configs, const BetaOptions& opt) {
    if (configs.empty()) throw ParameterError("beta: no j configurations");
    u64 n_max = 0;
    unsigned j_max = 0;
    for (const auto& c : configs) {
        c.validate();
        n_max = std::max(n_max, c.N);
        j_max = std::max(j_max, c.j);
    }
    const std::size_t channels = configs.size();

    const numerics::BlockFn fn = [&](std::int64_t lo, std::int64_t hi) {
        std::vector<CompensatedSum> acc(channels);
        std::vector<double> prod(j_max + 1);
        primes::factored_range(static_cast<u64>(lo), static_cast<u64>(hi), true).for_each([&](const arith::Factorization& f) {
            std::fill(prod.begin(), prod.end(), f.size() % 2 ? -1.0 : 1.0);
            for (const auto& [p, m] : f.entries()) {
                const double lx = std::log1p(1.0 / upper_geometric(p, m));
                const double w = 1.0 / static_cast<double>(*arith::checked_pow(p, m));
                const double r = std::exp(-log_sigma_ratio(p, m));
                double rj = 1.0;
                for (unsigned jj = 1; jj <= j_max; ++jj) {
                    rj *= r;
                    prod[jj] *= w * rj * std::expm1(jj * lx);
                }
            }
            for (std::size_t i = 0; i < channels; ++i)
                if (f.n() <= configs[i].N) acc[i].add(prod[configs[i].j]);
        });
        numerics::BlockResult out;
        for (auto& a : acc) out.push_back(a.certified(kTermUlps));
        return out;
    };

    const numerics::BlockSumPlan plan{1, static_cast<std::int64_t>(n_max), opt.block_size};
    std::atomic<std::int64_t> computed{0};
    const numerics::BlockFn guarded = [&](std::int64_t lo, std::int64_t hi) {
        if (opt.max_new_blocks && computed >= *opt.max_new_blocks)
            throw Interrupted("beta: stopped after " + std::to_string(computed.load()) + " new blocks");
        auto r = fn(lo, hi);
        ++computed;
        return r;
    };

    if (!opt.checkpoint_dir) return numerics::reduce_blocks(plan, channels, guarded, opt.workers);

    nlohmann::json key{{"verb", "beta-odd-sums"}, {"format", 1}, {"block_size", opt.block_size}};
    for (const auto& c : configs) key["channels"].push_back({{"j", c.j}, {"N", c.N}});
    const checkpoint::Directory dir(*opt.checkpoint_dir, "beta", checkpoint::config_hash(key));
    std::vector<std::int64_t> loaded;
    numerics::BlockStore store;
    store.load = [&](std::int64_t b) {
        const auto [lo, hi] = plan.block(b);
        auto r = dir.load(lo, hi);
        if (r && r->size() != channels) r.reset();
        if (r) loaded.push_back(b);
        return r;
    };
    store.save = [&](std::int64_t b, const numerics::BlockResult& r) {
        const auto [lo, hi] = plan.block(b);
        dir.save(lo, hi, r);
    };
    auto result = numerics::reduce_blocks(plan, channels, guarded, opt.workers, &store);
    if (!loaded.empty()) {
        // Resume check: one stored block must be reproduced bit for bit.
        const auto [lo, hi] = plan.block(loaded.front());
        if (!(fn(lo, hi) == *dir.load(lo, hi)))
            throw ResourceError("checkpoint block [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                "] does not reproduce; remove " + dir.file_for(lo, hi).parent_path().string());
    }
    return result;
}

std::vector<CertifiedValue> main_terms(std::span<const BetaJConfig> configs, const BetaOptions& opt) {
    const auto sums = odd_sums(configs, opt);
    std::vector<CertifiedValue> out;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto& c = configs[i];
        out.push_back(numerics::divide(numerics::multiply(two_beta2_minus_one(c.j, c.K2), sums[i]), c.j));
    }
    return out;
}

CertifiedValue main_term(const BetaJConfig& config, const BetaOptions& opt) {
    return main_terms(std::span(&config, 1), opt)[0];
}

CertifiedValue main_term_direct(const BetaJConfig& config) {
    config.validate();
    CompensatedSum acc;
    primes::factored_range(1, config.N / 2, true).for_each([&](const arith::Factorization& f) {
        const double b = beta_signed(config.j, f);
        u64 twok = 2;
        for (unsigned k = 1; twok * f.n() <= config.N; ++k, twok *= 2) acc.add(g_prime_power(config.j, 2, k) * b);
    });
    return numerics::divide(acc.certified(kTermUlps), config.j);
}

SCorrection s_correction(const BetaJConfig& config, const SetOptions& opt) {
    config.validate();
    SCorrection out;
    if (config.j == 1 && config.e == 1.0) return out;
    CompensatedSum acc;
    const auto summary = for_each_s_element(
        config.j, config.e,
        [&](const SElement& el) {
            if (!el.exact || el.n > config.N) {
                acc.add(el.beta_signed());
                ++out.above_N;
            }
        },
        opt);
    out.s_size = summary.size;
    out.M = summary.M;
    out.value = numerics::divide(numerics::multiply(two_beta2_minus_one(config.j, config.K2), acc.certified(kTermUlps)),
                                 config.j);
    return out;
}

BetaReport beta_lower(std::span<const BetaJConfig> configs, const BetaOptions& opt) {
    BetaReport report;
    report.block_size = opt.block_size;
    const auto mains = main_terms(configs, opt);
    CertifiedValue total{};
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto& c = configs[i];
        BetaJReport r;
        r.config = c;
        r.main_term = mains[i];
        const auto sc = s_correction(c, opt.sets);
        r.s_set_size = sc.s_size;
        r.s_above_N = sc.above_N;
        r.M = sc.M;
        r.s_correction = sc.value;
        r.error_term = error_term(c.j, c.e, c.N);
        r.tail_bound = tail_bound(c.j, c.e, c.N);
        r.contribution_lower = (r.main_term + r.s_correction - CertifiedValue{r.tail_bound, 0}).lower();
        total = total + CertifiedValue{r.contribution_lower, 0};
        report.main_total += r.main_term.value;
        report.error_total += r.error_term;
        report.per_j.push_back(r);
    }
    report.lower_bound = total.lower();
    return report;
}

std::vector<double> default_exponents() { return {1.0, 0.75, 0.60, 0.48, 0.35, 0.28, 0.20, 0.15, 0.03}; }

std::vector<BetaJConfig> default_configs(unsigned J, u64 N) {
    const auto es = default_exponents();
    if (J < 1 || J > es.size()) throw ParameterError("beta: J must be between 1 and 9 for the default schedule");
    std::vector<BetaJConfig> out;
    for (unsigned j = 1; j <= J; ++j) out.push_back({j, N, es[j - 1], 64});
    return out;
}

nlohmann::json to_json(const BetaJConfig& c) { return {{"j", c.j}, {"N", c.N}, {"e", c.e}, {"K2", c.K2}}; }

namespace {
nlohmann::json cv(const CertifiedValue& v) { return {{"value", v.value}, {"error_radius", v.error_radius}}; }
}  // namespace

nlohmann::json to_json(const BetaJReport& r) {
    return {{"config", to_json(r.config)},
            {"main_term", cv(r.main_term)},
            {"s_set_size", r.s_set_size},
            {"s_elements_above_N", r.s_above_N},
            {"M", r.M},
            {"s_correction", cv(r.s_correction)},
            {"error_term", r.error_term},
            {"tail_bound", r.tail_bound},
            {"contribution_lower", r.contribution_lower}};
}

nlohmann::json to_json(const BetaReport& r) {
    nlohmann::json per = nlohmann::json::array();
    for (const auto& x : r.per_j) per.push_back(to_json(x));
    return {{"per_j", per},
            {"main_total", r.main_total},
            {"error_total", r.error_total},
            {"lower_bound", r.lower_bound},
            {"block_size", r.block_size}};
}

std::string csv_header() {
    return "j,N,e,main_term,main_radius,s_set_size,s_correction,error_term,tail_bound,contribution_lower";
}

std::string csv_row(const BetaJReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << r.config.j << ',' << r.config.N << ',' << r.config.e << ',' << r.main_term.value << ','
       << r.main_term.error_radius << ',' << r.s_set_size << ',' << r.s_correction.value << ',' << r.error_term << ','
       << r.tail_bound << ',' << r.contribution_lower;
    return os.str();
}

}  // namespace alq::beta
