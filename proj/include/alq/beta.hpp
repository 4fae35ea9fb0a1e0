#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "alq/arith.hpp"
#include "alq/numerics.hpp"

namespace alq::beta {

using arith::u64;
using numerics::CertifiedValue;

// ---------------------------------------------------------------------------
// Multiplicative building blocks.
//
//   g_j(n)   = (1/n) (n / sigma(n))^j
//   h_j(p^m) = (1 + 1/(p sigma(p^(m-1))))^j - 1,   h_j(1) = 1
//   beta_j(n) = (-1)^nu(n) g_j(n) h_j(n)        (n odd)
//
// so that prod_{p odd} beta_j(p) = sum_{n odd} beta_j(n).
// ---------------------------------------------------------------------------

double g_prime_power(unsigned j, u64 p, unsigned m);
double h_prime_power(unsigned j, u64 p, unsigned m);
// sum_{k=1}^{j} C(j,k) / (p sigma(p^(m-1)))^k, evaluated term by term.
double h_prime_power_binomial(unsigned j, u64 p, unsigned m);

double g(unsigned j, const arith::Factorization& f);
double h(unsigned j, const arith::Factorization& f);
// Requires odd n.
double beta_signed(unsigned j, const arith::Factorization& f);

// 2 beta_j(2) - 1 = sum_{m>=1} g_j(2^m), truncated at K2 with the tail folded
// into the radius.
CertifiedValue two_beta2_minus_one(unsigned j, unsigned K2 = 64);

// beta_j(p) = (1 - 1/p)(1 + sum_{m>=1} p^-m (p^m/sigma(p^m))^j), truncated.
CertifiedValue beta_prime(unsigned j, u64 p, unsigned depth);

// ---------------------------------------------------------------------------
// Exceptional sets.
// ---------------------------------------------------------------------------

struct PrimePowerEntry {
    u64 p = 0;
    unsigned m = 0;
    double h_value = 0;
    double g_value = 0;
    double weight = 0;  // h_j(p^m) * p^(m e)
};

// Membership comparisons can be widened by a relative `slack`, yielding a
// superset; slack = 0 follows the printed inequalities exactly.
struct SetOptions {
    bool odd_only = true;
    double slack = 0.0;
    u64 max_scan = 2'000'000'000ull;       // cap on the prime-power cutoff X
    u64 max_elements = 4'000'000'000ull;  // cap on enumerated S elements
};

// T_j^{e,c} = {(p,m) : h_j(p^m) >= 1/(c p^(me))}, complete. Scans p^m up to
// X = (2jc)^(1/(1-e)); beyond X, h_j(p^m) <= 2j/p^m < 1/(c p^(me)).
std::vector<PrimePowerEntry> t_set(unsigned j, double e, double c, const SetOptions& opt = {});

// M_{j,e} = max_n h_j(n) n^e, a product over the primes of T_j^{e,1}.
double m_const(unsigned j, double e, const SetOptions& opt = {});

struct SElement {
    u64 n = 0;           // saturates at UINT64_MAX
    bool exact = true;   // false when n does not fit 64 bits
    double log_n = 0;
    double h_value = 0;
    double g_value = 0;
    double weight = 0;   // h_j(n) n^e
    unsigned nu = 0;
    std::span<const arith::PrimePower> factors;

    double beta_signed() const { return (nu % 2 ? -1.0 : 1.0) * g_value * h_value; }
};

struct SSetSummary {
    u64 size = 0;
    u64 nodes_visited = 0;
    double M = 1.0;
    std::size_t t_size = 0;
};

// S_{j,e} = {n : h_j(n) > n^-e}, enumerated depth-first over products of
// T_j^{e,M} prime powers. For j = 1, e = 1 the set is empty.
SSetSummary for_each_s_element(unsigned j, double e, const std::function<void(const SElement&)>& visit,
                               const SetOptions& opt = {});

struct SMember {
    u64 n;
    double h_value;
    std::vector<arith::PrimePower> factors;
};

// Materialized S_{j,e} (sorted by n) for small sets; throws ResourceError when
// the set exceeds opt.max_elements or contains a member above 64 bits.
std::vector<SMember> s_set(unsigned j, double e, const SetOptions& opt = {});

// ---------------------------------------------------------------------------
// Lower bound for beta.
// ---------------------------------------------------------------------------

struct BetaJConfig {
    unsigned j = 1;
    u64 N = 10'000'000;  // N_j, even
    double e = 1.0;      // e_j in (0,1); 1 only for j = 1
    unsigned K2 = 64;

    void validate() const;
};

// (2 j e N^e)^-1 (2/3)^j
double error_term(unsigned j, double e, u64 N);
// Same quantity with the odd-integer sum bounded rigorously:
// (1/j)(2/3)^j [(N+1)^(-1-e) + 1/(2e (N+1)^e)]. Always >= error_term.
double tail_bound(unsigned j, double e, u64 N);
// Bound for the region {n_o <= N, 2^k n_o > N} that separates the factorized
// main term from the literal sum over even n <= N.
double mixed_region_bound(unsigned j, double e, u64 N, double M);

struct BetaOptions {
    unsigned workers = 1;
    std::int64_t block_size = 10'000'000;
    std::optional<std::filesystem::path> checkpoint_dir;
    SetOptions sets{true, 1e-9};
    // Stop with an Interrupted exception after computing this many new blocks.
    std::optional<std::int64_t> max_new_blocks;
};

struct Interrupted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// (1/j) (2 beta_j(2) - 1) sum_{odd n <= N_j} beta_j(n).
CertifiedValue main_term(const BetaJConfig& config, const BetaOptions& opt = {});
// Batched over several j in one sieve pass.
std::vector<CertifiedValue> main_terms(std::span<const BetaJConfig> configs, const BetaOptions& opt = {});
// Odd sums sum_{odd n <= N_j} beta_j(n) only (no 2-adic factor, no 1/j).
std::vector<CertifiedValue> odd_sums(std::span<const BetaJConfig> configs, const BetaOptions& opt = {});

// (1/j) sum_{even n <= N} g_j(2^k) beta_j(n_o), the literal main-term sum.
CertifiedValue main_term_direct(const BetaJConfig& config);

struct SCorrection {
    CertifiedValue value;  // (1/j)(2 beta_j(2) - 1) sum_{n in S, n > N_j} beta_j(n)
    u64 s_size = 0;
    u64 above_N = 0;
    double M = 1.0;
};

SCorrection s_correction(const BetaJConfig& config, const SetOptions& opt = {1, 1e-9});

struct BetaJReport {
    BetaJConfig config;
    CertifiedValue main_term;
    u64 s_set_size = 0;
    u64 s_above_N = 0;
    double M = 1.0;
    CertifiedValue s_correction;
    double error_term = 0;   // printed formula
    double tail_bound = 0;   // what is actually subtracted
    double contribution_lower = 0;
};

struct BetaReport {
    std::vector<BetaJReport> per_j;
    double main_total = 0;
    double error_total = 0;
    double lower_bound = 0;
    std::int64_t block_size = 0;
};

BetaReport beta_lower(std::span<const BetaJConfig> configs, const BetaOptions& opt = {});

// e_j used in the published table for j = 1..9.
std::vector<double> default_exponents();
std::vector<BetaJConfig> default_configs(unsigned J = 8, u64 N = 10'000'000);

nlohmann::json to_json(const BetaJConfig& c);
nlohmann::json to_json(const BetaJReport& r);
nlohmann::json to_json(const BetaReport& r);
std::string csv_header();
std::string csv_row(const BetaJReport& r);

}  // namespace alq::beta
