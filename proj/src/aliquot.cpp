#include "alq/aliquot.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "alq/errors.hpp"

namespace alq::aliquot {

namespace {

bool fits_u64(const BigInt& n) { return mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

arith::u64 to_u64(const BigInt& n) {
    arith::u64 v = 0;
    mpz_export(&v, nullptr, -1, sizeof v, 0, 0, n.get_mpz_t());
    return v;
}

BigInt from_u64(arith::u64 v) {
    BigInt r;
    mpz_import(r.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
    return r;
}

// Brent-Pollard rho on an odd composite; returns 0 on budget exhaustion.
BigInt rho_brent(const BigInt& n, arith::u64& budget) {
    constexpr arith::u64 kBatch = 128;
    for (unsigned long c = 1; budget > 0; ++c) {
        BigInt y = 2, x = 2, ys = 2, q = 1, g = 1, t;
        arith::u64 r = 1;
        auto step = [&](BigInt& v) {
            v = v * v + c;
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
        };
        do {
            x = y;
            for (arith::u64 i = 0; i < r; ++i) step(y);
            arith::u64 k = 0;
            do {
                ys = y;
                const arith::u64 lim = std::min(kBatch, r - k);
                for (arith::u64 i = 0; i < lim; ++i) {
                    step(y);
                    t = abs(x - y);
                    q *= t;
                    mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += lim;
                budget = budget > lim ? budget - lim : 0;
            } while (k < r && g == 1 && budget > 0);
            r <<= 1;
        } while (g == 1 && budget > 0);
        if (g == n) {
            do {
                step(ys);
                t = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != 1 && g != n) return g;
    }
    return 0;
}

void split(const BigInt& n, arith::u64& budget, std::map<BigInt, unsigned>& primes, bool& complete) {
    if (n == 1) return;
    if (fits_u64(n)) {
        auto r = arith::factorize(to_u64(n), {budget});
        for (const auto& [p, e] : r.factors.entries()) primes[from_u64(p)] += e;
        if (!r.complete()) complete = false;
        return;
    }
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) > 0) {
        ++primes[n];
        return;
    }
    BigInt root;
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
        split(root, budget, primes, complete);
        split(root, budget, primes, complete);
        return;
    }
    const BigInt d = budget > 0 ? rho_brent(n, budget) : BigInt(0);
    if (d == 0) {
        complete = false;
        return;
    }
    split(d, budget, primes, complete);
    split(BigInt(n / d), budget, primes, complete);
}

bool is_square(const BigInt& n) { return mpz_perfect_square_p(n.get_mpz_t()) != 0; }

bool is_square_or_twice_square(const BigInt& n) {
    if (is_square(n)) return true;
    if (mpz_even_p(n.get_mpz_t())) {
        const BigInt half = n / 2;
        return is_square(half);
    }
    return false;
}

}  // namespace

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::terminates_at_1: return "terminates_at_1";
        case Outcome::cycle: return "cycle";
        case Outcome::effort_exhausted: return "effort_exhausted";
        case Outcome::step_limit_reached: return "step_limit_reached";
    }
    return "unknown";
}

BigFactorResult factorize_big(const BigInt& n, arith::Effort effort) {
    if (n < 1) throw ParameterError("factorize_big: n must be positive");
    BigFactorResult out;
    std::map<BigInt, unsigned> primes;
    arith::u64 budget = effort.rho_iterations;
    BigInt rest = n;
    if (!fits_u64(rest)) {
        for (unsigned long p = 2; p < (1u << 16) && !fits_u64(rest); p += (p == 2 ? 1 : 2)) {
            while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
                rest /= p;
                ++primes[BigInt(p)];
            }
        }
    }
    split(rest, budget, primes, out.complete);
    for (auto& [p, e] : primes) out.factors.push_back({p, e});
    return out;
}

bool aliquot_sum_big(const BigInt& n, BigInt& out, arith::Effort effort) {
    if (n < 1) throw ParameterError("aliquot_sum_big: n must be positive");
    if (n == 1) {
        out = 0;
        return true;
    }
    const auto f = factorize_big(n, effort);
    if (!f.complete) return false;
    BigInt sigma = 1;
    for (const auto& [p, e] : f.factors) {
        BigInt pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e + 1);
        sigma *= (pe - 1) / (p - 1);
    }
    out = sigma - n;
    return true;
}

TrajectoryRecord trace(const BigInt& start, std::size_t max_steps, arith::Effort effort) {
    if (start < 2) throw ParameterError("trace: start must be >= 2");
    TrajectoryRecord rec;
    rec.start = start;
    rec.terms.push_back(start);
    std::map<BigInt, std::size_t> seen{{start, 0}};
    for (std::size_t step = 0;; ++step) {
        const BigInt& cur = rec.terms.back();
        const std::size_t k = rec.terms.size() - 1;
        if (cur == 1) {
            rec.classification = {Outcome::terminates_at_1};
            return rec;
        }
        if (is_square_or_twice_square(cur)) rec.parity_events.push_back(k);
        if (step >= max_steps) {
            rec.classification = {Outcome::step_limit_reached};
            return rec;
        }
        BigInt next;
        if (!aliquot_sum_big(cur, next, effort)) {
            rec.classification = {Outcome::effort_exhausted};
            return rec;
        }
        rec.terms.push_back(next);
        const auto [it, fresh] = seen.emplace(next, k + 1);
        if (!fresh) {
            rec.classification = {Outcome::cycle, k + 1 - it->second, it->second};
            return rec;
        }
    }
}

nlohmann::json to_json(const TrajectoryRecord& r) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : r.terms) terms.push_back(t.get_str());
    nlohmann::json cls{{"kind", to_string(r.classification.outcome)}};
    if (r.classification.outcome == Outcome::cycle) {
        cls["length"] = r.classification.cycle_length;
        cls["entry"] = r.classification.cycle_entry;
    }
    return {{"start", r.start.get_str()},
            {"terms", terms},
            {"classification", cls},
            {"parity_events", r.parity_events}};
}

}  // namespace alq::aliquot
