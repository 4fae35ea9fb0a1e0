#include "alq/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "alq/aliquot.hpp"
#include "alq/arith.hpp"
#include "alq/beta.hpp"
#include "alq/numerics.hpp"
#include "alq/primes.hpp"

namespace alq::selftest {

namespace {

arith::Factorization from_powers(const std::vector<std::pair<arith::u64, unsigned>>& pw) {
    arith::Factorization f;
    for (auto [p, m] : pw)
        if (m > 0) f.push(p, m);
    return f;
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

}  // namespace

Check sigma_oracle_equivalence(unsigned long limit) {
    Check c{"sigma(factorize(n)) == sigma_oracle(n), n <= " + std::to_string(limit), true, ""};
    for (arith::u64 n = 1; n <= limit; ++n) {
        if (arith::sigma(arith::factor(n)) != arith::sigma_oracle(n)) {
            c.passed = false;
            c.detail = "mismatch at n = " + std::to_string(n);
            return c;
        }
    }
    return c;
}

Check product_sum_identity() {
    Check c{"prod_p truncated beta_j(p) == sum over smooth odd n of beta_j(n), j <= 4, P in {5, 11}", true, ""};
    constexpr unsigned D = 5;
    double worst = 0;
    for (unsigned j = 1; j <= 4; ++j) {
        for (arith::u64 P : {5ull, 11ull}) {
            std::vector<arith::u64> ps;
            for (arith::u64 p = 3; p <= P; p += 2)
                if (arith::is_prime(p)) ps.push_back(p);
            double product = 1;
            for (auto p : ps) {
                double local = 0;
                for (unsigned m = 0; m <= D; ++m) local += beta::beta_signed(j, from_powers({{p, m}}));
                product *= local;
            }
            // odometer over exponent vectors
            std::vector<unsigned> ex(ps.size(), 0);
            numerics::CompensatedSum sum;
            for (;;) {
                std::vector<std::pair<arith::u64, unsigned>> pw;
                for (std::size_t i = 0; i < ps.size(); ++i) pw.emplace_back(ps[i], ex[i]);
                sum.add(beta::beta_signed(j, from_powers(pw)));
                std::size_t i = 0;
                while (i < ex.size() && ex[i] == D) ex[i++] = 0;
                if (i == ex.size()) break;
                ++ex[i];
            }
            worst = std::max(worst, std::abs(product - sum.value()));
        }
    }
    c.passed = worst <= 1e-14;
    c.detail = "max |difference| = " + sci(worst);
    return c;
}

Check h_closed_form_vs_binomial() {
    Check c{"h_j closed form == binomial sum (relative), j <= 6, p^m <= 1000", true, ""};
    double worst = 0;
    for (unsigned j = 1; j <= 6; ++j) {
        for (arith::u64 p = 2; p <= 1000; ++p) {
            if (!arith::is_prime(p)) continue;
            arith::u64 pm = p;
            for (unsigned m = 1; pm <= 1000; ++m, pm *= p) {
                const double a = beta::h_prime_power(j, p, m);
                const double b = beta::h_prime_power_binomial(j, p, m);
                worst = std::max(worst, std::abs(a - b) / b);
            }
        }
    }
    c.passed = worst <= 1e-15;
    c.detail = "max relative difference = " + sci(worst);
    return c;
}

Check s_set_fixtures() {
    Check c{"S_{1,1} empty; S_{2,0.5} (odd) = {3,15,21,105} with every other divisor of 105 excluded", true, ""};
    std::size_t count11 = 0;
    beta::for_each_s_element(1, 1.0, [&](const beta::SElement&) { ++count11; });
    const auto s = beta::s_set(2, 0.5);
    std::vector<arith::u64> got;
    for (const auto& m : s) got.push_back(m.n);
    const std::vector<arith::u64> want{3, 15, 21, 105};
    std::ostringstream detail;
    for (arith::u64 d : {1ull, 3ull, 5ull, 7ull, 15ull, 21ull, 35ull, 105ull}) {
        const auto f = arith::factor(d);
        const bool member = beta::h(2, f) * std::sqrt(static_cast<double>(d)) > 1.0 && d > 1;
        const bool listed = std::find(got.begin(), got.end(), d) != got.end();
        if (member != listed) {
            c.passed = false;
            detail << "divisor " << d << " misclassified; ";
        }
    }
    if (count11 != 0 || got != want) c.passed = false;
    detail << "|S_{1,1}| = " << count11 << ", |S_{2,0.5}| = " << got.size();
    c.detail = detail.str();
    return c;
}

Check trajectory_fixtures() {
    Check c{"aliquot trajectories of 12, 6, 220, 25", true, ""};
    using aliquot::Outcome;
    auto terms = [](const aliquot::TrajectoryRecord& r) {
        std::vector<std::string> v;
        for (const auto& t : r.terms) v.push_back(t.get_str());
        return v;
    };
    const auto t12 = aliquot::trace(12, 50);
    const auto t6 = aliquot::trace(6, 50);
    const auto t220 = aliquot::trace(220, 50);
    const auto t25 = aliquot::trace(25, 50);
    const bool ok12 = terms(t12) == std::vector<std::string>{"12", "16", "15", "9", "4", "3", "1"} &&
                      t12.classification.outcome == Outcome::terminates_at_1 &&
                      t12.parity_events == std::vector<std::size_t>{1, 3, 4};
    const bool ok6 = t6.classification.outcome == Outcome::cycle && t6.classification.cycle_length == 1 &&
                     t6.classification.cycle_entry == 0;
    const bool ok220 = terms(t220) == std::vector<std::string>{"220", "284", "220"} &&
                       t220.classification.outcome == Outcome::cycle && t220.classification.cycle_length == 2;
    const bool ok25 = terms(t25) == std::vector<std::string>{"25", "6", "6"} &&
                      t25.classification.outcome == Outcome::cycle && t25.classification.cycle_entry == 1 &&
                      t25.parity_events == std::vector<std::size_t>{0};
    c.passed = ok12 && ok6 && ok220 && ok25;
    c.detail = std::string("12:") + (ok12 ? "ok" : "FAIL") + " 6:" + (ok6 ? "ok" : "FAIL") +
               " 220:" + (ok220 ? "ok" : "FAIL") + " 25:" + (ok25 ? "ok" : "FAIL");
    return c;
}

Check thread_count_identity() {
    Check c{"alpha and beta block sums bit-identical for 1 and 4 workers", true, ""};
    const numerics::BlockSumPlan plan{3, 200'000, 20'000};
    const numerics::BlockFn alpha_blocks = [](std::int64_t lo, std::int64_t hi) {
        numerics::CompensatedSum acc;
        primes::for_each_prime(lo, hi, [&](arith::u64 p) {
            const double x = 1.0 / static_cast<double>(p);
            acc.add(x * std::log1p(1.0 / (static_cast<double>(p))));
        });
        return numerics::BlockResult{acc.certified()};
    };
    const bool alpha_same = numerics::reduce_blocks(plan, 1, alpha_blocks, 1) ==
                            numerics::reduce_blocks(plan, 1, alpha_blocks, 4);
    const auto cfg = beta::default_configs(3, 100'000);
    beta::BetaOptions one, four;
    one.block_size = four.block_size = 10'000;
    four.workers = 4;
    const bool beta_same = beta::odd_sums(cfg, one) == beta::odd_sums(cfg, four);
    c.passed = alpha_same && beta_same;
    c.detail = std::string("alpha:") + (alpha_same ? "identical" : "DIFFERENT") +
               " beta:" + (beta_same ? "identical" : "DIFFERENT");
    return c;
}

std::vector<Check> run_all() {
    return {sigma_oracle_equivalence(), product_sum_identity(), h_closed_form_vs_binomial(),
            s_set_fixtures(),           trajectory_fixtures(),  thread_count_identity()};
}

}  // namespace alq::selftest
