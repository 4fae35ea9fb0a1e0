#pragma once

#include <string>
#include <vector>

namespace alq::selftest {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

Check sigma_oracle_equivalence(unsigned long limit = 10'000);
Check product_sum_identity();
Check h_closed_form_vs_binomial();
Check s_set_fixtures();
Check trajectory_fixtures();
Check thread_count_identity();

std::vector<Check> run_all();

}  // namespace alq::selftest
