#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "alq/numerics.hpp"

namespace alq::means {

enum class Residue { all, even, odd };

std::string to_string(Residue c);
Residue residue_from_string(const std::string& s);  // throws ParameterError

// Limits of the arithmetic mean of s(n)/n: pi^2/6 - 1, 5pi^2/24 - 1, 3pi^2/24 - 1.
double closed_form(Residue c);

struct MeanOptions {
    unsigned workers = 1;
    std::int64_t block_size = 1'000'000;
};

// (1/N) sum over the first N members of the class (n, 2n or 2n-1) of s(m)/m;
// s(1)/1 contributes 0.
numerics::CertifiedValue arithmetic_mean(Residue c, std::int64_t N, const MeanOptions& opt = {});

// Average of log(s(m)/m) over class members 1 < m <= N. For the even class this
// is (1/floor(N/2)) * sum_{2n <= N} log(s(2n)/(2n)).
numerics::CertifiedValue log_mean(Residue c, std::int64_t N, const MeanOptions& opt = {});

struct MeanReport {
    Residue residue = Residue::even;
    std::int64_t N = 0;
    std::int64_t samples = 0;  // class members m <= N used for both means
    numerics::CertifiedValue arithmetic_mean;
    numerics::CertifiedValue log_mean;
    double closed_form_limit = 0.0;
};

// Both means over the class members m <= N, in one pass.
MeanReport mean_report(Residue c, std::int64_t N, const MeanOptions& opt = {});

nlohmann::json to_json(const MeanReport& r);
std::string csv_header();
std::string csv_row(const MeanReport& r);

}  // namespace alq::means
