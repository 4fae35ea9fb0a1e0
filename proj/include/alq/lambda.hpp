#pragma once

#include "json.hpp"

#include "alq/alpha.hpp"
#include "alq/beta.hpp"

namespace alq {

// lambda <= alpha_upper - beta_lower, mu = exp(lambda); both rounded upward.
struct LambdaBound {
    double lambda_upper = 0;
    double mu_upper = 1;
};

LambdaBound combine_lambda(double alpha_upper, double beta_lower);

struct LambdaReport {
    alpha::AlphaResult alpha;
    beta::BetaReport beta;
    LambdaBound bound;
};

LambdaReport combine_lambda(const alpha::AlphaResult& a, const beta::BetaReport& b);

nlohmann::json to_json(const LambdaReport& r);

}  // namespace alq
