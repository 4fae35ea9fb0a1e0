#include "alq/lambda.hpp"

#include <cmath>

#include "alq/numerics.hpp"

namespace alq {

LambdaBound combine_lambda(double alpha_upper, double beta_lower) {
    const double d = alpha_upper - beta_lower;
    // exact residual of the subtraction
    const double bv = d - alpha_upper;
    const double err = (alpha_upper - (d - bv)) + (-beta_lower - bv);
    LambdaBound out;
    out.lambda_upper = err > 0 ? numerics::round_up(d) : d;
    // exp is faithfully rounded; one step up covers it.
    out.mu_upper = out.lambda_upper == 0 ? 1.0 : numerics::round_up(std::exp(out.lambda_upper));
    return out;
}

LambdaReport combine_lambda(const alpha::AlphaResult& a, const beta::BetaReport& b) {
    return {a, b, combine_lambda(a.upper_bound, b.lower_bound)};
}

nlohmann::json to_json(const LambdaReport& r) {
    return {{"alpha", alpha::to_json(r.alpha)},
            {"beta", beta::to_json(r.beta)},
            {"lambda_upper", r.bound.lambda_upper},
            {"mu_upper", r.bound.mu_upper}};
}

}  // namespace alq
