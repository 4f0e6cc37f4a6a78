#include "stoplab/payoff.hpp"

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "stoplab/error.hpp"

namespace stoplab {

void PayoffParams::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma)) {
    fail(ErrorCode::kInvalidArgument, "payoff parameters must be finite");
  }
  if (!(alpha > 0.0)) {
    fail(ErrorCode::kInvalidArgument,
         "alpha must be > 0 (got " + std::to_string(alpha) + ")");
  }
  if (beta < 0.0) {
    fail(ErrorCode::kInvalidArgument,
         "beta must be >= 0 (got " + std::to_string(beta) + ")");
  }
  if (gamma < 0.0) {
    fail(ErrorCode::kInvalidArgument,
         "gamma must be >= 0 (got " + std::to_string(gamma) + ")");
  }
}

Json params_to_json(const PayoffParams& p) {
  Json j;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["gamma"] = p.gamma;
  return j;
}

PayoffParams params_from_json(const Json& j) {
  return {j.at("alpha").get<double>(), j.at("beta").get<double>(), j.at("gamma").get<double>()};
}

}  // namespace stoplab
