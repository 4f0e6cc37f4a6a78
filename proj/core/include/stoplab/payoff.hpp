#pragma once

#include "stoplab/json.hpp"

namespace stoplab {

/// Reward alpha for picking the overall best, penalty beta for picking any
/// other option, penalty gamma for ending without a pick.
struct PayoffParams {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.0;

  /// Throws Error(kInvalidArgument) unless alpha > 0, beta >= 0, gamma >= 0
  /// and all three are finite.
  void validate() const;

  /// (alpha + gamma) / (alpha + beta); governs threshold, win probability and
  /// duration asymptotics.
  double ratio() const noexcept { return (alpha + gamma) / (alpha + beta); }

  static PayoffParams classical() noexcept { return {1.0, 0.0, 0.0}; }

  friend bool operator==(const PayoffParams&, const PayoffParams&) = default;
};

Json params_to_json(const PayoffParams& p);
/// Reads "alpha", "beta", "gamma"; does not validate.
PayoffParams params_from_json(const Json& j);

}  // namespace stoplab
