#pragma once

#include "stoplab/payoff.hpp"

namespace stoplab {

/// n -> infinity limits of the optimal rule.
struct AsymptoticSummary {
  double ratio = 1.0;
  /// lim k*/n = exp(-ratio).
  double t_star = 0.0;
  /// lim V(1) = (alpha+beta) exp(-ratio) - beta.
  double v_limit = 0.0;
  /// ratio * exp(-ratio).
  double p_win = 0.0;
  /// lim E[duration]/n = (1 + ratio) exp(-ratio).
  double mean_duration_fraction = 0.0;
};

AsymptoticSummary asymptotics(const PayoffParams& params);

/// Limit of m(k)/n at k/n -> t: -t ln t + t above t*, frozen at t* below.
/// Requires t in (0, 1].
double asymptotic_duration(const PayoffParams& params, double t);

}  // namespace stoplab
