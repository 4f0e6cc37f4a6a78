#include "stoplab/asymptotics.hpp"

#include <cmath>

#include "stoplab/error.hpp"

namespace stoplab {

AsymptoticSummary asymptotics(const PayoffParams& params) {
  params.validate();
  AsymptoticSummary a;
  a.ratio = params.ratio();
  const double decay = std::exp(-a.ratio);
  a.t_star = decay;
  a.v_limit = (params.alpha + params.beta) * decay - params.beta;
  a.p_win = a.ratio * decay;
  a.mean_duration_fraction = (1.0 + a.ratio) * decay;
  return a;
}

double asymptotic_duration(const PayoffParams& params, double t) {
  params.validate();
  if (!(t > 0.0 && t <= 1.0)) fail(ErrorCode::kOutOfRange, "t must lie in (0, 1]");
  const double t_star = std::exp(-params.ratio());
  const double s = t > t_star ? t : t_star;
  return -s * std::log(s) + s;
}

}  // namespace stoplab
