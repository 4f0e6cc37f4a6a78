#include "stoplab/duration.hpp"

#include <string>

#include "stoplab/error.hpp"
#include "stoplab/harmonic.hpp"
#include "stoplab/solver.hpp"
#include "stoplab/summation.hpp"

namespace stoplab {
namespace {

void require_state(int n, int k, int lowest) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "horizon n must be >= 1");
  if (k < lowest || k > n) {
    fail(ErrorCode::kOutOfRange, "state k=" + std::to_string(k) + " outside " +
                                     std::to_string(lowest) + ".." + std::to_string(n));
  }
}

double passed_duration(int n, int k) {
  if (k == 0) return 1.0;
  return static_cast<double>(k) * harmonic(k, n) + static_cast<double>(k);
}

}  // namespace

double expected_duration(const PayoffParams& params, int n, int k, DurationIndexing indexing) {
  require_state(n, k, 0);
  const int k_star = threshold(params, n);
  const int pivot = indexing == DurationIndexing::kLastRejected ? k_star - 1 : k_star;
  return passed_duration(n, k > pivot ? k : pivot);
}

double mean_decision_time(const PayoffParams& params, int n, DurationIndexing indexing) {
  return expected_duration(params, n, 0, indexing);
}

double duration_sum_form(int n, int k) {
  require_state(n, k, 1);
  CompensatedSum weighted;
  CompensatedSum mass;
  const double kk = k;
  for (int j = k + 1; j <= n; ++j) {
    const double jj = j;
    const double p = kk / (jj * (jj - 1.0));
    weighted.add(p * jj);
    mass.add(p);
  }
  return weighted.value() + static_cast<double>(n) * (1.0 - mass.value());
}

double duration_closed_form(int n, int k) {
  require_state(n, k, 1);
  return passed_duration(n, k);
}

double stop_probability(const PayoffParams& params, int n) {
  const int k_star = threshold(params, n);
  return static_cast<double>(k_star - 1) / static_cast<double>(n) * harmonic(k_star, n);
}

}  // namespace stoplab
