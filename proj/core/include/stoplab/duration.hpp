#pragma once

#include "stoplab/payoff.hpp"

namespace stoplab {

/// Which index pivots the two branches of the expected-duration formula m(k).
enum class DurationIndexing {
  /// Pivot at k*-1, the last state the optimal rule rejects unconditionally.
  /// m(0) is then the exact mean decision time of the k* rule.
  kLastRejected,
  /// Pivot at k*, as the formula is commonly printed. Over-states the mean
  /// decision time by H_{k*,n}; kept for comparison.
  kAsPrinted,
};

/// m(k) = k H_{k,n} + k for k above the pivot, and m(pivot) for k <= pivot.
/// 0 <= k <= n; k = 0 is the start of the process. k H_{k,n} + k is taken
/// as its limit 1 at k = 0.
double expected_duration(const PayoffParams& params, int n, int k,
                         DurationIndexing indexing = DurationIndexing::kLastRejected);

/// Mean decision time from the start of the process under the optimal rule.
double mean_decision_time(const PayoffParams& params, int n,
                          DurationIndexing indexing = DurationIndexing::kLastRejected);

/// sum_{j>k} k/(j(j-1)) j + n (1 - sum_{j>k} k/(j(j-1))): the expected time of
/// the next candidate after k, or n if none arrives. 1 <= k <= n.
double duration_sum_form(int n, int k);

/// k H_{k,n} + k, the simplified form of duration_sum_form().
double duration_closed_form(int n, int k);

/// ((k*-1)/n) H_{k*,n}, exactly as printed.
double stop_probability(const PayoffParams& params, int n);

}  // namespace stoplab
