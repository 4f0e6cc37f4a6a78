#pragma once

#include <vector>

#include "stoplab/payoff.hpp"

namespace stoplab {

/// Marker for the absorbing "no further candidate" state in immediate_reward().
inline constexpr int kAbsorbed = 0;

/// Expected reward of stopping at candidate s: (alpha+beta) s/n - beta.
/// s == kAbsorbed yields -gamma.
double immediate_reward(const PayoffParams& params, int n, int s);

/// Exact solution of the penalized best-choice problem. Vectors are indexed
/// by candidate state k = 1..n at position k-1.
struct Solution {
  PayoffParams params;
  int n = 0;
  int k_star = 1;
  std::vector<double> values;
  std::vector<double> g;
  std::vector<double> durations;

  double value(int k) const { return values.at(static_cast<std::size_t>(k - 1)); }
  double reward(int k) const { return g.at(static_cast<std::size_t>(k - 1)); }
  double duration(int k) const { return durations.at(static_cast<std::size_t>(k - 1)); }
};

/// Backward induction over the candidate chain from V(n) = alpha. Continuation
/// sums run over descending j with compensation. A state stops when its
/// immediate reward weakly dominates continuation (1e-12 tie band).
Solution dp_solve(const PayoffParams& params, int n);

/// Largest change produced by re-applying one Bellman sweep to solution.values.
double bellman_residual(const Solution& solution);

/// Smallest k in 1..n with H_{k,n} <= ratio (so H_{k-1,n} >= ratio >= H_{k,n},
/// with H_{0,n} = +inf). Exact ties stop, matching dp_solve.
int threshold(const PayoffParams& params, int n);

/// V(k) from the closed form: (alpha+beta) k/n - beta for k >= k*, and
/// ((k*-1)/n)((alpha+beta) H_{k*-1,n} + beta - gamma) - beta below k*.
double closed_form_value(const PayoffParams& params, int n, int k);

/// closed_form_value() for k = 1..n (position k-1), in O(n log n).
std::vector<double> closed_form_table(const PayoffParams& params, int n);

/// Exact performance of "reject the first r-1 options, then take the first
/// candidate", computed by a backward recursion over the candidate chain.
struct ThresholdPerformance {
  int r = 1;
  double expected_payoff = 0.0;
  double p_win = 0.0;
  double p_wrong = 0.0;
  double p_nopick = 0.0;
  double expected_duration = 0.0;
};

ThresholdPerformance evaluate_threshold(const PayoffParams& params, int n, int r);

}  // namespace stoplab
