#pragma once

#include <cstddef>

#include "stoplab/generic_stopping.hpp"
#include "stoplab/payoff.hpp"

namespace stoplab {

/// Relative-rank chain on {1..n} u {absorbed}. State k means option k is the
/// best seen so far; the next such option is j > k with probability
/// k / (j (j-1)), and none arrives with probability k / n.
class CandidateChain {
 public:
  explicit CandidateChain(int n);

  int n() const noexcept { return n_; }

  /// p(j | k) for 1 <= k < j <= n, zero otherwise.
  double transition(int from, int to) const;
  /// Probability of never seeing another candidate after k.
  double absorption(int from) const;

  /// The chain as a homogeneous generic problem with horizon n. Generic state
  /// k-1 is candidate k; generic state n is the absorbing state, which pays
  /// -gamma. Stopping at candidate k pays (alpha+beta) k/n - beta.
  GenericStoppingProblem to_problem(const PayoffParams& params) const;

  static constexpr std::size_t generic_state(int k) noexcept {
    return static_cast<std::size_t>(k - 1);
  }
  std::size_t absorbing_state() const noexcept { return static_cast<std::size_t>(n_); }

 private:
  int n_;
};

}  // namespace stoplab
