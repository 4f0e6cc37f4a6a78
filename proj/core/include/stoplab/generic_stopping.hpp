#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace stoplab {

struct Transition {
  std::size_t target = 0;
  double probability = 0.0;
};

using KernelRow = std::vector<Transition>;
/// One row per state: the law of X_{stage+1} given X_stage.
using StageKernel = std::vector<KernelRow>;
using StageStateFunction = std::function<double(int stage, std::size_t state)>;

/// Finite-horizon optimal stopping of a Markov chain on states 0..S-1 with
/// stages 0..horizon and payoff f(stage, state) on stopping. The kernel list
/// holds either one entry (time-homogeneous chain) or one entry per stage
/// transition 0->1, ..., horizon-1->horizon.
class GenericStoppingProblem {
 public:
  GenericStoppingProblem(int horizon, std::size_t num_states,
                         std::vector<StageKernel> kernels, StageStateFunction payoff);

  int horizon() const noexcept { return horizon_; }
  std::size_t num_states() const noexcept { return num_states_; }

  const StageKernel& kernel(int stage) const;
  double payoff(int stage, std::size_t state) const { return payoff_(stage, state); }

  /// Throws Error(kInvalidArgument) if any row has a negative entry or does not
  /// sum to 1 within 1e-12.
  void validate_kernel() const;

 private:
  int horizon_;
  std::size_t num_states_;
  std::vector<StageKernel> kernels_;
  StageStateFunction payoff_;
};

/// E[f(stage+1, X_{stage+1}) | X_stage = state]. Requires stage < horizon.
double mean_operator(const GenericStoppingProblem& problem, const StageStateFunction& f,
                     int stage, std::size_t state);

/// max{f(stage, state), mean_operator(...)}.
double maximum_operator(const GenericStoppingProblem& problem, const StageStateFunction& f,
                        int stage, std::size_t state);

struct GenericSolution {
  /// value[stage][state] = v(stage, state).
  std::vector<std::vector<double>> value;
  /// stop[stage][state] is true iff state is in A_stage = {f >= T v}.
  std::vector<std::vector<bool>> stop;

  double v(int stage, std::size_t state) const { return value.at(stage).at(state); }
  bool in_stopping_set(int stage, std::size_t state) const { return stop.at(stage).at(state); }
};

/// Backward induction: v(N, x) = f(N, x), v(n, x) = max{f(n, x), T v(n, x)}.
GenericSolution dp_solve_generic(const GenericStoppingProblem& problem);

/// First stage n with path[n] in A_n (path[n] is X_n). Empty if the path
/// never enters the stopping sets; a path covering all stages always does.
std::optional<int> first_entry(const GenericSolution& solution,
                               std::span<const std::size_t> path);

}  // namespace stoplab
