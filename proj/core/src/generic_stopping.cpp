#include "stoplab/generic_stopping.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "stoplab/error.hpp"
#include "stoplab/summation.hpp"

namespace stoplab {

GenericStoppingProblem::GenericStoppingProblem(int horizon, std::size_t num_states,
                                               std::vector<StageKernel> kernels,
                                               StageStateFunction payoff)
    : horizon_(horizon),
      num_states_(num_states),
      kernels_(std::move(kernels)),
      payoff_(std::move(payoff)) {
  if (horizon_ < 0) fail(ErrorCode::kInvalidArgument, "horizon must be >= 0");
  if (num_states_ == 0) fail(ErrorCode::kInvalidArgument, "state set must be non-empty");
  if (!payoff_) fail(ErrorCode::kInvalidArgument, "payoff function is empty");
  if (horizon_ > 0 && kernels_.size() != 1 &&
      kernels_.size() != static_cast<std::size_t>(horizon_)) {
    fail(ErrorCode::kInvalidArgument,
         "expected 1 or horizon kernels, got " + std::to_string(kernels_.size()));
  }
  for (const auto& k : kernels_) {
    if (k.size() != num_states_) {
      fail(ErrorCode::kInvalidArgument, "kernel must have one row per state");
    }
    for (const auto& row : k) {
      for (const auto& t : row) {
        if (t.target >= num_states_) {
          fail(ErrorCode::kInvalidArgument, "transition target out of range");
        }
      }
    }
  }
}

const StageKernel& GenericStoppingProblem::kernel(int stage) const {
  if (stage < 0 || stage >= horizon_) {
    fail(ErrorCode::kOutOfRange, "stage " + std::to_string(stage) +
                                     " has no outgoing kernel (horizon " +
                                     std::to_string(horizon_) + ")");
  }
  return kernels_.size() == 1 ? kernels_.front() : kernels_[static_cast<std::size_t>(stage)];
}

void GenericStoppingProblem::validate_kernel() const {
  for (std::size_t s = 0; s < kernels_.size(); ++s) {
    for (std::size_t x = 0; x < num_states_; ++x) {
      CompensatedSum mass;
      for (const auto& t : kernels_[s][x]) {
        if (!(t.probability >= 0.0)) {
          fail(ErrorCode::kInvalidArgument, "negative transition probability");
        }
        mass.add(t.probability);
      }
      if (std::fabs(mass.value() - 1.0) > 1e-12) {
        fail(ErrorCode::kInvalidArgument,
             "kernel row (stage " + std::to_string(s) + ", state " + std::to_string(x) +
                 ") sums to " + std::to_string(mass.value()));
      }
    }
  }
}

double mean_operator(const GenericStoppingProblem& problem, const StageStateFunction& f,
                     int stage, std::size_t state) {
  if (state >= problem.num_states()) fail(ErrorCode::kOutOfRange, "state out of range");
  const auto& row = problem.kernel(stage)[state];
  CompensatedSum sum;
  for (const auto& t : row) sum.add(t.probability * f(stage + 1, t.target));
  return sum.value();
}

double maximum_operator(const GenericStoppingProblem& problem, const StageStateFunction& f,
                        int stage, std::size_t state) {
  return std::max(f(stage, state), mean_operator(problem, f, stage, state));
}

GenericSolution dp_solve_generic(const GenericStoppingProblem& problem) {
  problem.validate_kernel();
  const int horizon = problem.horizon();
  const std::size_t states = problem.num_states();

  GenericSolution out;
  out.value.assign(static_cast<std::size_t>(horizon) + 1, std::vector<double>(states));
  out.stop.assign(static_cast<std::size_t>(horizon) + 1, std::vector<bool>(states));

  for (std::size_t x = 0; x < states; ++x) {
    out.value[horizon][x] = problem.payoff(horizon, x);
    out.stop[horizon][x] = true;
  }
  for (int n = horizon - 1; n >= 0; --n) {
    const auto& next = out.value[static_cast<std::size_t>(n) + 1];
    const StageStateFunction v_next = [&next](int, std::size_t x) { return next[x]; };
    for (std::size_t x = 0; x < states; ++x) {
      const double now = problem.payoff(n, x);
      const double cont = mean_operator(problem, v_next, n, x);
      out.stop[n][x] = now >= cont;
      out.value[n][x] = std::max(now, cont);
    }
  }
  return out;
}

std::optional<int> first_entry(const GenericSolution& solution,
                               std::span<const std::size_t> path) {
  const std::size_t stages = std::min(path.size(), solution.stop.size());
  for (std::size_t n = 0; n < stages; ++n) {
    if (solution.stop[n].at(path[n])) return static_cast<int>(n);
  }
  return std::nullopt;
}

}  // namespace stoplab
