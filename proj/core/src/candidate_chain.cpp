#include "stoplab/candidate_chain.hpp"

#include <string>

#include "stoplab/error.hpp"

namespace stoplab {

CandidateChain::CandidateChain(int n) : n_(n) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "horizon n must be >= 1");
}

double CandidateChain::transition(int from, int to) const {
  if (from < 1 || from > n_ || to < 1 || to > n_) {
    fail(ErrorCode::kOutOfRange, "candidate state out of range");
  }
  if (to <= from) return 0.0;
  const double j = to;
  return static_cast<double>(from) / (j * (j - 1.0));
}

double CandidateChain::absorption(int from) const {
  if (from < 1 || from > n_) fail(ErrorCode::kOutOfRange, "candidate state out of range");
  return static_cast<double>(from) / static_cast<double>(n_);
}

GenericStoppingProblem CandidateChain::to_problem(const PayoffParams& params) const {
  params.validate();
  const std::size_t absorbed = absorbing_state();
  StageKernel kernel(absorbed + 1);
  for (int k = 1; k <= n_; ++k) {
    auto& row = kernel[generic_state(k)];
    row.reserve(static_cast<std::size_t>(n_ - k) + 1);
    for (int j = k + 1; j <= n_; ++j) row.push_back({generic_state(j), transition(k, j)});
    row.push_back({absorbed, absorption(k)});
  }
  kernel[absorbed].push_back({absorbed, 1.0});

  const double n = n_;
  auto payoff = [params, n, absorbed](int, std::size_t x) {
    if (x == absorbed) return -params.gamma;
    return (params.alpha + params.beta) * static_cast<double>(x + 1) / n - params.beta;
  };
  return GenericStoppingProblem(n_, absorbed + 1, {std::move(kernel)}, payoff);
}

}  // namespace stoplab
