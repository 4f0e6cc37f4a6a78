#include "stoplab/trial.hpp"

#include <string>

#include "stoplab/error.hpp"

namespace stoplab {

std::string_view to_string(Decision d) { return d == Decision::kStop ? "stop" : "pass"; }

Decision parse_decision(std::string_view text) {
  if (text == "stop") return Decision::kStop;
  if (text == "pass") return Decision::kPass;
  fail(ErrorCode::kInvalidArgument, "choice must be \"stop\" or \"pass\", got \"" +
                                        std::string(text) + "\"");
}

std::string_view to_string(OutcomeClass c) {
  switch (c) {
    case OutcomeClass::kSuccess: return "Success";
    case OutcomeClass::kWrongPick: return "WrongPick";
    case OutcomeClass::kNoPick: return "NoPick";
  }
  return "NoPick";
}

OutcomeClass parse_outcome_class(std::string_view text) {
  if (text == "Success") return OutcomeClass::kSuccess;
  if (text == "WrongPick") return OutcomeClass::kWrongPick;
  if (text == "NoPick") return OutcomeClass::kNoPick;
  fail(ErrorCode::kParse, "unknown outcome class \"" + std::string(text) + "\"");
}

ThresholdPolicy::ThresholdPolicy(int r) : r_(r) {
  if (r < 1) fail(ErrorCode::kInvalidArgument, "threshold r must be >= 1");
}

Decision ThresholdPolicy::decide(const Observation& obs) {
  return obs.is_candidate && obs.step >= r_ ? Decision::kStop : Decision::kPass;
}

NoisyThresholdPolicy::NoisyThresholdPolicy(int r, double noise, Engine engine)
    : base_(r), noise_(noise), engine_(std::move(engine)) {
  if (!(noise >= 0.0 && noise <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "noise must lie in [0, 1]");
  }
}

Decision NoisyThresholdPolicy::decide(const Observation& obs) {
  const Decision d = base_.decide(obs);
  if (!obs.is_candidate) return Decision::kPass;
  if (uniform_unit(engine_) < noise_) {
    return d == Decision::kStop ? Decision::kPass : Decision::kStop;
  }
  return d;
}

TrialOutcome classify_outcome(std::optional<int> stop_index, int best_index, int n,
                              const PayoffParams& params) {
  TrialOutcome out;
  out.stop_index = stop_index;
  if (!stop_index) {
    out.outcome_class = OutcomeClass::kNoPick;
    out.duration = n;
    out.payoff = -params.gamma;
  } else {
    out.duration = *stop_index;
    if (*stop_index == best_index) {
      out.outcome_class = OutcomeClass::kSuccess;
      out.payoff = params.alpha;
    } else {
      out.outcome_class = OutcomeClass::kWrongPick;
      out.payoff = -params.beta;
    }
  }
  return out;
}

namespace {

template <typename IsCandidate>
TrialTrace present(int n, int best_index, IsCandidate is_candidate, Policy& policy,
                   const PayoffParams& params) {
  TrialTrace trace;
  std::optional<int> stop;
  for (int k = 1; k <= n; ++k) {
    const Observation obs{k, n, is_candidate(k)};
    const Decision d = policy.decide(obs);
    trace.steps.push_back({k, obs.is_candidate, d});
    if (d == Decision::kStop) {
      stop = k;
      break;
    }
  }
  trace.outcome = classify_outcome(stop, best_index, n, params);
  return trace;
}

}  // namespace

TrialTrace run_trial(const SequenceInstance& instance, Policy& policy,
                     const PayoffParams& params) {
  const auto flags = instance.candidate_flags();
  return present(
      instance.n(), instance.best_index(),
      [&flags](int k) { return static_cast<bool>(flags[static_cast<std::size_t>(k - 1)]); },
      policy, params);
}

TrialTrace run_trial_on_ranks(std::span<const int> ranks, Policy& policy,
                              const PayoffParams& params) {
  const int n = static_cast<int>(ranks.size());
  if (n < 1) fail(ErrorCode::kInvalidArgument, "rank sequence is empty");
  int best_index = 0;
  int running = 0;
  for (int k = 1; k <= n; ++k) {
    if (ranks[static_cast<std::size_t>(k - 1)] == n) best_index = k;
  }
  if (best_index == 0) fail(ErrorCode::kInvalidArgument, "ranks must be a permutation of 1..n");
  return present(
      n, best_index,
      [&ranks, &running](int k) {
        const int r = ranks[static_cast<std::size_t>(k - 1)];
        if (r > running) {
          running = r;
          return true;
        }
        return false;
      },
      policy, params);
}

TrialOutcome replay_decisions(const SequenceInstance& instance,
                              std::span<const Decision> decisions, const PayoffParams& params) {
  const int n = instance.n();
  std::optional<int> stop;
  std::size_t used = 0;
  for (int k = 1; k <= n && used < decisions.size(); ++k) {
    const Decision d = decisions[used++];
    if (d == Decision::kStop) {
      stop = k;
      break;
    }
  }
  if (used < decisions.size()) {
    fail(ErrorCode::kProtocolViolation, "decision after the trial ended (decision " +
                                            std::to_string(used + 1) + ")");
  }
  if (!stop && used < static_cast<std::size_t>(n)) {
    fail(ErrorCode::kProtocolViolation, "trial unfinished: " + std::to_string(used) +
                                            " of " + std::to_string(n) + " steps decided");
  }
  return classify_outcome(stop, instance.best_index(), n, params);
}

}  // namespace stoplab
