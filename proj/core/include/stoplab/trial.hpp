#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "stoplab/instance.hpp"
#include "stoplab/payoff.hpp"
#include "stoplab/rng.hpp"

namespace stoplab {

/// The only information a policy receives at step k: the step, the horizon,
/// and whether observation k is the best so far.
struct Observation {
  int step = 1;
  int n = 1;
  bool is_candidate = false;
};

enum class Decision { kPass, kStop };

std::string_view to_string(Decision d);
/// Accepts "stop" and "pass".
Decision parse_decision(std::string_view text);

class Policy {
 public:
  virtual ~Policy() = default;
  virtual Decision decide(const Observation& obs) = 0;
};

/// Reject the first r-1 options, then stop at the first candidate.
class ThresholdPolicy final : public Policy {
 public:
  explicit ThresholdPolicy(int r);
  Decision decide(const Observation& obs) override;
  int r() const noexcept { return r_; }

 private:
  int r_;
};

class NeverStopPolicy final : public Policy {
 public:
  Decision decide(const Observation&) override { return Decision::kPass; }
};

/// ThresholdPolicy whose decision at each candidate step is flipped with
/// probability `noise`. Non-candidate steps always pass.
class NoisyThresholdPolicy final : public Policy {
 public:
  NoisyThresholdPolicy(int r, double noise, Engine engine);
  Decision decide(const Observation& obs) override;

 private:
  ThresholdPolicy base_;
  double noise_;
  Engine engine_;
};

enum class OutcomeClass { kSuccess, kWrongPick, kNoPick };

std::string_view to_string(OutcomeClass c);
OutcomeClass parse_outcome_class(std::string_view text);

struct TrialOutcome {
  std::optional<int> stop_index;
  OutcomeClass outcome_class = OutcomeClass::kNoPick;
  /// Stop index, or n when no stop occurred.
  int duration = 0;
  /// alpha, -beta or -gamma by outcome class.
  double payoff = 0.0;

  friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

TrialOutcome classify_outcome(std::optional<int> stop_index, int best_index, int n,
                              const PayoffParams& params);

struct StepRecord {
  int step = 1;
  bool is_candidate = false;
  Decision decision = Decision::kPass;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct TrialTrace {
  TrialOutcome outcome;
  std::vector<StepRecord> steps;
};

/// Presents the instance step by step until the policy stops or the
/// sequence ends. A pass at step n is a NoPick.
TrialTrace run_trial(const SequenceInstance& instance, Policy& policy,
                     const PayoffParams& params = PayoffParams::classical());

/// run_trial over a permutation of ranks 1..n (n is the overall best).
TrialTrace run_trial_on_ranks(std::span<const int> ranks, Policy& policy,
                              const PayoffParams& params = PayoffParams::classical());

/// Applies a recorded decision sequence. Throws Error(kProtocolViolation) when
/// decisions continue after a stop, or run out before the trial ends.
TrialOutcome replay_decisions(const SequenceInstance& instance,
                              std::span<const Decision> decisions,
                              const PayoffParams& params = PayoffParams::classical());

}  // namespace stoplab
