#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "stoplab/json.hpp"
#include "stoplab/payoff.hpp"
#include "stoplab/session_record.hpp"

namespace stoplab {

/// Post-experiment tallies over finalized sessions of one horizon.
struct SessionStats {
  int n = 0;
  std::uint64_t n_experiments = 0;
  std::vector<int> durations;
  std::uint64_t n_success = 0;
  std::uint64_t n_reached_end_no_pick = 0;
  std::uint64_t n_wrong_pick = 0;
  std::uint64_t duration_sum = 0;
  double mean_duration = 0.0;

  friend bool operator==(const SessionStats&, const SessionStats&) = default;
};

/// Throws Error(kInvalidArgument) for unfinalized or mixed-horizon sessions.
SessionStats summarize(std::span<const SessionRecord> sessions);

struct ThresholdFit {
  int r_hat = 1;
  std::uint64_t disagreements = 0;
  /// Decisions taken at candidate steps, the only ones the fit scores.
  std::uint64_t candidate_decisions = 0;
};

/// Threshold r in 1..n minimizing the number of candidate-step decisions that
/// contradict "pass candidates before r, stop at candidates from r on".
/// Ties go to the smallest r.
ThresholdFit fit_threshold(std::span<const SessionRecord> sessions);

/// Same fit over bare per-session step traces of horizon n.
ThresholdFit fit_threshold(std::span<const std::vector<StepRecord>> traces, int n);

/// Half-open interval (lower, upper]; upper may be +infinity.
struct RatioInterval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const noexcept { return x > lower && x <= upper; }
  bool intersects(const RatioInterval& o) const noexcept {
    return lower < o.upper && o.lower < upper;
  }
};

struct ImpliedRatio {
  /// (H_{r,n}, H_{r-1,n}]: ratios whose optimal threshold is r.
  RatioInterval interval;
  /// -ln(r/n), the inversion of t* = exp(-ratio).
  double point = 0.0;
  /// (-ln(r/n), -ln((r-1)/n)]: ratios whose asymptotic threshold
  /// floor(n exp(-ratio)) + 1 equals r.
  RatioInterval asymptotic_band;
};

ImpliedRatio implied_ratio(int r_hat, int n);

struct DiagnosticReport {
  SessionStats stats;
  ThresholdFit fit;
  ImpliedRatio implied;
  PayoffParams params;
  double ratio = 0.0;
  int optimal_k_star = 1;

  double observed_p_win = 0.0;
  double observed_p_win_se = 0.0;
  /// Baseline ratio * exp(-ratio) (n -> infinity).
  double predicted_p_win = 0.0;
  double deviation_p_win = 0.0;
  /// Baseline: exact win probability of the k* rule at this n.
  double predicted_p_win_finite = 0.0;
  double deviation_p_win_finite = 0.0;

  double observed_duration_fraction = 0.0;
  double observed_duration_fraction_se = 0.0;
  /// Baseline (1 + ratio) exp(-ratio) (n -> infinity).
  double predicted_duration_fraction = 0.0;
  double deviation_duration = 0.0;
};

/// Requires at least one session (the fit needs candidate decisions).
DiagnosticReport deviation_report(std::span<const SessionRecord> sessions,
                                  const PayoffParams& params, int n);

Json stats_to_json(const SessionStats& stats);
Json report_to_json(const DiagnosticReport& report);
/// Aligned two-column text, 6 significant digits.
void render_stats_table(std::ostream& out, const SessionStats& stats);
void render_report_table(std::ostream& out, const DiagnosticReport& report);

}  // namespace stoplab
