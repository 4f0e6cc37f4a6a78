#pragma once

#include <cstdint>
#include <optional>

#include "stoplab/json.hpp"
#include "stoplab/payoff.hpp"

namespace stoplab {

struct Proportion {
  std::uint64_t count = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
};

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

struct MonteCarloOptions {
  /// Threshold of the policy under test; defaults to the optimal k*.
  std::optional<int> threshold;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct MonteCarloReport {
  PayoffParams params;
  int n = 0;
  int threshold = 1;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  Proportion win;
  Proportion wrong;
  Proportion nopick;
  /// Decision time (stop index, or n without a stop).
  MeanEstimate duration;
  MeanEstimate payoff;

  /// Fraction of trials that stopped at all: 1 - nopick.
  Proportion stop() const;
};

/// Runs `trials` independent threshold-rule trials over uniformly random
/// rank orders. Trial i draws from make_stream(seed, i) and all aggregates are
/// integer counts, so the report is bit-identical for any thread count.
MonteCarloReport monte_carlo(const PayoffParams& params, int n, std::uint64_t trials,
                             std::uint64_t seed, const MonteCarloOptions& options = {});

/// Which empirical frequency a formula value falls in line with.
enum class TrackedQuantity { kWinProbability, kStopProbability, kBoth, kNeither };

struct StopWinEstimate {
  Proportion p_stop;
  Proportion p_win;
  /// ((k*-1)/n) H_{k*,n}.
  double formula = 0.0;
  double z_vs_win = 0.0;
  double z_vs_stop = 0.0;
  /// Agreement within 3 standard errors.
  TrackedQuantity tracks = TrackedQuantity::kNeither;
};

StopWinEstimate empirical_stop_and_win(const PayoffParams& params, int n, std::uint64_t trials,
                                       std::uint64_t seed, const MonteCarloOptions& options = {});

Json report_to_json(const MonteCarloReport& report);

}  // namespace stoplab
