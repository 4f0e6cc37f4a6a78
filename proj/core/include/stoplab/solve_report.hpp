#pragma once

#include <iosfwd>
#include <vector>

#include "stoplab/asymptotics.hpp"
#include "stoplab/json.hpp"
#include "stoplab/payoff.hpp"
#include "stoplab/solver.hpp"

namespace stoplab {

struct SolveReport {
  Solution solution;
  /// threshold() from the harmonic inequality; equals solution.k_star.
  int k_star_inequality = 1;
  std::vector<double> closed_form;
  double max_abs_diff = 0.0;
  AsymptoticSummary limits;
  ThresholdPerformance optimal;
  double stop_probability = 0.0;
  double mean_decision_time = 0.0;
  double mean_decision_time_as_printed = 0.0;
  /// Limit of m(k)/n as k/n -> 0+.
  double asymptotic_duration_start = 0.0;
};

SolveReport make_solve_report(const PayoffParams& params, int n);

/// Full-precision JSON; per-k tables only when include_tables is set.
Json solve_report_to_json(const SolveReport& report, bool include_tables);
/// Aligned text, 6 significant digits.
void render_solve_table(std::ostream& out, const SolveReport& report);
/// Header row then one row per k; full precision.
void render_solve_csv(std::ostream& out, const SolveReport& report);

}  // namespace stoplab
