#include "stoplab/diagnostics.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "stoplab/asymptotics.hpp"
#include "stoplab/error.hpp"
#include "stoplab/harmonic.hpp"
#include "stoplab/solver.hpp"

namespace stoplab {

SessionStats summarize(std::span<const SessionRecord> sessions) {
  SessionStats s;
  for (const auto& r : sessions) {
    if (r.state != SessionState::kFinalized || !r.outcome) {
      fail(ErrorCode::kInvalidArgument, "session " + r.session_id + " is not finalized");
    }
    if (s.n == 0) {
      s.n = r.config.n;
    } else if (r.config.n != s.n) {
      fail(ErrorCode::kInvalidArgument, "sessions mix horizons " + std::to_string(s.n) + " and " +
                                            std::to_string(r.config.n));
    }
    ++s.n_experiments;
    s.durations.push_back(r.outcome->duration);
    s.duration_sum += static_cast<std::uint64_t>(r.outcome->duration);
    switch (r.outcome->outcome_class) {
      case OutcomeClass::kSuccess: ++s.n_success; break;
      case OutcomeClass::kWrongPick: ++s.n_wrong_pick; break;
      case OutcomeClass::kNoPick: ++s.n_reached_end_no_pick; break;
    }
  }
  if (s.n_experiments > 0) {
    s.mean_duration = static_cast<double>(s.duration_sum) / static_cast<double>(s.n_experiments);
  }
  return s;
}

ThresholdFit fit_threshold(std::span<const std::vector<StepRecord>> traces, int n) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "horizon n must be >= 1");
  // stops[k] / passes[k]: candidate decisions at step k.
  std::vector<std::uint64_t> stops(static_cast<std::size_t>(n) + 2, 0);
  std::vector<std::uint64_t> passes(static_cast<std::size_t>(n) + 2, 0);
  std::uint64_t total = 0;
  for (const auto& trace : traces) {
    for (const auto& step : trace) {
      if (!step.is_candidate) continue;
      if (step.step < 1 || step.step > n) fail(ErrorCode::kInvalidArgument, "step outside 1..n");
      (step.decision == Decision::kStop ? stops : passes)[step.step]++;
      ++total;
    }
  }
  if (total == 0) fail(ErrorCode::kInvalidArgument, "no decisions at candidate steps to fit");

  // cost(r) = stops below r + passes at or above r.
  std::uint64_t passes_at_or_above = 0;
  for (int k = 1; k <= n; ++k) passes_at_or_above += passes[k];
  std::uint64_t stops_below = 0;
  ThresholdFit best{1, std::numeric_limits<std::uint64_t>::max(), total};
  for (int r = 1; r <= n; ++r) {
    const std::uint64_t cost = stops_below + passes_at_or_above;
    if (cost < best.disagreements) {
      best.r_hat = r;
      best.disagreements = cost;
    }
    stops_below += stops[r];
    passes_at_or_above -= passes[r];
  }
  return best;
}

ThresholdFit fit_threshold(std::span<const SessionRecord> sessions) {
  if (sessions.empty()) fail(ErrorCode::kInvalidArgument, "no sessions to fit");
  const int n = sessions.front().config.n;
  std::vector<std::vector<StepRecord>> traces;
  traces.reserve(sessions.size());
  for (const auto& s : sessions) {
    if (s.state != SessionState::kFinalized) {
      fail(ErrorCode::kInvalidArgument, "session " + s.session_id + " is not finalized");
    }
    if (s.config.n != n) fail(ErrorCode::kInvalidArgument, "sessions mix horizons");
    traces.push_back(decision_steps(s));
  }
  return fit_threshold(traces, n);
}

ImpliedRatio implied_ratio(int r_hat, int n) {
  if (n < 1 || r_hat < 1 || r_hat > n) {
    fail(ErrorCode::kOutOfRange, "implied_ratio requires 1 <= r_hat <= n");
  }
  ImpliedRatio out;
  out.interval = {harmonic(r_hat, n), harmonic_or_infinity(r_hat - 1, n)};
  const double nn = n;
  out.point = -std::log(static_cast<double>(r_hat) / nn);
  out.asymptotic_band = {out.point, r_hat == 1 ? std::numeric_limits<double>::infinity()
                                               : -std::log(static_cast<double>(r_hat - 1) / nn)};
  return out;
}

DiagnosticReport deviation_report(std::span<const SessionRecord> sessions,
                                  const PayoffParams& params, int n) {
  params.validate();
  DiagnosticReport rep;
  rep.stats = summarize(sessions);
  if (rep.stats.n != 0 && rep.stats.n != n) {
    fail(ErrorCode::kInvalidArgument, "sessions have horizon " + std::to_string(rep.stats.n) +
                                          ", report requested for " + std::to_string(n));
  }
  rep.fit = fit_threshold(sessions);
  rep.implied = implied_ratio(rep.fit.r_hat, n);
  rep.params = params;
  rep.ratio = params.ratio();
  rep.optimal_k_star = threshold(params, n);

  const auto limit = asymptotics(params);
  const auto exact = evaluate_threshold(params, n, rep.optimal_k_star);
  const double m = static_cast<double>(rep.stats.n_experiments);

  rep.observed_p_win = static_cast<double>(rep.stats.n_success) / m;
  rep.observed_p_win_se = std::sqrt(rep.observed_p_win * (1.0 - rep.observed_p_win) / m);
  rep.predicted_p_win = limit.p_win;
  rep.deviation_p_win = rep.observed_p_win - rep.predicted_p_win;
  rep.predicted_p_win_finite = exact.p_win;
  rep.deviation_p_win_finite = rep.observed_p_win - rep.predicted_p_win_finite;

  const double nn = n;
  rep.observed_duration_fraction = rep.stats.mean_duration / nn;
  double sq = 0.0;
  for (int d : rep.stats.durations) {
    const double x = d / nn - rep.observed_duration_fraction;
    sq += x * x;
  }
  rep.observed_duration_fraction_se = m > 1 ? std::sqrt(sq / (m - 1.0) / m) : 0.0;
  rep.predicted_duration_fraction = limit.mean_duration_fraction;
  rep.deviation_duration = rep.observed_duration_fraction - rep.predicted_duration_fraction;
  return rep;
}

namespace {

Json bound_json(double x) { return std::isinf(x) ? Json(nullptr) : Json(x); }

Json interval_json(const RatioInterval& i) {
  Json j;
  j["lower_exclusive"] = bound_json(i.lower);
  j["upper_inclusive"] = bound_json(i.upper);
  return j;
}

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

void row(std::ostream& out, const std::string& key, const std::string& value) {
  out << std::left << std::setw(34) << key << value << '\n';
}

}  // namespace

Json stats_to_json(const SessionStats& s) {
  Json j;
  j["n"] = s.n;
  j["n_experiments"] = s.n_experiments;
  j["n_success"] = s.n_success;
  j["n_reached_end_no_pick"] = s.n_reached_end_no_pick;
  j["n_wrong_pick"] = s.n_wrong_pick;
  j["mean_duration"] = s.mean_duration;
  j["durations"] = s.durations;
  return j;
}

Json report_to_json(const DiagnosticReport& r) {
  Json j;
  j["stats"] = stats_to_json(r.stats);
  j["params"] = params_to_json(r.params);
  j["ratio"] = r.ratio;
  j["r_hat"] = r.fit.r_hat;
  j["disagreement_count"] = r.fit.disagreements;
  j["candidate_decisions"] = r.fit.candidate_decisions;
  j["implied_ratio_interval"] = interval_json(r.implied.interval);
  j["implied_ratio_point"] = r.implied.point;
  j["implied_ratio_asymptotic_band"] = interval_json(r.implied.asymptotic_band);
  j["optimal_k_star"] = r.optimal_k_star;
  j["observed_p_win"] = r.observed_p_win;
  j["observed_p_win_se"] = r.observed_p_win_se;
  j["predicted_p_win_asymptotic"] = r.predicted_p_win;
  j["deviation_p_win"] = r.deviation_p_win;
  j["predicted_p_win_finite_n"] = r.predicted_p_win_finite;
  j["deviation_p_win_finite_n"] = r.deviation_p_win_finite;
  j["observed_duration_fraction"] = r.observed_duration_fraction;
  j["observed_duration_fraction_se"] = r.observed_duration_fraction_se;
  j["predicted_duration_fraction_asymptotic"] = r.predicted_duration_fraction;
  j["deviation_duration"] = r.deviation_duration;
  return j;
}

void render_stats_table(std::ostream& out, const SessionStats& s) {
  row(out, "horizon n", std::to_string(s.n));
  row(out, "experiments", std::to_string(s.n_experiments));
  row(out, "successes", std::to_string(s.n_success));
  row(out, "reached end without a pick", std::to_string(s.n_reached_end_no_pick));
  row(out, "wrong picks", std::to_string(s.n_wrong_pick));
  row(out, "mean duration", fmt(s.mean_duration));
}

void render_report_table(std::ostream& out, const DiagnosticReport& r) {
  render_stats_table(out, r.stats);
  row(out, "fitted threshold r_hat", std::to_string(r.fit.r_hat));
  row(out, "disagreements", std::to_string(r.fit.disagreements) + " of " +
                                std::to_string(r.fit.candidate_decisions));
  row(out, "implied ratio interval",
      "(" + fmt(r.implied.interval.lower) + ", " + fmt(r.implied.interval.upper) + "]");
  row(out, "implied ratio point -ln(r/n)", fmt(r.implied.point));
  row(out, "params ratio", fmt(r.ratio));
  row(out, "optimal k*", std::to_string(r.optimal_k_star));
  row(out, "observed p_win", fmt(r.observed_p_win) + " (se " + fmt(r.observed_p_win_se) + ")");
  row(out, "deviation p_win [asymptotic]", fmt(r.deviation_p_win));
  row(out, "deviation p_win [finite n]", fmt(r.deviation_p_win_finite));
  row(out, "observed duration / n", fmt(r.observed_duration_fraction) + " (se " +
                                        fmt(r.observed_duration_fraction_se) + ")");
  row(out, "deviation duration [asymptotic]", fmt(r.deviation_duration));
}

}  // namespace stoplab
