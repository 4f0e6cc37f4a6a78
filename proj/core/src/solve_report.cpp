#include "stoplab/solve_report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "stoplab/duration.hpp"

namespace stoplab {

SolveReport make_solve_report(const PayoffParams& params, int n) {
  SolveReport r;
  r.solution = dp_solve(params, n);
  r.k_star_inequality = threshold(params, n);
  r.closed_form = closed_form_table(params, n);
  for (int k = 1; k <= n; ++k) {
    r.max_abs_diff = std::max(r.max_abs_diff, std::fabs(r.closed_form[k - 1] - r.solution.value(k)));
  }
  r.limits = asymptotics(params);
  r.optimal = evaluate_threshold(params, n, r.solution.k_star);
  r.stop_probability = stoplab::stop_probability(params, n);
  r.mean_decision_time = mean_decision_time(params, n, DurationIndexing::kLastRejected);
  r.mean_decision_time_as_printed = mean_decision_time(params, n, DurationIndexing::kAsPrinted);
  r.asymptotic_duration_start = asymptotic_duration(params, std::numeric_limits<double>::min());
  return r;
}

Json solve_report_to_json(const SolveReport& r, bool include_tables) {
  const auto& s = r.solution;
  Json j;
  j["params"] = params_to_json(s.params);
  j["n"] = s.n;
  j["ratio"] = r.limits.ratio;
  j["k_star"] = s.k_star;
  j["k_star_inequality"] = r.k_star_inequality;
  j["value"] = s.value(1);
  j["max_abs_diff_closed_form"] = r.max_abs_diff;
  j["p_win"] = r.optimal.p_win;
  j["p_wrong"] = r.optimal.p_wrong;
  j["p_nopick"] = r.optimal.p_nopick;
  j["stop_probability_formula"] = r.stop_probability;
  j["mean_decision_time"] = r.mean_decision_time;
  j["mean_decision_time_as_printed"] = r.mean_decision_time_as_printed;
  Json lim;
  lim["t_star"] = r.limits.t_star;
  lim["v_limit"] = r.limits.v_limit;
  lim["p_win"] = r.limits.p_win;
  lim["mean_duration_fraction"] = r.limits.mean_duration_fraction;
  lim["asymptotic_duration_start"] = r.asymptotic_duration_start;
  j["asymptotics"] = std::move(lim);
  if (include_tables) {
    Json rows = Json::array();
    for (int k = 1; k <= s.n; ++k) {
      Json row;
      row["k"] = k;
      row["g"] = s.reward(k);
      row["value_dp"] = s.value(k);
      row["value_closed_form"] = r.closed_form[k - 1];
      row["m"] = s.duration(k);
      rows.push_back(std::move(row));
    }
    j["table"] = std::move(rows);
  }
  return j;
}

namespace {

void line(std::ostream& out, const char* key, double value) {
  out << std::left << std::setw(32) << key << std::setprecision(6) << value << '\n';
}

}  // namespace

void render_solve_table(std::ostream& out, const SolveReport& r) {
  const auto& s = r.solution;
  const auto flags = out.flags();
  out << std::left << std::setw(32) << "n" << s.n << '\n';
  out << std::setw(32) << "alpha beta gamma" << std::setprecision(6) << s.params.alpha << ' '
      << s.params.beta << ' ' << s.params.gamma << '\n';
  line(out, "ratio", r.limits.ratio);
  out << std::setw(32) << "k*" << s.k_star << '\n';
  line(out, "V(1)", s.value(1));
  line(out, "max |closed form - DP|", r.max_abs_diff);
  line(out, "p_win (exact, finite n)", r.optimal.p_win);
  line(out, "stop_probability formula", r.stop_probability);
  line(out, "mean decision time", r.mean_decision_time);
  line(out, "mean decision time (printed)", r.mean_decision_time_as_printed);
  line(out, "t* = exp(-ratio)", r.limits.t_star);
  line(out, "V(0+)", r.limits.v_limit);
  line(out, "p_win (asymptotic)", r.limits.p_win);
  line(out, "mean duration / n (asymptotic)", r.limits.mean_duration_fraction);
  out << '\n';
  out << std::right << std::setw(8) << "k" << std::setw(14) << "g(k)" << std::setw(14) << "V_dp(k)"
      << std::setw(14) << "V_closed(k)" << std::setw(14) << "m(k)" << '\n';
  for (int k = 1; k <= s.n; ++k) {
    out << std::setw(8) << k << std::setprecision(6) << std::setw(14) << s.reward(k) << std::setw(14)
        << s.value(k) << std::setw(14) << r.closed_form[k - 1] << std::setw(14) << s.duration(k)
        << '\n';
  }
  out.flags(flags);
}

void render_solve_csv(std::ostream& out, const SolveReport& r) {
  const auto& s = r.solution;
  const auto precision = out.precision(17);
  out << "k,g,value_dp,value_closed_form,m\n";
  for (int k = 1; k <= s.n; ++k) {
    out << k << ',' << s.reward(k) << ',' << s.value(k) << ',' << r.closed_form[k - 1] << ','
        << s.duration(k) << '\n';
  }
  out.precision(precision);
}

}  // namespace stoplab
