#include "stoplab/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "stoplab/duration.hpp"
#include "stoplab/error.hpp"
#include "stoplab/rng.hpp"
#include "stoplab/solver.hpp"
#include "stoplab/trial.hpp"

namespace stoplab {
namespace {

__extension__ using Wide = unsigned __int128;

struct Tally {
  std::uint64_t win = 0;
  std::uint64_t wrong = 0;
  std::uint64_t nopick = 0;
  std::uint64_t duration_sum = 0;
  // 128-bit so the sum of squared durations stays exact at any trial count.
  Wide duration_sq = 0;

  void merge(const Tally& o) {
    win += o.win;
    wrong += o.wrong;
    nopick += o.nopick;
    duration_sum += o.duration_sum;
    duration_sq += o.duration_sq;
  }
};

void run_range(int n, int r, std::uint64_t seed, std::uint64_t begin, std::uint64_t end,
               Tally& tally) {
  std::vector<int> ranks(static_cast<std::size_t>(n));
  ThresholdPolicy policy(r);
  for (std::uint64_t t = begin; t < end; ++t) {
    Engine engine = make_stream(seed, t);
    std::iota(ranks.begin(), ranks.end(), 1);
    for (std::size_t i = ranks.size(); i > 1; --i) {
      std::swap(ranks[i - 1], ranks[uniform_below(engine, i)]);
    }
    const auto trace = run_trial_on_ranks(ranks, policy);
    switch (trace.outcome.outcome_class) {
      case OutcomeClass::kSuccess: ++tally.win; break;
      case OutcomeClass::kWrongPick: ++tally.wrong; break;
      case OutcomeClass::kNoPick: ++tally.nopick; break;
    }
    const auto d = static_cast<std::uint64_t>(trace.outcome.duration);
    tally.duration_sum += d;
    tally.duration_sq += static_cast<Wide>(d) * d;
  }
}

Proportion proportion(std::uint64_t count, std::uint64_t trials) {
  Proportion p;
  p.count = count;
  p.estimate = static_cast<double>(count) / static_cast<double>(trials);
  p.standard_error = std::sqrt(p.estimate * (1.0 - p.estimate) / static_cast<double>(trials));
  return p;
}

Json proportion_json(const Proportion& p) {
  Json j;
  j["count"] = p.count;
  j["estimate"] = p.estimate;
  j["standard_error"] = p.standard_error;
  return j;
}

Json mean_json(const MeanEstimate& m) {
  Json j;
  j["mean"] = m.mean;
  j["standard_error"] = m.standard_error;
  return j;
}

}  // namespace

Proportion MonteCarloReport::stop() const {
  return trials == 0 ? Proportion{} : proportion(trials - nopick.count, trials);
}

MonteCarloReport monte_carlo(const PayoffParams& params, int n, std::uint64_t trials,
                             std::uint64_t seed, const MonteCarloOptions& options) {
  params.validate();
  if (n < 1) fail(ErrorCode::kInvalidArgument, "horizon n must be >= 1");
  if (trials < 1) fail(ErrorCode::kInvalidArgument, "trials must be >= 1");
  const int r = options.threshold.value_or(threshold(params, n));
  if (r < 1 || r > n + 1) fail(ErrorCode::kInvalidArgument, "threshold r must lie in 1..n+1");

  unsigned workers = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(
      std::clamp<std::uint64_t>(workers == 0 ? 1 : workers, 1, trials));

  std::vector<Tally> tallies(workers);
  if (workers == 1) {
    run_range(n, r, seed, 0, trials, tallies[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = trials / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = chunk * w;
      const std::uint64_t end = w + 1 == workers ? trials : begin + chunk;
      pool.emplace_back(run_range, n, r, seed, begin, end, std::ref(tallies[w]));
    }
    for (auto& t : pool) t.join();
  }
  Tally total;
  for (const auto& t : tallies) total.merge(t);

  MonteCarloReport rep;
  rep.params = params;
  rep.n = n;
  rep.threshold = r;
  rep.trials = trials;
  rep.seed = seed;
  rep.win = proportion(total.win, trials);
  rep.wrong = proportion(total.wrong, trials);
  rep.nopick = proportion(total.nopick, trials);

  const double count = static_cast<double>(trials);
  const double mean_d = static_cast<double>(total.duration_sum) / count;
  const double mean_sq = static_cast<double>(total.duration_sq) / count;
  rep.duration.mean = mean_d;
  rep.duration.standard_error =
      trials > 1 ? std::sqrt(std::max(0.0, mean_sq - mean_d * mean_d) * count / (count - 1.0) / count)
                 : 0.0;

  // Payoff takes three values, so its moments follow from the class counts.
  const double pw = rep.win.estimate, pr = rep.wrong.estimate, pn = rep.nopick.estimate;
  const double mean_p = params.alpha * pw - params.beta * pr - params.gamma * pn;
  const double sq_p = params.alpha * params.alpha * pw + params.beta * params.beta * pr +
                      params.gamma * params.gamma * pn;
  rep.payoff.mean = mean_p;
  rep.payoff.standard_error =
      trials > 1 ? std::sqrt(std::max(0.0, sq_p - mean_p * mean_p) * count / (count - 1.0) / count)
                 : 0.0;
  return rep;
}

StopWinEstimate empirical_stop_and_win(const PayoffParams& params, int n, std::uint64_t trials,
                                       std::uint64_t seed, const MonteCarloOptions& options) {
  const auto rep = monte_carlo(params, n, trials, seed, options);
  StopWinEstimate out;
  out.p_stop = rep.stop();
  out.p_win = rep.win;
  out.formula = stop_probability(params, n);
  auto z = [&](const Proportion& p) {
    if (p.standard_error == 0.0) {
      return out.formula == p.estimate ? 0.0 : std::copysign(INFINITY, out.formula - p.estimate);
    }
    return (out.formula - p.estimate) / p.standard_error;
  };
  out.z_vs_win = z(out.p_win);
  out.z_vs_stop = z(out.p_stop);
  const bool win = std::fabs(out.z_vs_win) <= 3.0;
  const bool stop = std::fabs(out.z_vs_stop) <= 3.0;
  out.tracks = win && stop ? TrackedQuantity::kBoth
               : win       ? TrackedQuantity::kWinProbability
               : stop      ? TrackedQuantity::kStopProbability
                           : TrackedQuantity::kNeither;
  return out;
}

Json report_to_json(const MonteCarloReport& report) {
  Json j;
  j["params"] = params_to_json(report.params);
  j["n"] = report.n;
  j["threshold"] = report.threshold;
  j["trials"] = report.trials;
  j["seed"] = report.seed;
  j["p_win"] = proportion_json(report.win);
  j["p_wrong"] = proportion_json(report.wrong);
  j["p_nopick"] = proportion_json(report.nopick);
  j["mean_duration"] = mean_json(report.duration);
  j["mean_payoff"] = mean_json(report.payoff);
  return j;
}

}  // namespace stoplab
