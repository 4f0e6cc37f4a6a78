#include "stoplab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stoplab/error.hpp"
#include "stoplab/harmonic.hpp"
#include "stoplab/summation.hpp"

namespace stoplab {
namespace {

constexpr double kTieBand = 1e-12;

void require_horizon(int n) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "horizon n must be >= 1, got " + std::to_string(n));
}

double reward(const PayoffParams& p, int n, int k) {
  return (p.alpha + p.beta) * static_cast<double>(k) / static_cast<double>(n) - p.beta;
}

// One backward pass of V(k) = max{g(k), k * sum_{j>k} (gamma + V(j)) / (j(j-1)) - gamma}
// with the successor values taken from `next`. Returns the stop decisions.
std::vector<bool> sweep(const PayoffParams& p, int n, const std::vector<double>& next,
                        std::vector<double>& out) {
  const double band = kTieBand * (p.alpha + p.beta + p.gamma);
  std::vector<bool> stop(static_cast<std::size_t>(n));
  out.assign(static_cast<std::size_t>(n), 0.0);
  out[n - 1] = p.alpha;
  stop[n - 1] = true;
  CompensatedSum tail;  // sum over j = k+1..n, extended downward
  for (int k = n - 1; k >= 1; --k) {
    const double j = k + 1;
    tail.add((p.gamma + next[k]) / (j * (j - 1.0)));
    const double cont = static_cast<double>(k) * tail.value() - p.gamma;
    const double g = reward(p, n, k);
    const bool stops = g >= cont - band;
    stop[k - 1] = stops;
    out[k - 1] = stops ? g : cont;
  }
  return stop;
}

}  // namespace

double immediate_reward(const PayoffParams& params, int n, int s) {
  require_horizon(n);
  if (s == kAbsorbed) return -params.gamma;
  if (s < 1 || s > n) {
    fail(ErrorCode::kOutOfRange, "state s=" + std::to_string(s) + " outside 1.." + std::to_string(n));
  }
  return reward(params, n, s);
}

Solution dp_solve(const PayoffParams& params, int n) {
  params.validate();
  require_horizon(n);

  Solution s;
  s.params = params;
  s.n = n;
  s.g.resize(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) s.g[k - 1] = reward(params, n, k);

  // The continuation at k only reads V(j) for j > k, which the same pass has
  // already finalized, so a single sweep against its own output is exact.
  s.values.assign(static_cast<std::size_t>(n), 0.0);
  s.values[n - 1] = params.alpha;
  const double band = kTieBand * (params.alpha + params.beta + params.gamma);
  CompensatedSum tail;
  s.k_star = n;
  bool stopping = true;
  for (int k = n - 1; k >= 1; --k) {
    const double j = k + 1;
    tail.add((params.gamma + s.values[k]) / (j * (j - 1.0)));
    const double cont = static_cast<double>(k) * tail.value() - params.gamma;
    const double g = s.g[k - 1];
    const bool stops = g >= cont - band;
    s.values[k - 1] = stops ? g : cont;
    if (stops && stopping) s.k_star = k;
    if (!stops) stopping = false;
  }

  // m(k) with the kLastRejected pivot, from one harmonic table.
  const auto h = harmonic_table(n);
  const int pivot = s.k_star - 1;
  s.durations.resize(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const int at = std::max(k, pivot);
    s.durations[k - 1] = static_cast<double>(at) * h[at] + static_cast<double>(at);
  }
  return s;
}

double bellman_residual(const Solution& solution) {
  std::vector<double> again;
  sweep(solution.params, solution.n, solution.values, again);
  double worst = 0.0;
  for (std::size_t i = 0; i < again.size(); ++i) {
    worst = std::max(worst, std::fabs(again[i] - solution.values[i]));
  }
  return worst;
}

int threshold(const PayoffParams& params, int n) {
  params.validate();
  require_horizon(n);
  const double ratio = params.ratio();
  const double limit = ratio + kTieBand * std::max(1.0, ratio);
  // H_{k,n} is strictly decreasing in k and H_{n,n} = 0 stops.
  int lo = 1;
  int hi = n;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (harmonic(mid, n) <= limit) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

double closed_form_value(const PayoffParams& params, int n, int k) {
  params.validate();
  require_horizon(n);
  if (k < 1 || k > n) {
    fail(ErrorCode::kOutOfRange, "state k=" + std::to_string(k) + " outside 1.." + std::to_string(n));
  }
  const int k_star = threshold(params, n);
  if (k >= k_star) return reward(params, n, k);
  const double head = static_cast<double>(k_star - 1) / static_cast<double>(n);
  return head * ((params.alpha + params.beta) * harmonic(k_star - 1, n) + params.beta -
                 params.gamma) -
         params.beta;
}

std::vector<double> closed_form_table(const PayoffParams& params, int n) {
  params.validate();
  require_horizon(n);
  const int k_star = threshold(params, n);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = k_star; k <= n; ++k) out[k - 1] = reward(params, n, k);
  if (k_star > 1) {
    const double head = static_cast<double>(k_star - 1) / static_cast<double>(n);
    const double below = head * ((params.alpha + params.beta) * harmonic(k_star - 1, n) +
                                 params.beta - params.gamma) -
                         params.beta;
    std::fill(out.begin(), out.begin() + (k_star - 1), below);
  }
  return out;
}

ThresholdPerformance evaluate_threshold(const PayoffParams& params, int n, int r) {
  params.validate();
  require_horizon(n);
  if (r < 1 || r > n + 1) {
    fail(ErrorCode::kOutOfRange, "threshold r=" + std::to_string(r) + " outside 1.." +
                                     std::to_string(n + 1));
  }
  // Follow the rule along the candidate chain. For each quantity q, W_q(k) is
  // its expectation given the chain sits at candidate k with no stop so far:
  // stop value if k >= r, else sum_j p(j|k) W_q(j) + (k/n) q(absorbed).
  struct Acc {
    CompensatedSum win, wrong, nopick, duration;
  } tail;
  double w_win = 0, w_wrong = 0, w_nopick = 0, w_dur = 0;
  for (int k = n; k >= 1; --k) {
    if (k < n) {
      const double j = k + 1;
      const double inv = 1.0 / (j * (j - 1.0));
      tail.win.add(w_win * inv);
      tail.wrong.add(w_wrong * inv);
      tail.nopick.add(w_nopick * inv);
      tail.duration.add(w_dur * inv);
    }
    const double kk = k;
    const double absorbed = kk / static_cast<double>(n);
    if (k >= r) {
      w_win = absorbed;  // candidate k is the overall best w.p. k/n
      w_wrong = 1.0 - absorbed;
      w_nopick = 0.0;
      w_dur = kk;
    } else {
      w_win = kk * tail.win.value();
      w_wrong = kk * tail.wrong.value();
      w_nopick = kk * tail.nopick.value() + absorbed;
      w_dur = kk * tail.duration.value() + absorbed * static_cast<double>(n);
    }
  }
  ThresholdPerformance perf;
  perf.r = r;
  perf.p_win = w_win;
  perf.p_wrong = w_wrong;
  perf.p_nopick = w_nopick;
  perf.expected_duration = w_dur;
  perf.expected_payoff = params.alpha * w_win - params.beta * w_wrong - params.gamma * w_nopick;
  return perf;
}

}  // namespace stoplab
