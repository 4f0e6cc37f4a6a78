#include <cmath>

#include <catch_amalgamated.hpp>

#include "stoplab/asymptotics.hpp"
#include "stoplab/candidate_chain.hpp"
#include "stoplab/error.hpp"
#include "stoplab/harmonic.hpp"
#include "stoplab/payoff.hpp"
#include "stoplab/solver.hpp"

using namespace stoplab;

namespace {

std::vector<PayoffParams> grid() {
  std::vector<PayoffParams> out;
  for (double beta : {0.0, 0.5, 1.0, 2.0}) {
    for (double gamma : {0.0, 0.5, 1.0, 2.0}) out.push_back({1.0, beta, gamma});
  }
  return out;
}

}  // namespace

TEST_CASE("payoff validation") {
  CHECK_NOTHROW(PayoffParams{1, 0, 0}.validate());
  CHECK_THROWS_AS((PayoffParams{0, 0, 0}.validate()), Error);
  CHECK_THROWS_AS((PayoffParams{1, -1, 0}.validate()), Error);
  CHECK_THROWS_AS((PayoffParams{1, 0, -0.5}.validate()), Error);
  CHECK_THROWS_AS((PayoffParams{NAN, 0, 0}.validate()), Error);
  CHECK(PayoffParams{1, 0.5, 0.5}.ratio() == Catch::Approx(1.0));
  CHECK(PayoffParams{1, 1, 0}.ratio() == Catch::Approx(0.5));
}

TEST_CASE("immediate reward") {
  const PayoffParams p{1, 0, 0};
  CHECK(immediate_reward(p, 10, 4) == Catch::Approx(0.4));
  CHECK(immediate_reward(p, 10, kAbsorbed) == 0.0);
  const PayoffParams q{2, 1, 0.5};
  CHECK(immediate_reward(q, 10, 10) == Catch::Approx(2.0));
  CHECK(immediate_reward(q, 10, kAbsorbed) == -0.5);
  CHECK_THROWS_AS(immediate_reward(q, 10, 11), Error);
}

TEST_CASE("candidate kernel rows sum to one") {
  for (int n : {1, 2, 10, 300}) {
    CandidateChain chain(n);
    for (int k = 1; k <= n; ++k) {
      long double total = chain.absorption(k);
      for (int j = k + 1; j <= n; ++j) total += chain.transition(k, j);
      CHECK(std::abs(static_cast<double>(total) - 1.0) <= 1e-12);
    }
    CHECK(chain.absorption(n) == 1.0);
    CHECK_NOTHROW(chain.to_problem(PayoffParams::classical()).validate_kernel());
  }
}

TEST_CASE("classical n = 10 matches exact fractions") {
  const auto s = dp_solve(PayoffParams::classical(), 10);
  CHECK(s.k_star == 4);
  for (int k = 1; k <= 3; ++k) CHECK(s.value(k) == Catch::Approx(0.3986904761904762).epsilon(1e-14));
  CHECK(s.value(4) == Catch::Approx(0.4).epsilon(1e-14));
  CHECK(s.value(10) == 1.0);
  CHECK(threshold(PayoffParams::classical(), 10) == 4);
}

TEST_CASE("classical thresholds") {
  CHECK(threshold(PayoffParams::classical(), 100) == 38);
  CHECK(dp_solve(PayoffParams::classical(), 100).value(1) ==
        Catch::Approx(0.371042778712643).epsilon(1e-13));
  CHECK(threshold(PayoffParams::classical(), 1000) == 369);
  CHECK(threshold(PayoffParams::classical(), 8) == 4);
  CHECK(dp_solve(PayoffParams::classical(), 8).value(1) ==
        Catch::Approx(0.40982142857142856).epsilon(1e-14));
}

TEST_CASE("n = 1 stops immediately") {
  const auto s = dp_solve({1, 2, 3}, 1);
  CHECK(s.k_star == 1);
  CHECK(s.value(1) == 1.0);
  CHECK(threshold({1, 2, 3}, 1) == 1);
}

TEST_CASE("exact tie stops") {
  // ratio 1/3 equals H_{3,4}.
  const PayoffParams p{1, 2, 0};
  CHECK(harmonic(3, 4) == Catch::Approx(p.ratio()).epsilon(1e-15));
  CHECK(threshold(p, 4) == 3);
  CHECK(dp_solve(p, 4).k_star == 3);
}

TEST_CASE("Bellman residual and up-set structure over the grid") {
  for (const auto& p : grid()) {
    for (int n : {1, 2, 5, 10, 100, 1000}) {
      const auto s = dp_solve(p, n);
      CHECK(bellman_residual(s) <= 1e-12);
      CHECK(s.value(n) == Catch::Approx(p.alpha));
      for (int k = 1; k <= n; ++k) {
        CHECK(s.value(k) >= s.reward(k) - 1e-15);
        if (k >= s.k_star) CHECK(s.value(k) == s.reward(k));
      }
      CHECK(s.k_star == threshold(p, n));
    }
  }
}

TEST_CASE("threshold satisfies the harmonic double inequality off ties") {
  for (const auto& p : grid()) {
    for (int n : {2, 10, 100, 1000, 10000}) {
      const int k = threshold(p, n);
      CHECK(harmonic(k, n) <= p.ratio() + 1e-12);
      if (k > 1) CHECK(harmonic(k - 1, n) > p.ratio());
    }
  }
}

TEST_CASE("closed form agrees with the DP") {
  for (const auto& p : grid()) {
    for (int n : {1, 3, 10, 100, 1000}) {
      const auto s = dp_solve(p, n);
      const auto table = closed_form_table(p, n);
      for (int k = 1; k <= n; ++k) {
        CHECK(std::abs(table[k - 1] - s.value(k)) <= 1e-9);
        CHECK(closed_form_value(p, n, k) == table[k - 1]);
      }
    }
  }
}

TEST_CASE("value is non-increasing in beta and gamma") {
  for (int n : {10, 100}) {
    for (double g : {0.0, 1.0}) {
      double prev = INFINITY;
      for (double b : {0.0, 0.5, 1.0, 2.0}) {
        const double v = dp_solve({1, b, g}, n).value(1);
        CHECK(v <= prev + 1e-15);
        prev = v;
      }
    }
  }
}

TEST_CASE("evaluate_threshold at k* reproduces V(1)") {
  for (const auto& p : grid()) {
    for (int n : {1, 4, 10, 100, 500}) {
      const auto s = dp_solve(p, n);
      const auto perf = evaluate_threshold(p, n, s.k_star);
      CHECK(perf.expected_payoff == Catch::Approx(s.value(1)).margin(1e-12));
      CHECK(perf.p_win + perf.p_wrong + perf.p_nopick == Catch::Approx(1.0).margin(1e-12));
      for (int r = 1; r <= n + 1; ++r) {
        CHECK(evaluate_threshold(p, n, r).expected_payoff <= perf.expected_payoff + 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(evaluate_threshold(PayoffParams::classical(), 10, 0), Error);
  CHECK_THROWS_AS(evaluate_threshold(PayoffParams::classical(), 10, 12), Error);
}

TEST_CASE("threshold payoff increments") {
  const PayoffParams p{1, 0.5, 1};
  const int n = 50;
  for (int r = 1; r < n; ++r) {
    const double diff = evaluate_threshold(p, n, r + 1).expected_payoff -
                        evaluate_threshold(p, n, r).expected_payoff;
    CHECK(diff == Catch::Approx((p.alpha + p.beta) / n * (harmonic(r, n) - p.ratio())).margin(1e-12));
  }
}

TEST_CASE("asymptotic limits") {
  const auto a = asymptotics(PayoffParams::classical());
  CHECK(a.t_star == Catch::Approx(0.36787944117144233).epsilon(1e-15));
  CHECK(a.p_win == Catch::Approx(0.36787944117144233).epsilon(1e-15));
  CHECK(a.v_limit == Catch::Approx(0.36787944117144233).epsilon(1e-15));
  CHECK(a.mean_duration_fraction == Catch::Approx(0.7357588823428847).epsilon(1e-15));

  const auto half = asymptotics({1, 1, 0});  // ratio 1/2
  CHECK(half.t_star == Catch::Approx(0.6065306597126334).epsilon(1e-15));
  CHECK(half.p_win == Catch::Approx(0.3032653298563167).epsilon(1e-15));
  CHECK(half.mean_duration_fraction == Catch::Approx(0.9097959895689501).epsilon(1e-15));

  const auto two = asymptotics({1, 0, 1});  // ratio 2
  CHECK(two.t_star == Catch::Approx(0.1353352832366127).epsilon(1e-15));
  CHECK(two.p_win == Catch::Approx(0.2706705664732254).epsilon(1e-15));
  CHECK(two.mean_duration_fraction == Catch::Approx(0.4060058497098381).epsilon(1e-15));
}

TEST_CASE("k*/n tracks t* within 2/n") {
  for (const auto& p : grid()) {
    const double t = asymptotics(p).t_star;
    for (int n : {100, 1000, 10000}) {
      CHECK(std::abs(static_cast<double>(threshold(p, n)) / n - t) <= 2.0 / n);
    }
  }
}
