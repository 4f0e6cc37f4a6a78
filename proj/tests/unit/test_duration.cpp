#include <cmath>

#include <catch_amalgamated.hpp>

#include "permutation_oracle.hpp"
#include "stoplab/asymptotics.hpp"
#include "stoplab/duration.hpp"
#include "stoplab/error.hpp"
#include "stoplab/harmonic.hpp"
#include "stoplab/solver.hpp"

using namespace stoplab;

TEST_CASE("sum form equals k H + k") {
  for (int n : {1, 2, 3, 10, 99, 1000, 2000}) {
    for (int k = 1; k <= n; ++k) {
      CHECK(std::abs(duration_sum_form(n, k) - duration_closed_form(n, k)) <= 1e-10);
    }
  }
  CHECK(duration_closed_form(5, 5) == 5.0);
}

TEST_CASE("m(k) at n = 10, both indexings") {
  const auto p = PayoffParams::classical();
  CHECK(mean_decision_time(p, 10) == Catch::Approx(6.9869047619047615).epsilon(1e-14));
  CHECK(mean_decision_time(p, 10, DurationIndexing::kAsPrinted) ==
        Catch::Approx(7.982539682539683).epsilon(1e-14));
  for (int k = 0; k <= 3; ++k) {
    CHECK(expected_duration(p, 10, k) == mean_decision_time(p, 10));
  }
  CHECK(expected_duration(p, 10, 4) == Catch::Approx(4 * harmonic(4, 10) + 4));
  CHECK(expected_duration(p, 10, 5, DurationIndexing::kAsPrinted) ==
        expected_duration(p, 10, 5));
  CHECK_THROWS_AS(expected_duration(p, 10, 11), Error);
  CHECK_THROWS_AS(expected_duration(p, 10, -1), Error);
}

TEST_CASE("printed indexing over-states by H_{k*,n}") {
  for (int n : {10, 100, 1000}) {
    const auto p = PayoffParams::classical();
    const int k = threshold(p, n);
    CHECK(mean_decision_time(p, n, DurationIndexing::kAsPrinted) - mean_decision_time(p, n) ==
          Catch::Approx(harmonic(k, n)).epsilon(1e-12));
  }
}

TEST_CASE("k* = 1 has m(0) = 1 H_{1,n} + 1 under the printed pivot") {
  const PayoffParams generous{1, 0, 100};  // huge ratio, k* = 1
  REQUIRE(threshold(generous, 20) == 1);
  CHECK(mean_decision_time(generous, 20) == 1.0);
  CHECK(mean_decision_time(generous, 20, DurationIndexing::kAsPrinted) ==
        Catch::Approx(harmonic(1, 20) + 1));
}

TEST_CASE("exhaustive mean decision time selects the k*-1 pivot") {
  const auto tallies = oracle::enumerate_thresholds(8);
  const auto p = PayoffParams::classical();
  const int k = threshold(p, 8);
  const double exact = tallies[k - 1].mean_duration();
  CHECK(exact == Catch::Approx(6.2785714285714285).epsilon(1e-14));
  CHECK(mean_decision_time(p, 8) == Catch::Approx(exact).epsilon(1e-13));
  CHECK(mean_decision_time(p, 8, DurationIndexing::kAsPrinted) ==
        Catch::Approx(7.038095238095238).epsilon(1e-13));
  CHECK(evaluate_threshold(p, 8, k).expected_duration == Catch::Approx(exact).epsilon(1e-13));
}

TEST_CASE("asymptotic duration curve") {
  const auto p = PayoffParams::classical();
  const double t = asymptotics(p).t_star;
  CHECK(asymptotic_duration(p, 1.0) == 1.0);
  CHECK(asymptotic_duration(p, 0.5) == Catch::Approx(-0.5 * std::log(0.5) + 0.5));
  CHECK(asymptotic_duration(p, 0.1) == Catch::Approx(-t * std::log(t) + t));
  CHECK(asymptotic_duration(p, 1e-9) == Catch::Approx(0.7357588823428847));
  CHECK_THROWS_AS(asymptotic_duration(p, 0.0), Error);
  CHECK_THROWS_AS(asymptotic_duration(p, 1.5), Error);
}

TEST_CASE("stop probability formula as printed") {
  const auto p = PayoffParams::classical();
  CHECK(stop_probability(p, 10) == Catch::Approx(0.2986904761904762).epsilon(1e-14));
  // Pinned finding: the formula equals p_win - 1/n for the classical rule,
  // so it follows the win probability rather than the stop probability.
  for (int n : {10, 100, 1000}) {
    const auto perf = evaluate_threshold(p, n, threshold(p, n));
    CHECK(stop_probability(p, n) == Catch::Approx(perf.p_win - 1.0 / n).margin(1e-12));
  }
}
