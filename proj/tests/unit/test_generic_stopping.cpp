#include <cmath>

#include <catch_amalgamated.hpp>

#include "stoplab/candidate_chain.hpp"
#include "stoplab/error.hpp"
#include "stoplab/generic_stopping.hpp"
#include "stoplab/solver.hpp"

using namespace stoplab;

TEST_CASE("two-stage toy problem solved by hand") {
  // States {0,1}; from either state move to 0 or 1 with probability 1/2.
  StageKernel k{{{0, 0.5}, {1, 0.5}}, {{0, 0.5}, {1, 0.5}}};
  GenericStoppingProblem problem(2, 2, {k}, [](int stage, std::size_t x) {
    return x == 1 ? 1.0 + stage : 0.0;
  });
  const auto s = dp_solve_generic(problem);
  // v(2,x) = f; v(1,x) = max(f(1,x), (0+3)/2); v(0,x) = max(f(0,x), (1.5+2)/2).
  CHECK(s.v(2, 1) == 3.0);
  CHECK(s.v(1, 0) == 1.5);
  CHECK(s.v(1, 1) == 2.0);
  CHECK(s.v(0, 0) == 1.75);
  CHECK(s.v(0, 1) == 1.75);
  CHECK_FALSE(s.in_stopping_set(0, 1));
  CHECK(s.in_stopping_set(1, 1));
  CHECK_FALSE(s.in_stopping_set(1, 0));
  CHECK(s.in_stopping_set(2, 0));

  const std::vector<std::size_t> path{1, 0, 1};
  CHECK(first_entry(s, path) == 2);
  const std::vector<std::size_t> path2{0, 1, 0};
  CHECK(first_entry(s, path2) == 1);
}

TEST_CASE("mean and maximum operators") {
  StageKernel k{{{0, 0.25}, {1, 0.75}}, {{1, 1.0}}};
  GenericStoppingProblem problem(1, 2, {k}, [](int, std::size_t x) { return x == 0 ? 4.0 : 0.0; });
  StageStateFunction f = [](int, std::size_t x) { return x == 0 ? 4.0 : 8.0; };
  CHECK(mean_operator(problem, f, 0, 0) == 7.0);
  StageStateFunction g = [](int, std::size_t x) { return x == 0 ? 4.0 : 0.0; };
  CHECK(maximum_operator(problem, g, 0, 0) == 4.0);
  CHECK(maximum_operator(problem, f, 0, 0) == 7.0);
  CHECK_THROWS_AS(mean_operator(problem, f, 1, 0), Error);
}

TEST_CASE("horizon zero stops immediately") {
  GenericStoppingProblem problem(0, 3, {}, [](int, std::size_t x) { return static_cast<double>(x); });
  const auto s = dp_solve_generic(problem);
  REQUIRE(s.value.size() == 1);
  for (std::size_t x = 0; x < 3; ++x) {
    CHECK(s.v(0, x) == static_cast<double>(x));
    CHECK(s.in_stopping_set(0, x));
  }
}

TEST_CASE("invalid kernels are rejected") {
  StageKernel bad{{{0, 0.5}, {1, 0.4}}, {{1, 1.0}}};
  GenericStoppingProblem problem(1, 2, {bad}, [](int, std::size_t) { return 0.0; });
  CHECK_THROWS_AS(problem.validate_kernel(), Error);
  StageKernel negative{{{0, 1.5}, {1, -0.5}}, {{1, 1.0}}};
  GenericStoppingProblem p2(1, 2, {negative}, [](int, std::size_t) { return 0.0; });
  CHECK_THROWS_AS(p2.validate_kernel(), Error);
  StageKernel out_of_range{{{5, 1.0}}, {{1, 1.0}}};
  CHECK_THROWS_AS(GenericStoppingProblem(1, 2, {out_of_range}, [](int, std::size_t) { return 0.0; }),
                  Error);
}

TEST_CASE("generic engine on the candidate chain agrees with dp_solve") {
  for (double beta : {0.0, 1.0}) {
    for (double gamma : {0.0, 0.5, 2.0}) {
      const PayoffParams p{1, beta, gamma};
      for (int n : {1, 2, 7, 40}) {
        const CandidateChain chain(n);
        const auto g = dp_solve_generic(chain.to_problem(p));
        const auto s = dp_solve(p, n);
        for (int k = 1; k <= n; ++k) {
          CHECK(std::abs(g.v(0, CandidateChain::generic_state(k)) - s.value(k)) <= 1e-12);
        }
        // The stopping set at stage 0 is exactly {k >= k*} away from ties.
        for (int k = 1; k <= n; ++k) {
          CHECK(g.in_stopping_set(0, CandidateChain::generic_state(k)) == (k >= s.k_star));
        }
      }
    }
  }
}
