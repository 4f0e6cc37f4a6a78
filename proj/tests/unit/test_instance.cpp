#include <algorithm>
#include <cmath>
#include <set>

#include <catch_amalgamated.hpp>

#include "stoplab/error.hpp"
#include "stoplab/instance.hpp"
#include "stoplab/rng.hpp"

using namespace stoplab;

TEST_CASE("instances are deterministic given the seed") {
  const auto a = gen_instance(50, 123);
  const auto b = gen_instance(50, 123);
  const auto c = gen_instance(50, 124);
  CHECK(a == b);
  CHECK_FALSE(a == c);
}

TEST_CASE("instance values are distinct and in range") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 1 + static_cast<int>(seed % 40);
    const auto inst = gen_instance(n, seed);
    REQUIRE(inst.n() == n);
    CHECK(std::find(kValueBases.begin(), kValueBases.end(), inst.base_a()) != kValueBases.end());
    const BigInt top = boost::multiprecision::pow(BigInt(inst.base_a()), static_cast<unsigned>(n));
    std::set<BigInt> seen;
    for (const auto& v : inst.values()) {
      CHECK(v >= 1);
      CHECK(v <= top);
      seen.insert(v);
    }
    CHECK(seen.size() == static_cast<std::size_t>(n));
    const auto best = std::max_element(inst.values().begin(), inst.values().end());
    CHECK(inst.best_index() == 1 + static_cast<int>(best - inst.values().begin()));
  }
}

TEST_CASE("instance constructor validates") {
  CHECK_THROWS_AS(SequenceInstance(4, {1, 2}), Error);
  CHECK_THROWS_AS(SequenceInstance(2, {1, 1}), Error);
  CHECK_THROWS_AS(SequenceInstance(2, {0, 1}), Error);
  CHECK_THROWS_AS(SequenceInstance(2, {5, 1}), Error);  // 5 > 2^2
  CHECK_THROWS_AS(SequenceInstance(2, {}), Error);
  CHECK_NOTHROW(SequenceInstance(2, {4, 1}));
  CHECK_THROWS_AS(gen_instance(0, 1), Error);
}

TEST_CASE("n = 1 instance") {
  const auto inst = gen_instance(1, 9);
  CHECK(inst.best_index() == 1);
  CHECK(inst.candidate_flags() == std::vector<bool>{true});
}

TEST_CASE("ranks and candidate flags") {
  SequenceInstance inst(3, {BigInt(5), BigInt(2), BigInt(9), BigInt(7)});
  CHECK(inst.ranks() == std::vector<int>{2, 1, 4, 3});
  CHECK(inst.candidate_flags() == std::vector<bool>{true, false, true, false});
  const std::vector<int> ranks{2, 1, 4, 3};
  CHECK(candidate_flags(ranks) == inst.candidate_flags());
  CHECK(inst.best_index() == 3);
}

TEST_CASE("large horizons use exact big integers") {
  const auto inst = gen_instance(300, 5);
  const BigInt top = boost::multiprecision::pow(BigInt(inst.base_a()), 300u);
  for (const auto& v : inst.values()) CHECK(v <= top);
  const auto j = instance_to_json(inst);
  CHECK(instance_from_json(j) == inst);
}

TEST_CASE("instance JSON carries values as decimal strings") {
  SequenceInstance inst(2, {BigInt(3), BigInt(1)});
  const auto j = instance_to_json(inst);
  CHECK(j.dump() == R"({"n":2,"base_a":2,"values":["3","1"],"best_index":1})");
  CHECK(instance_from_json(j) == inst);
  auto bad = j;
  bad["values"] = Json::array({"3", "x"});
  CHECK_THROWS_AS(instance_from_json(bad), Error);
  bad = j;
  bad["best_index"] = 2;
  CHECK_THROWS_AS(instance_from_json(bad), Error);
}

TEST_CASE("the maximum sits at position 1 with frequency 1/n") {
  const int n = 10;
  const int instances = 100000;
  int hits = 0;
  for (int i = 0; i < instances; ++i) {
    if (gen_instance(n, 1000003ULL * i + 17).best_index() == 1) ++hits;
  }
  const double freq = static_cast<double>(hits) / instances;
  const double sigma = std::sqrt(0.1 * 0.9 / instances);
  CHECK(std::abs(freq - 0.1) <= 3 * sigma);
}

TEST_CASE("streams and uniform draws") {
  auto a = make_stream(1, 0);
  auto b = make_stream(1, 0);
  auto c = make_stream(1, 1);
  CHECK(a() == b());
  CHECK(a() != c());
  auto e = make_stream(7, 3);
  for (int i = 0; i < 1000; ++i) {
    CHECK(uniform_below(e, 7) < 7);
    const double u = uniform_unit(e);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(uniform_below(e, 1) == 0);
  CHECK(mix64(0) != mix64(1));
}
