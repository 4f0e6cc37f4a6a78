#include "stoplab/instance.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include <boost/random/uniform_int_distribution.hpp>
#include <nlohmann/json.hpp>

#include "stoplab/error.hpp"
#include "stoplab/rng.hpp"

namespace stoplab {

SequenceInstance::SequenceInstance(int base_a, std::vector<BigInt> values)
    : base_a_(base_a), values_(std::move(values)), best_index_(0) {
  if (values_.empty()) fail(ErrorCode::kInvalidArgument, "instance needs at least one value");
  if (std::find(kValueBases.begin(), kValueBases.end(), base_a_) == kValueBases.end()) {
    fail(ErrorCode::kInvalidArgument, "base_a must be one of 2, 3, 5, 7, 11");
  }
  const BigInt upper = boost::multiprecision::pow(BigInt(base_a_), static_cast<unsigned>(n()));
  std::set<BigInt> seen;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const auto& v = values_[i];
    if (v < 1 || v > upper) {
      fail(ErrorCode::kInvalidArgument, "value at step " + std::to_string(i + 1) +
                                            " outside [1, base_a^n]");
    }
    if (!seen.insert(v).second) {
      fail(ErrorCode::kInvalidArgument, "duplicate value at step " + std::to_string(i + 1));
    }
  }
  best_index_ = static_cast<int>(std::max_element(values_.begin(), values_.end()) -
                                 values_.begin()) + 1;
}

std::vector<bool> SequenceInstance::candidate_flags() const {
  std::vector<bool> flags(values_.size());
  const BigInt* best = nullptr;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (best == nullptr || values_[i] > *best) {
      flags[i] = true;
      best = &values_[i];
    }
  }
  return flags;
}

std::vector<int> SequenceInstance::ranks() const {
  std::vector<std::size_t> order(values_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [this](std::size_t a, std::size_t b) { return values_[a] < values_[b]; });
  std::vector<int> out(values_.size());
  for (std::size_t r = 0; r < order.size(); ++r) out[order[r]] = static_cast<int>(r) + 1;
  return out;
}

SequenceInstance gen_instance(int n, std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "horizon n must be >= 1");
  Engine engine = make_stream(seed, 0);
  const int base = kValueBases[uniform_below(engine, kValueBases.size())];
  const BigInt upper = boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(n));
  boost::random::uniform_int_distribution<BigInt> draw(BigInt(1), upper);

  std::vector<BigInt> values;
  values.reserve(static_cast<std::size_t>(n));
  std::set<BigInt> seen;
  while (values.size() < static_cast<std::size_t>(n)) {
    BigInt v = draw(engine);
    if (seen.insert(v).second) values.push_back(std::move(v));
  }
  return SequenceInstance(base, std::move(values));
}

std::vector<bool> candidate_flags(std::span<const int> ranks) {
  std::vector<bool> flags(ranks.size());
  int best = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (i == 0 || ranks[i] > best) {
      flags[i] = true;
      best = ranks[i];
    }
  }
  return flags;
}

std::vector<std::string> values_as_strings(const SequenceInstance& instance) {
  std::vector<std::string> out;
  out.reserve(instance.values().size());
  for (const auto& v : instance.values()) out.push_back(v.str());
  return out;
}

Json instance_to_json(const SequenceInstance& instance) {
  Json j;
  j["n"] = instance.n();
  j["base_a"] = instance.base_a();
  j["values"] = values_as_strings(instance);
  j["best_index"] = instance.best_index();
  return j;
}

SequenceInstance instance_from_json(const Json& j) {
  try {
    std::vector<BigInt> values;
    for (const auto& v : j.at("values")) values.emplace_back(v.get<std::string>());
    SequenceInstance inst(j.at("base_a").get<int>(), std::move(values));
    if (j.contains("n") && j.at("n").get<int>() != inst.n()) {
      fail(ErrorCode::kParse, "instance n does not match value count");
    }
    if (j.contains("best_index") && j.at("best_index").get<int>() != inst.best_index()) {
      fail(ErrorCode::kParse, "instance best_index does not match values");
    }
    return inst;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("malformed instance: ") + e.what());
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e) != nullptr) throw;
    fail(ErrorCode::kParse, std::string("malformed instance value: ") + e.what());
  }
}

}  // namespace stoplab
