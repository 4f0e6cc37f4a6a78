#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "stoplab/json.hpp"

namespace stoplab {

using BigInt = boost::multiprecision::cpp_int;

/// Bases for the value range [1, a^n]; one is drawn uniformly per instance.
inline constexpr std::array<int, 5> kValueBases{2, 3, 5, 7, 11};

/// One experiment: n distinct positive integers in presentation order.
class SequenceInstance {
 public:
  /// Validates distinctness and the range [1, base_a^n].
  SequenceInstance(int base_a, std::vector<BigInt> values);

  int n() const noexcept { return static_cast<int>(values_.size()); }
  int base_a() const noexcept { return base_a_; }
  const std::vector<BigInt>& values() const noexcept { return values_; }
  const BigInt& value(int step) const { return values_.at(static_cast<std::size_t>(step - 1)); }
  /// 1-based position of the maximum.
  int best_index() const noexcept { return best_index_; }

  /// is_candidate[k-1] is true iff value k exceeds every earlier value.
  std::vector<bool> candidate_flags() const;
  /// Rank of each value among all n (1 = smallest).
  std::vector<int> ranks() const;

  friend bool operator==(const SequenceInstance&, const SequenceInstance&) = default;

 private:
  int base_a_;
  std::vector<BigInt> values_;
  int best_index_;
};

/// Draws base_a uniformly from kValueBases, then n distinct values uniformly
/// without replacement from [1, base_a^n] (rejection on collision), in draw
/// order. Deterministic in seed.
SequenceInstance gen_instance(int n, std::uint64_t seed);

/// Relative-maximum flags for an arbitrary ordered sequence of ranks.
std::vector<bool> candidate_flags(std::span<const int> ranks);

/// Serialized as {"n", "base_a", "values": [decimal strings], "best_index"}.
Json instance_to_json(const SequenceInstance& instance);
SequenceInstance instance_from_json(const Json& j);

std::vector<std::string> values_as_strings(const SequenceInstance& instance);

}  // namespace stoplab
