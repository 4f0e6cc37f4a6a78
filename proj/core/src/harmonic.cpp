#include "stoplab/harmonic.hpp"

#include <limits>
#include <string>

#include "stoplab/error.hpp"
#include "stoplab/summation.hpp"

namespace stoplab {

double harmonic(int k, int n) {
  if (k < 1 || k > n) {
    fail(ErrorCode::kOutOfRange, "harmonic(k, n) requires 1 <= k <= n, got k=" +
                                     std::to_string(k) + " n=" + std::to_string(n));
  }
  CompensatedSum sum;
  for (int j = n - 1; j >= k; --j) sum.add(1.0 / static_cast<double>(j));
  return sum.value();
}

double harmonic_or_infinity(int k, int n) {
  if (k == 0 && n >= 1) return std::numeric_limits<double>::infinity();
  return harmonic(k, n);
}

std::vector<double> harmonic_table(int n) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "harmonic_table requires n >= 1");
  std::vector<double> table(static_cast<std::size_t>(n) + 1);
  table[0] = std::numeric_limits<double>::infinity();
  table[n] = 0.0;
  CompensatedSum sum;
  for (int j = n - 1; j >= 1; --j) {
    sum.add(1.0 / static_cast<double>(j));
    table[j] = sum.value();
  }
  return table;
}

}  // namespace stoplab
