#pragma once

#include <vector>

namespace stoplab {

/// Partial harmonic sum H_{k,n} = sum_{j=k}^{n-1} 1/j. H_{n,n} = 0.
/// Requires 1 <= k <= n. Terms are accumulated from j = n-1 down to j = k
/// with compensation, so every H_{k,n} is a prefix of the same sequence of
/// additions and harmonic_table() reproduces it bit for bit.
double harmonic(int k, int n);

/// Same as harmonic(), extended with H_{0,n} = +infinity.
double harmonic_or_infinity(int k, int n);

/// table[k] = harmonic_or_infinity(k, n) for k = 0..n, in O(n).
std::vector<double> harmonic_table(int n);

}  // namespace stoplab
