#include "stoplab/rng.hpp"

namespace stoplab {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Engine make_stream(std::uint64_t seed, std::uint64_t index) {
  return Engine(mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

std::uint64_t uniform_below(Engine& engine, std::uint64_t bound) {
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x = engine();
  while (x >= limit) x = engine();
  return x % bound;
}

double uniform_unit(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace stoplab
