#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace dsi {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic generator with platform-independent output.
///
/// Engine: std::mt19937_64, whose output sequence the C++ standard fixes.
/// Stream k of seed s is seeded with splitmix64(s + (k + 1) * 0x9E3779B97F4A7C15).
/// The distribution transforms are implemented here instead of using the
/// <random> distributions, whose algorithms vary between standard libraries:
///   uniform()  = (next() >> 11) * 2^-53, in [0, 1)
///   normal()   = Marsaglia polar method, caching the second deviate
///   below(n)   = rejection sampling on the top bits, unbiased
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  std::uint64_t below(std::uint64_t n);

  /// k distinct indices from [0, n), ascending (partial Fisher-Yates).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dsi
