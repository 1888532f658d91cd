#pragma once
// Deterministic random streams. Every stochastic routine in the library
// draws from a RandomStream derived from (seed, path...) so that results
// are reproducible and independent of evaluation order.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace rconf {

/// SplitMix64 step; used to hash seed paths into engine seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives a child seed from a base seed and a path of stream ids.
/// derive_seed(s, {a, b}) != derive_seed(s, {a, c}) for b != c, and
/// distinct paths give statistically independent streams.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// A seeded random stream with explicit variate transforms.
///
/// The standard library's distribution objects are implementation-defined;
/// we keep the engine (mt19937_64, fully specified) and do the transforms
/// ourselves so a seed pins the exact sample sequence.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform on [a, b).
  double uniform(double a, double b);

  /// Standard normal via Box-Muller; generates pairs internally.
  double normal();

  /// Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
  double gamma(double shape);

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Fisher-Yates shuffle of indices 0..n-1.
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rconf
