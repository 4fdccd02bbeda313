#pragma once

#include <cstdint>
#include <random>

#include "tvlab/types.hpp"

namespace tvlab {

/// Seeded generator whose streams are identical across standard libraries:
/// std::mt19937_64 output is fully specified, and the distributions below
/// are written out instead of using the implementation-defined std ones.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller).
  double normal();
  Complex complex_normal() { return {normal(), normal()}; }
  /// Uniform on {0, ..., n-1}.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer over a combined pair; derives independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace tvlab
