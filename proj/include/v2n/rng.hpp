#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace v2n {

/// Seedable, splittable pseudorandom stream.
///
/// Children are derived from the parent's seed and a name only, never from
/// the parent's consumed state, so `split("env")` yields the same stream no
/// matter how many draws the parent has already made.
class Rng {
 public:
  using Engine = std::mt19937_64;

  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }

  Rng split(std::string_view name) const;
  Rng split(std::uint64_t index) const;

  Engine& engine() { return engine_; }

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal(double mean = 0.0, double stddev = 1.0);
  double gamma(double shape);
  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t seed_;
  Engine engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace v2n
