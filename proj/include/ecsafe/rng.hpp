#pragma once

#include <cstdint>
#include <random>

#include "ecsafe/integer.hpp"

namespace ecsafe {

/// Deterministic randomness source. Every random decision in the toolkit goes
/// through one of these so that a seed reproduces a run bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream for (seed, stream); used to give each attempt or
  /// walker its own reproducible sequence.
  static Rng derive(std::uint64_t seed, std::uint64_t stream);

  /// Seed drawn from the operating system.
  static std::uint64_t entropy_seed();

  std::uint64_t next() { return engine_(); }
  bool bit() { return (engine_() >> 63) != 0; }

  /// Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  Integer below(const Integer& bound);

  /// Uniform integer with exactly `bits` bits (top bit set).
  Integer exact_bits(unsigned bits);

 private:
  std::mt19937_64 engine_;
};

}  // namespace ecsafe
