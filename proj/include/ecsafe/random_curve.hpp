#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ecsafe/curve.hpp"
#include "ecsafe/order.hpp"
#include "ecsafe/validator.hpp"

namespace ecsafe {

/// Checks of the random-curve pipeline, in the order they are applied.
enum class AbortStep {
  Singular,
  OrderNotPrime,
  Supersingular,
  Anomalous,
  BasePointOrder,
  SubgroupNotUnique,
  SubgroupTooSmall,
  EmbeddingDegree,
  TwistSingular,
  TwistOrderNotPrime,
  TwistSupersingular,
};

inline constexpr std::size_t kAbortStepCount = 11;

std::string_view to_string(AbortStep step);

struct GenerationStats {
  std::uint64_t attempts = 0;        // (a, b) draws
  std::uint64_t orders_counted = 0;  // curves that reached point counting
  std::uint64_t order_prime = 0;     // of those, how many had prime N
  std::array<std::uint64_t, kAbortStepCount> aborts{};

  std::uint64_t aborted(AbortStep step) const { return aborts[static_cast<std::size_t>(step)]; }
  GenerationStats& operator+=(const GenerationStats& other);
  friend bool operator==(const GenerationStats&, const GenerationStats&) = default;
};

struct Draw {
  std::string label;  // "a", "b_rejected", "b", "gx", "gy", "c"
  Integer value;
  friend bool operator==(const Draw&, const Draw&) = default;
};

/// Everything needed to re-derive a suite: the seed selects p (stream 0) and
/// the winning attempt's stream; the draws are recorded for inspection.
struct SeedTrace {
  std::uint64_t seed = 0;
  unsigned bits = 0;
  Integer p;
  std::uint64_t attempt = 0;
  std::vector<Draw> draws;
  friend bool operator==(const SeedTrace&, const SeedTrace&) = default;
};

struct CurveSuite {
  Curve curve;
  OrderInfo order;  // h = 1, n = N
  Point base;
  Integer twist_coefficient;
  Integer twist_order;
  SeedTrace trace;
  GenerationStats stats;  // describes the search, not the suite; ignored by ==

  Subject subject() const { return Subject{curve, order, base, std::nullopt}; }
  friend bool operator==(const CurveSuite& x, const CurveSuite& y) {
    return x.curve == y.curve && x.order == y.order && x.base == y.base &&
           x.twist_coefficient == y.twist_coefficient && x.twist_order == y.twist_order && x.trace == y.trace;
  }
};

struct RandomGenOptions {
  std::uint64_t max_attempts = 1'000'000;
  unsigned threads = 1;          // attempts evaluated concurrently; result independent of this
  unsigned base_point_tries = 8;
  CountLimits limits;
  /// Test hook: attempt i uses forced_coefficients[i] instead of drawing (a, b).
  std::vector<std::pair<Integer, Integer>> forced_coefficients;
};

/// Random-approach generation over a random prime of `bits` bits.
/// InvalidArgument outside 16..60 bits; RetryBudgetExhausted when no attempt
/// in `max_attempts` survives every check (the message carries the abort counts).
CurveSuite generate_random_curve(unsigned bits, const ValidatorPolicy& policy, std::uint64_t seed,
                                 const RandomGenOptions& options = {});

/// Re-runs the recorded attempt. ConsistencyError if the result differs from
/// what the trace records.
CurveSuite replay(const SeedTrace& trace, const ValidatorPolicy& policy, const RandomGenOptions& options = {});

/// Runs `attempts` attempts without stopping at the first success and returns
/// the abort statistics.
GenerationStats survey(unsigned bits, const ValidatorPolicy& policy, std::uint64_t seed, std::uint64_t attempts,
                       const RandomGenOptions& options = {});

}  // namespace ecsafe
