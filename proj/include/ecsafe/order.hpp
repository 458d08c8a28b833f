#pragma once

#include <cstddef>
#include <utility>

#include "ecsafe/curve.hpp"

namespace ecsafe {

/// Size limits for the point counters. These are configuration, not constants.
struct CountLimits {
  Integer exhaustive_ceiling = pow2(22);  // count_exhaustive requires p < ceiling
  Integer bsgs_floor = pow2(16);          // below this count_bsgs delegates to count_exhaustive
  Integer bsgs_ceiling = pow2(64);        // count_bsgs requires p <= ceiling
  unsigned max_points = 20;               // random points sampled before giving up
};

/// [p + 1 - floor(2 sqrt p), p + 1 + floor(2 sqrt p)].
std::pair<Integer, Integer> hasse_interval(const Integer& p);

/// N = 1 + sum_x (1 + (x^3 + ax + b / p)). TooLarge when p >= ceiling.
Integer count_exhaustive(const Curve& E, const CountLimits& limits = {});

/// Order search in the Hasse interval with baby-step giant-step on random
/// points, refined through the quadratic twist when the points alone leave
/// several candidates. Ambiguous if candidates remain after `max_points`.
Integer count_bsgs(const Curve& E, Rng& rng, const CountLimits& limits = {});

/// count_exhaustive for p < bsgs_floor, count_bsgs otherwise.
Integer count_points(const Curve& E, Rng& rng, const CountLimits& limits = {});

/// t = p + 1 - N; HasseViolation when |t| > 2 sqrt(p).
Integer trace_of(const Curve& E, const Integer& N);

}  // namespace ecsafe
