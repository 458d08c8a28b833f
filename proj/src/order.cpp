#include "ecsafe/order.hpp"

#include <algorithm>
#include <vector>

#include "baby_steps.hpp"
#include "ecsafe/error.hpp"

namespace ecsafe {
namespace {

constexpr std::size_t kMaxCandidates = 4096;

// Every M in [lo, hi] with M * P = infinity, or empty when there are more than
// kMaxCandidates of them (P has tiny order and says little about #E).
std::optional<std::vector<Integer>> killing_multiples(const Curve& E, const Point& P, const Integer& lo,
                                                      const Integer& hi) {
  const Integer width = hi - lo + 1;
  const std::uint64_t m = to_u64(isqrt(width) + 1);
  detail::BabySteps baby(E, P, m, nullptr);

  std::vector<Integer> out;
  if (auto d = baby.small_order()) {
    const Integer dd = from_u64(*d);
    Integer first = (lo + dd - 1) / dd * dd;
    if ((hi - first) / dd + 1 > kMaxCandidates) return std::nullopt;
    for (Integer M = first; M <= hi; M += dd) out.push_back(M);
    return out;
  }

  // (lo + i m + j) P = O  <=>  j P = -(lo + i m) P.
  const Point giant = E.negate(E.scalar_mul(from_u64(m), P));
  Point R = E.negate(E.scalar_mul(lo, P));
  for (Integer base = lo; base <= hi; base += m) {
    if (auto j = baby.lookup(R)) {
      Integer M = base + from_u64(*j);
      if (M <= hi) out.push_back(std::move(M));
      if (out.size() > kMaxCandidates) return std::nullopt;
    }
    R = E.add(R, giant);
  }
  return out;
}

std::vector<Integer> candidate_orders(const Curve& E, Rng& rng, const CountLimits& limits) {
  const auto [lo, hi] = hasse_interval(E.p());
  std::vector<Integer> candidates;
  unsigned used = 0;
  while (used < limits.max_points) {
    ++used;
    const Point P = E.random_point(rng);
    if (auto found = killing_multiples(E, P, lo, hi)) {
      candidates = std::move(*found);
      break;
    }
  }
  if (candidates.empty()) return candidates;
  while (candidates.size() > 1 && used < limits.max_points) {
    ++used;
    const Point P = E.random_point(rng);
    std::erase_if(candidates, [&](const Integer& M) { return !E.scalar_mul(M, P).is_infinity(); });
  }
  return candidates;
}

}  // namespace

std::pair<Integer, Integer> hasse_interval(const Integer& p) {
  const Integer w = isqrt(4 * p);
  return {p + 1 - w, p + 1 + w};
}

Integer count_exhaustive(const Curve& E, const CountLimits& limits) {
  if (E.p() >= limits.exhaustive_ceiling) throw Error(Errc::TooLarge, "p above the exhaustive-count ceiling");
  const std::uint64_t p = to_u64(E.p());
  const std::uint64_t a = to_u64(E.a());
  const std::uint64_t b = to_u64(E.b());
  if (p >= (std::uint64_t{1} << 31)) throw Error(Errc::TooLarge, "exhaustive counting limited to 31-bit p");

  // Quadratic-residue table: the Legendre symbol of every residue at once.
  std::vector<std::uint8_t> square(p, 0);
  for (std::uint64_t i = 1; i <= (p - 1) / 2; ++i) square[i * i % p] = 1;

  std::uint64_t count = 1;  // infinity
  for (std::uint64_t x = 0; x < p; ++x) {
    const std::uint64_t v = ((x * x % p + a) * x + b) % p;
    count += v == 0 ? 1 : 2 * square[v];
  }
  return from_u64(count);
}

Integer count_bsgs(const Curve& E, Rng& rng, const CountLimits& limits) {
  if (E.p() < limits.bsgs_floor) return count_exhaustive(E, limits);
  if (E.p() > limits.bsgs_ceiling) throw Error(Errc::TooLarge, "p above the BSGS-count ceiling");

  std::vector<Integer> candidates = candidate_orders(E, rng, limits);
  if (candidates.size() == 1) return candidates.front();

  // #E + #E' = 2p + 2 ties the curve's candidates to its twist's.
  const Curve twist = E.twist(E.random_non_square(rng));
  const std::vector<Integer> twist_candidates = candidate_orders(twist, rng, limits);
  const Integer sum = 2 * E.p() + 2;
  std::erase_if(candidates, [&](const Integer& M) {
    return std::find(twist_candidates.begin(), twist_candidates.end(), sum - M) == twist_candidates.end();
  });
  if (candidates.size() != 1) throw Error(Errc::Ambiguous, "group order not determined by sampled points");
  return candidates.front();
}

Integer count_points(const Curve& E, Rng& rng, const CountLimits& limits) {
  if (E.p() < limits.bsgs_floor) return count_exhaustive(E, limits);
  return count_bsgs(E, rng, limits);
}

Integer trace_of(const Curve& E, const Integer& N) {
  Integer t = E.p() + 1 - N;
  if (t * t > 4 * E.p()) throw Error(Errc::HasseViolation, "|p + 1 - N| exceeds 2 sqrt(p)");
  return t;
}

}  // namespace ecsafe
