#include "ecsafe/random_curve.hpp"

#include <algorithm>
#include <exception>
#include <optional>
#include <sstream>
#include <thread>

#include "ecsafe/error.hpp"
#include "ecsafe/numtheory.hpp"

namespace ecsafe {
namespace {

struct Attempt {
  GenerationStats stats;
  std::optional<CurveSuite> suite;
};

Integer pick_prime(unsigned bits, std::uint64_t seed) {
  Rng rng = Rng::derive(seed, 0);
  return nt::gen_prime(nt::RandomBits{bits}, rng).p;
}

bool singular(const Integer& a, const Integer& b, const Integer& p) {
  return mod(4 * a * a * a + 27 * b * b, p) == 0;
}

Attempt run_attempt(const Integer& p, unsigned bits, std::uint64_t seed, std::uint64_t index,
                    const ValidatorPolicy& policy, const RandomGenOptions& options) {
  Attempt out;
  out.stats.attempts = 1;
  auto abort = [&out](AbortStep step) {
    ++out.stats.aborts[static_cast<std::size_t>(step)];
    return out;
  };

  Rng rng = Rng::derive(seed, index + 1);
  SeedTrace trace{seed, bits, p, index, {}};
  Integer a, b;
  if (index < options.forced_coefficients.size()) {
    a = mod(options.forced_coefficients[index].first, p);
    b = mod(options.forced_coefficients[index].second, p);
    trace.draws.push_back({"a", a});
    trace.draws.push_back({"b", b});
  } else {
    a = rng.below(p);
    trace.draws.push_back({"a", a});
    b = rng.below(p);
    while (policy.require_b_non_square && nt::legendre(b, p) != -1) {
      trace.draws.push_back({"b_rejected", b});
      b = rng.below(p);
    }
    trace.draws.push_back({"b", b});
  }
  if (singular(a, b, p)) return abort(AbortStep::Singular);

  const Curve E = Curve::with_prime(p, a, b);
  ++out.stats.orders_counted;
  const Integer N = count_points(E, rng, options.limits);
  if (!nt::is_prime(N)) return abort(AbortStep::OrderNotPrime);
  ++out.stats.order_prime;
  const Integer t = p + 1 - N;
  if (mod(t, p) == 0) return abort(AbortStep::Supersingular);
  if (N == p) return abort(AbortStep::Anomalous);

  std::optional<Point> G;
  for (unsigned i = 0; i < options.base_point_tries && !G; ++i) {
    Point R = E.random_point(rng);
    trace.draws.push_back({"gx", R.x()});
    trace.draws.push_back({"gy", R.y()});
    // N is prime, so any affine point killed by N generates the whole group.
    if (E.scalar_mul(N, R).is_infinity()) G = std::move(R);
  }
  if (!G) return abort(AbortStep::BasePointOrder);
  if (N * N <= 16 * p) return abort(AbortStep::SubgroupNotUnique);
  if (N <= pow2(policy.security_bits)) return abort(AbortStep::SubgroupTooSmall);
  if (nt::embedding_degree(N, p, policy.embedding_bound)) return abort(AbortStep::EmbeddingDegree);

  const Integer c = E.random_non_square(rng);
  trace.draws.push_back({"c", c});
  const Curve Ec = E.twist(c);
  if (singular(Ec.a(), Ec.b(), p)) return abort(AbortStep::TwistSingular);
  const Integer Nt = count_points(Ec, rng, options.limits);
  if (N + Nt != 2 * p + 2) throw Error(Errc::ConsistencyError, "curve and twist orders do not sum to 2p + 2");
  if (!nt::is_prime(Nt)) return abort(AbortStep::TwistOrderNotPrime);
  if (mod(p + 1 - Nt, p) == 0) return abort(AbortStep::TwistSupersingular);

  out.suite = CurveSuite{E, OrderInfo{N, t, N, Integer(1)}, std::move(*G), c, Nt, std::move(trace), {}};
  return out;
}

void check_bits(unsigned bits) {
  if (bits < 16 || bits > 60) throw Error(Errc::InvalidArgument, "random generation supports 16..60 bit primes");
}

std::string describe(const GenerationStats& s) {
  std::ostringstream os;
  os << s.attempts << " attempts;";
  for (std::size_t i = 0; i < kAbortStepCount; ++i)
    os << ' ' << to_string(static_cast<AbortStep>(i)) << '=' << s.aborts[i];
  return os.str();
}

/// Attempts [start, start + count) in parallel, results in index order.
std::vector<Attempt> run_batch(const Integer& p, unsigned bits, std::uint64_t seed, std::uint64_t start,
                               std::uint64_t count, const ValidatorPolicy& policy, const RandomGenOptions& options) {
  std::vector<Attempt> results(count);
  if (count == 1) {
    results[0] = run_attempt(p, bits, seed, start, policy, options);
    return results;
  }
  std::vector<std::exception_ptr> errors(count);
  {
    std::vector<std::jthread> pool;
    for (std::uint64_t i = 0; i < count; ++i) {
      pool.emplace_back([&, i] {
        try {
          results[i] = run_attempt(p, bits, seed, start + i, policy, options);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace

std::string_view to_string(AbortStep step) {
  switch (step) {
    case AbortStep::Singular: return "singular";
    case AbortStep::OrderNotPrime: return "order_not_prime";
    case AbortStep::Supersingular: return "supersingular";
    case AbortStep::Anomalous: return "anomalous";
    case AbortStep::BasePointOrder: return "base_point_order";
    case AbortStep::SubgroupNotUnique: return "subgroup_not_unique";
    case AbortStep::SubgroupTooSmall: return "subgroup_too_small";
    case AbortStep::EmbeddingDegree: return "embedding_degree";
    case AbortStep::TwistSingular: return "twist_singular";
    case AbortStep::TwistOrderNotPrime: return "twist_order_not_prime";
    case AbortStep::TwistSupersingular: return "twist_supersingular";
  }
  return "unknown";
}

GenerationStats& GenerationStats::operator+=(const GenerationStats& other) {
  attempts += other.attempts;
  orders_counted += other.orders_counted;
  order_prime += other.order_prime;
  for (std::size_t i = 0; i < kAbortStepCount; ++i) aborts[i] += other.aborts[i];
  return *this;
}

CurveSuite generate_random_curve(unsigned bits, const ValidatorPolicy& policy, std::uint64_t seed,
                                 const RandomGenOptions& options) {
  check_bits(bits);
  policy.check();
  const Integer p = pick_prime(bits, seed);
  const std::uint64_t width = std::max(1u, options.threads);
  GenerationStats total;
  for (std::uint64_t start = 0; start < options.max_attempts; start += width) {
    const std::uint64_t count = std::min(width, options.max_attempts - start);
    for (Attempt& a : run_batch(p, bits, seed, start, count, policy, options)) {
      total += a.stats;
      if (a.suite) {
        a.suite->stats = total;
        return std::move(*a.suite);
      }
    }
  }
  throw Error(Errc::RetryBudgetExhausted, "no curve survived: " + describe(total));
}

CurveSuite replay(const SeedTrace& trace, const ValidatorPolicy& policy, const RandomGenOptions& options) {
  check_bits(trace.bits);
  policy.check();
  const Integer p = pick_prime(trace.bits, trace.seed);
  if (p != trace.p) throw Error(Errc::ConsistencyError, "seed does not reproduce the recorded prime");
  Attempt a = run_attempt(p, trace.bits, trace.seed, trace.attempt, policy, options);
  if (!a.suite) throw Error(Errc::ConsistencyError, "recorded attempt no longer succeeds: " + describe(a.stats));
  if (a.suite->trace != trace) throw Error(Errc::ConsistencyError, "replayed draws differ from the trace");
  a.suite->stats = a.stats;
  return std::move(*a.suite);
}

GenerationStats survey(unsigned bits, const ValidatorPolicy& policy, std::uint64_t seed, std::uint64_t attempts,
                       const RandomGenOptions& options) {
  check_bits(bits);
  policy.check();
  const Integer p = pick_prime(bits, seed);
  const std::uint64_t width = std::max(1u, options.threads);
  GenerationStats total;
  for (std::uint64_t start = 0; start < attempts; start += width) {
    const std::uint64_t count = std::min(width, attempts - start);
    for (const Attempt& a : run_batch(p, bits, seed, start, count, policy, options)) total += a.stats;
  }
  return total;
}

}  // namespace ecsafe
