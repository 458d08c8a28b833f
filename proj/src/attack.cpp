#include "ecsafe/attack.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <ctime>
#include <exception>
#include <map>
#include <thread>
#include <unordered_map>

#include "baby_steps.hpp"
#include "ecsafe/error.hpp"
#include "ecsafe/order.hpp"

namespace ecsafe {
namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t mix(std::uint64_t v) {
  v ^= v >> 30;
  v *= 0xbf58476d1ce4e5b9ULL;
  v ^= v >> 27;
  v *= 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

std::uint64_t low_limb(const Integer& v) { return mpz_getlimbn(v.get_mpz_t(), 0); }

/// Walk branch of an affine point; independent of the distinguished-point bits.
unsigned branch_of(const Point& X, unsigned branches) {
  if (X.is_infinity()) return 0;
  return static_cast<unsigned>((mix(low_limb(X.x())) >> 32) % branches);
}

bool distinguished(const Point& X, unsigned dp_bits) {
  if (X.is_infinity()) return true;
  if (dp_bits == 0) return true;
  return (low_limb(X.x()) & ((std::uint64_t{1} << dp_bits) - 1)) == 0;
}

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
}

void verify(const DlpInstance& inst, AttackResult& r) {
  r.l = mod(r.l, inst.n);
  if (inst.curve.scalar_mul(r.l, inst.P) != inst.Q)
    throw Error(Errc::ConsistencyError, "recovered logarithm does not reproduce Q");
}

std::uint64_t ceil_sqrt(const Integer& n) {
  Integer m = isqrt(n);
  if (m * m < n) ++m;
  return to_u64(m);
}

/// l with l G = H for G of order n, or empty when H is not in <G>.
std::optional<Integer> bsgs_core(const Curve& E, const Point& G, const Integer& n, const Point& H,
                                 std::uint64_t& ops) {
  const std::uint64_t m = ceil_sqrt(n);
  detail::BabySteps baby(E, G, m, &ops);
  // Stride m G from the last baby step.
  Point stride = E.add(E.scalar_mul(from_u64(m - 1), G), G);
  ++ops;
  if (m == 1) stride = G;
  const Point back = E.negate(stride);
  Point R = H;
  for (std::uint64_t i = 0; i < m; ++i) {
    if (auto j = baby.lookup(R)) return mod(from_u64(i) * from_u64(m) + from_u64(*j), n);
    if (i + 1 < m) {
      R = E.add(R, back);
      ++ops;
    }
  }
  return std::nullopt;
}

}  // namespace

void check_instance(const DlpInstance& inst) {
  const Curve& E = inst.curve;
  if (inst.P.is_infinity()) throw Error(Errc::InvalidArgument, "P must be an affine point");
  if (!E.contains(inst.P)) throw Error(Errc::InvalidArgument, "P is not on the curve");
  if (!E.contains(inst.Q)) throw Error(Errc::InvalidArgument, "Q is not on the curve");
  if (inst.n <= 1) throw Error(Errc::InvalidArgument, "n must exceed 1");
  if (!E.scalar_mul(inst.n, inst.P).is_infinity()) throw Error(Errc::InvalidArgument, "n P is not the identity");
}

std::string_view to_string(AttackMethod m) {
  switch (m) {
    case AttackMethod::Exhaustive: return "exhaustive";
    case AttackMethod::Bsgs: return "bsgs";
    case AttackMethod::Rho: return "rho";
    case AttackMethod::Lambda: return "lambda";
    case AttackMethod::PohligHellman: return "ph";
  }
  return "unknown";
}

std::optional<AttackMethod> method_from_string(std::string_view name) {
  for (AttackMethod m : {AttackMethod::Exhaustive, AttackMethod::Bsgs, AttackMethod::Rho, AttackMethod::Lambda,
                         AttackMethod::PohligHellman})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

AttackResult exhaustive_search(const DlpInstance& inst, std::uint64_t cap) {
  check_instance(inst);
  const auto start = Clock::now();
  AttackResult r{AttackMethod::Exhaustive, Integer(0)};
  Point R;
  for (Integer l = 0; l < inst.n; ++l) {
    if (l >= cap) throw Error(Errc::CapExceeded, "exhaustive search reached its cap");
    if (R == inst.Q) {
      r.l = l;
      r.wall_time = Clock::now() - start;
      verify(inst, r);
      return r;
    }
    R = inst.curve.add(R, inst.P);
    ++r.group_ops;
  }
  throw Error(Errc::OutOfSubgroup, "Q is not a multiple of P");
}

AttackResult bsgs(const DlpInstance& inst) {
  check_instance(inst);
  const auto start = Clock::now();
  AttackResult r{AttackMethod::Bsgs, Integer(0)};
  auto l = bsgs_core(inst.curve, inst.P, inst.n, inst.Q, r.group_ops);
  if (!l) throw Error(Errc::OutOfSubgroup, "no giant step met the baby table");
  r.l = *l;
  r.wall_time = Clock::now() - start;
  verify(inst, r);
  return r;
}

namespace {

constexpr unsigned kRhoBranches = 32;
constexpr std::uint64_t kRhoRestartCap = 1000;

struct Walker {
  Point X;
  Integer a, b;  // X = a P + b Q
  Rng rng;
  std::uint64_t since_dp = 0;
  double cpu = 0;
};

struct RhoEvent {
  enum class Kind { None, Distinguished, Infinity, Stalled } kind = Kind::None;
  std::uint64_t steps = 0;
};

struct DpEntry {
  Integer y, a, b;
};

}  // namespace

AttackResult pollard_rho(const DlpInstance& inst, unsigned walkers, Rng& rng, unsigned threads) {
  check_instance(inst);
  if (!nt::is_prime(inst.n)) throw Error(Errc::InvalidArgument, "rho needs a prime subgroup order");
  if (walkers == 0) throw Error(Errc::InvalidArgument, "at least one walker is needed");
  const Curve& E = inst.curve;
  const Integer& n = inst.n;
  if (!E.scalar_mul(n, inst.Q).is_infinity()) throw Error(Errc::OutOfSubgroup, "Q is not in the subgroup of P");

  const auto start = Clock::now();
  AttackResult r{AttackMethod::Rho, Integer(0)};
  r.walkers = walkers;

  // Aim for about 32 distinguished points per walker.
  const double expected = std::sqrt(std::numbers::pi * n.get_d() / 2.0);
  const double per_dp = expected / (32.0 * walkers);
  const unsigned dp_bits = per_dp > 2 ? static_cast<unsigned>(std::floor(std::log2(per_dp))) : 0;
  const std::uint64_t max_walk = std::uint64_t{20} << dp_bits;

  std::vector<Point> R(kRhoBranches);
  std::vector<Integer> c(kRhoBranches), d(kRhoBranches);
  for (unsigned j = 0; j < kRhoBranches; ++j) {
    c[j] = rng.below(n);
    d[j] = rng.below(n);
    R[j] = E.add(E.scalar_mul(c[j], inst.P, &r.setup_ops), E.scalar_mul(d[j], inst.Q, &r.setup_ops));
    ++r.setup_ops;
  }

  const std::uint64_t stream_seed = rng.next();
  std::vector<Walker> ws;
  ws.reserve(walkers);
  auto restart = [&](Walker& w) {
    w.a = w.rng.below(n);
    w.b = w.rng.below(n);
    w.X = E.add(E.scalar_mul(w.a, inst.P, &r.setup_ops), E.scalar_mul(w.b, inst.Q, &r.setup_ops));
    ++r.setup_ops;
    w.since_dp = 0;
  };
  for (unsigned i = 0; i < walkers; ++i) {
    ws.push_back(Walker{Point(), 0, 0, Rng::derive(stream_seed, i), 0, 0});
    restart(ws.back());
  }

  // One walker runs until its next distinguished point.
  auto advance = [&](Walker& w) {
    RhoEvent ev;
    const double t0 = thread_cpu_seconds();
    for (;;) {
      if (w.X.is_infinity()) {
        ev.kind = RhoEvent::Kind::Infinity;
        break;
      }
      if (w.since_dp > 0 && distinguished(w.X, dp_bits)) {
        ev.kind = RhoEvent::Kind::Distinguished;
        break;
      }
      if (w.since_dp >= max_walk) {
        ev.kind = RhoEvent::Kind::Stalled;
        break;
      }
      const unsigned j = branch_of(w.X, kRhoBranches);
      w.X = E.add(w.X, R[j]);
      w.a += c[j];
      if (w.a >= n) w.a -= n;
      w.b += d[j];
      if (w.b >= n) w.b -= n;
      ++w.since_dp;
      ++ev.steps;
    }
    w.cpu += thread_cpu_seconds() - t0;
    return ev;
  };

  const unsigned pool_size = std::min(walkers, threads == 0 ? walkers : threads);
  std::map<Integer, DpEntry> store;
  std::vector<RhoEvent> events(walkers);

  auto solve = [&](const Integer& num, const Integer& den) -> std::optional<Integer> {
    const Integer dd = mod(den, n);
    if (dd == 0) return std::nullopt;
    Integer inv;
    mpz_invert(inv.get_mpz_t(), dd.get_mpz_t(), n.get_mpz_t());
    return mod(num * inv, n);
  };

  for (;;) {
    if (pool_size <= 1) {
      for (unsigned i = 0; i < walkers; ++i) events[i] = advance(ws[i]);
    } else {
      std::atomic<unsigned> next{0};
      std::vector<std::exception_ptr> errors(pool_size);
      {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < pool_size; ++t) {
          pool.emplace_back([&, t] {
            try {
              for (unsigned i; (i = next.fetch_add(1)) < walkers;) events[i] = advance(ws[i]);
            } catch (...) {
              errors[t] = std::current_exception();
            }
          });
        }
      }
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }

    for (unsigned i = 0; i < walkers; ++i) {
      Walker& w = ws[i];
      r.group_ops += events[i].steps;
      std::optional<Integer> l;
      switch (events[i].kind) {
        case RhoEvent::Kind::None:
          break;
        case RhoEvent::Kind::Stalled:
          ++r.restarts;
          restart(w);
          break;
        case RhoEvent::Kind::Infinity:
          // a P + b Q = O.
          l = solve(-w.a, w.b);
          if (!l) {
            ++r.restarts;
            restart(w);
          }
          break;
        case RhoEvent::Kind::Distinguished: {
          auto [it, fresh] = store.try_emplace(w.X.x(), DpEntry{w.X.y(), w.a, w.b});
          w.since_dp = 0;
          if (fresh) break;
          const DpEntry& prior = it->second;
          // Same point: (a1 - a2) = (b2 - b1) l. Opposite point: a1 + a2 = -(b1 + b2) l.
          if (prior.y == w.X.y())
            l = solve(w.a - prior.a, prior.b - w.b);
          else
            l = solve(-(w.a + prior.a), w.b + prior.b);
          if (!l) {
            ++r.restarts;
            restart(w);
          }
          break;
        }
      }
      if (l) {
        r.l = *l;
        r.wall_time = Clock::now() - start;
        for (const Walker& x : ws) r.walker_cpu_seconds.push_back(x.cpu);
        verify(inst, r);
        return r;
      }
    }
    if (r.restarts > kRhoRestartCap) throw Error(Errc::DegenerateCollision, "rho kept producing useless collisions");
  }
}

AttackResult pollard_lambda(const DlpInstance& inst, const Integer& low, const Integer& high, Rng& rng) {
  check_instance(inst);
  if (low < 0 || high < low) throw Error(Errc::InvalidArgument, "interval must satisfy 0 <= low <= high");
  const Curve& E = inst.curve;
  const auto start = Clock::now();
  AttackResult r{AttackMethod::Lambda, Integer(0)};

  const Integer w = high - low + 1;
  const double root = std::sqrt(w.get_d());

  // Jumps 2^0 .. 2^(k-1) with mean near sqrt(w) / 2.
  unsigned k = 1;
  while (static_cast<double>((std::uint64_t{1} << k) - 1) / k < root / 2 && k < 62) ++k;
  std::vector<Point> jump(k);
  jump[0] = inst.P;
  for (unsigned i = 1; i < k; ++i) {
    jump[i] = E.dbl(jump[i - 1]);
    ++r.group_ops;
  }
  const unsigned dp_bits = root > 16 ? static_cast<unsigned>(std::floor(std::log2(root / 8))) : 0;
  const std::uint64_t budget = static_cast<std::uint64_t>(40 * root) + 64 + (std::uint64_t{16} << dp_bits);

  struct Kangaroo {
    bool tame;
    Point X;
    Integer dist;  // tame: X = (mid + dist) P; wild: X = Q + dist P
  };
  const Integer mid = low + w / 2;
  Kangaroo roos[2] = {{true, E.scalar_mul(mid, inst.P, &r.group_ops), 0}, {false, inst.Q, 0}};
  auto restart = [&](Kangaroo& kg) {
    const Integer offset = 1 + rng.below(from_u64(static_cast<std::uint64_t>(root) + 1));
    kg.dist += offset;
    kg.X = E.add(kg.X, E.scalar_mul(offset, inst.P, &r.group_ops));
    ++r.group_ops;
  };

  std::map<std::pair<Integer, Integer>, std::pair<bool, Integer>> store;
  auto key_of = [](const Point& X) {
    return X.is_infinity() ? std::make_pair(Integer(-1), Integer(-1)) : std::make_pair(X.x(), X.y());
  };

  std::uint64_t hops = 0;
  for (;;) {
    for (Kangaroo& kg : roos) {
      if (distinguished(kg.X, dp_bits)) {
        auto [it, fresh] = store.try_emplace(key_of(kg.X), kg.tame, kg.dist);
        if (!fresh) {
          if (it->second.first == kg.tame) {
            ++r.restarts;
            restart(kg);
            continue;
          }
          const Integer& tame_dist = kg.tame ? kg.dist : it->second.second;
          const Integer& wild_dist = kg.tame ? it->second.second : kg.dist;
          const Integer l = mod(mid + tame_dist - wild_dist, inst.n);
          if (l < low || l > high || E.scalar_mul(l, inst.P) != inst.Q)
            throw Error(Errc::NotInInterval, "kangaroos met outside the promised interval");
          r.l = l;
          r.wall_time = Clock::now() - start;
          verify(inst, r);
          return r;
        }
      }
      if (hops >= budget) throw Error(Errc::NotInInterval, "kangaroo budget exhausted");
      const unsigned j = branch_of(kg.X, k);
      kg.X = E.add(kg.X, jump[j]);
      kg.dist += pow2(j);
      ++hops;
      ++r.group_ops;
    }
  }
}

AttackResult pohlig_hellman(const DlpInstance& inst, const nt::Factorization& factors) {
  check_instance(inst);
  if (!factors.complete() || factors.product() != inst.n)
    throw Error(Errc::BadFactorization, "factorization does not multiply to n");
  for (const auto& f : factors.factors)
    if (f.exponent == 0 || !nt::is_prime(f.prime)) throw Error(Errc::BadFactorization, "factor is not prime");

  const Curve& E = inst.curve;
  const Integer& n = inst.n;
  const auto start = Clock::now();
  AttackResult r{AttackMethod::PohligHellman, Integer(0)};

  std::vector<Integer> residues, moduli;
  for (const auto& f : factors.factors) {
    const Integer& q = f.prime;
    const Point gamma = E.scalar_mul(n / q, inst.P, &r.group_ops);
    Integer lk = 0;
    Integer qj = 1;
    for (unsigned j = 0; j < f.exponent; ++j) {
      // H = (n / q^(j+1)) (Q - lk P) has order dividing q.
      const Point shifted = E.add(inst.Q, E.negate(E.scalar_mul(lk, inst.P, &r.group_ops)));
      ++r.group_ops;
      const Point H = E.scalar_mul(n / (qj * q), shifted, &r.group_ops);
      auto digit = bsgs_core(E, gamma, q, H, r.group_ops);
      if (!digit) throw Error(Errc::OutOfSubgroup, "Q is not in the subgroup of P");
      lk += *digit * qj;
      qj *= q;
    }
    residues.push_back(lk);
    moduli.push_back(qj);
  }
  r.l = nt::crt(residues, moduli);
  r.wall_time = Clock::now() - start;
  if (E.scalar_mul(mod(r.l, n), inst.P) != inst.Q) throw Error(Errc::OutOfSubgroup, "Q is not in the subgroup of P");
  verify(inst, r);
  return r;
}

AttackResult run_attack(AttackMethod method, const DlpInstance& inst, Rng& rng, unsigned walkers, unsigned threads,
                        std::uint64_t cap) {
  switch (method) {
    case AttackMethod::Exhaustive: return exhaustive_search(inst, cap);
    case AttackMethod::Bsgs: return bsgs(inst);
    case AttackMethod::Rho: return pollard_rho(inst, walkers, rng, threads);
    case AttackMethod::Lambda: {
      const auto interval = inst.interval.value_or(std::make_pair(Integer(0), inst.n - 1));
      return pollard_lambda(inst, interval.first, interval.second, rng);
    }
    case AttackMethod::PohligHellman: {
      const nt::Factorization f = inst.factors ? *inst.factors : nt::factor_trial(inst.n, std::uint64_t{1} << 24);
      return pohlig_hellman(inst, f);
    }
  }
  throw Error(Errc::InvalidArgument, "unknown attack method");
}

GeneratedInstance prime_order_instance(unsigned bits, Rng& rng) {
  for (;;) {
    const Integer p = nt::gen_prime(nt::RandomBits{bits}, rng).p;
    for (int tries = 0; tries < 200; ++tries) {
      const Integer a = rng.below(p), b = rng.below(p);
      if (mod(4 * a * a * a + 27 * b * b, p) == 0) continue;
      const Curve E = Curve::with_prime(p, a, b);
      const Integer N = count_points(E, rng);
      if (!nt::is_prime(N)) continue;
      const Point P = E.random_point(rng);
      const Integer l = rng.below(N);
      DlpInstance inst{E, P, N, E.scalar_mul(l, P), nt::Factorization{{{N, 1}}, Integer(1)}, std::nullopt};
      return GeneratedInstance{std::move(inst), l, OrderInfo{N, p + 1 - N, N, Integer(1)}};
    }
  }
}

GeneratedInstance smooth_order_instance(unsigned bits, std::uint64_t smooth_bound, Rng& rng) {
  for (;;) {
    const Integer p = nt::gen_prime(nt::RandomBits{bits}, rng).p;
    for (int tries = 0; tries < 2000; ++tries) {
      const Integer a = rng.below(p), b = rng.below(p);
      if (mod(4 * a * a * a + 27 * b * b, p) == 0) continue;
      const Curve E = Curve::with_prime(p, a, b);
      const Integer N = count_points(E, rng);
      const nt::Factorization fN = nt::factor_trial(N, smooth_bound);
      if (!fN.complete() || fN.factors.back().prime >= smooth_bound) continue;
      const Point P = E.random_point(rng);
      const Integer n = point_order(E, P, N, fN);
      if (bit_length(n) + 4 < bits) continue;
      const Integer l = rng.below(n);
      DlpInstance inst{E, P, n, E.scalar_mul(l, P), nt::factor_trial(n, smooth_bound), std::nullopt};
      return GeneratedInstance{std::move(inst), l, OrderInfo{N, p + 1 - N, n, N / n}};
    }
  }
}

}  // namespace ecsafe
