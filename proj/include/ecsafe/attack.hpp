#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "ecsafe/curve.hpp"
#include "ecsafe/numtheory.hpp"
#include "ecsafe/rng.hpp"

namespace ecsafe {

/// Find l with Q = l P, where P has order n.
struct DlpInstance {
  Curve curve;
  Point P;
  Integer n;
  Point Q;
  std::optional<nt::Factorization> factors;             // for pohlig_hellman
  std::optional<std::pair<Integer, Integer>> interval;  // for pollard_lambda
};

/// InvalidArgument unless P and Q lie on the curve, P is affine, n > 1 and n P = O.
void check_instance(const DlpInstance& inst);

enum class AttackMethod { Exhaustive, Bsgs, Rho, Lambda, PohligHellman };

std::string_view to_string(AttackMethod m);
std::optional<AttackMethod> method_from_string(std::string_view name);

struct AttackResult {
  AttackMethod method;
  Integer l;                  // 0 <= l < n, l P = Q
  std::uint64_t group_ops = 0;
  std::uint64_t setup_ops = 0;  // rho only: branch table and walker starts
  std::chrono::nanoseconds wall_time{0};
  unsigned walkers = 1;
  std::uint64_t restarts = 0;
  std::vector<double> walker_cpu_seconds;  // rho only
};

/// Tries l = 0, 1, ... while l < cap. CapExceeded past the cap; OutOfSubgroup
/// when all n multiples were tried.
AttackResult exhaustive_search(const DlpInstance& inst, std::uint64_t cap);

/// Baby-step giant-step with m = ceil(sqrt n); at most 2m + 1 group operations.
/// OutOfSubgroup when Q is not a multiple of P.
AttackResult bsgs(const DlpInstance& inst);

/// Parallel rho: `walkers` additive walks over 32 branches sharing a store of
/// distinguished points. Walkers advance in rounds and their points are merged
/// in walker order, so the result does not depend on `threads` (0 = one thread
/// per walker). group_ops counts walk steps; setup_ops the precomputation.
/// n must be prime. DegenerateCollision after too many useless collisions.
AttackResult pollard_rho(const DlpInstance& inst, unsigned walkers, Rng& rng, unsigned threads = 0);

/// Kangaroo method for l promised in [low, high]. NotInInterval when the hop
/// budget (about 40 sqrt(w) for width w) runs out or the recovered l lies
/// outside the interval.
AttackResult pollard_lambda(const DlpInstance& inst, const Integer& low, const Integer& high, Rng& rng);

/// Per prime power digit extraction with bsgs, recombined by CRT.
/// BadFactorization unless the factorization is complete, prime, and multiplies to n.
AttackResult pohlig_hellman(const DlpInstance& inst, const nt::Factorization& factors);

/// Dispatch by method; uses inst.factors / inst.interval where needed.
AttackResult run_attack(AttackMethod method, const DlpInstance& inst, Rng& rng, unsigned walkers = 1,
                        unsigned threads = 0, std::uint64_t cap = std::uint64_t{1} << 32);

struct GeneratedInstance {
  DlpInstance instance;
  Integer l;         // the planted logarithm
  OrderInfo order;   // of the curve, with n the order of P
};

/// Random curve over a `bits`-bit prime with prime order; P generates it.
GeneratedInstance prime_order_instance(unsigned bits, Rng& rng);

/// Random curve over a `bits`-bit prime whose order factors entirely below
/// `smooth_bound`; P has order at least 2^(bits - 4). inst.factors is filled.
GeneratedInstance smooth_order_instance(unsigned bits, std::uint64_t smooth_bound, Rng& rng);

}  // namespace ecsafe
