#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "ecsafe/integer.hpp"
#include "ecsafe/rng.hpp"

namespace ecsafe::nt {

inline constexpr unsigned kDefaultPrimalityRounds = 40;
inline constexpr std::uint64_t kTrialDivisionLimit = 1u << 16;
inline constexpr std::uint64_t kDefaultSquarefreeEffort = 1'000'000;
inline constexpr std::uint64_t kDefaultEmbeddingBound = 100;

/// Miller-Rabin with `rounds` bases (the first twelve primes, then bases derived
/// deterministically from n). Exact trial division below 2^16.
bool is_prime(const Integer& n, unsigned rounds = kDefaultPrimalityRounds);

/// 2^alpha - gamma, gamma odd and < 2^10.
struct Crandall {
  unsigned alpha;
  unsigned gamma;
};
/// 2^alpha * (2^beta - gamma) - 1.
struct MontgomeryFriendly {
  unsigned alpha;
  unsigned beta;
  unsigned gamma;
};
/// 2^k - 1.
struct Mersenne {
  unsigned k;
};
/// Uniform prime with exactly `bits` bits, bits >= 8.
struct RandomBits {
  unsigned bits;
};
using PrimeShape = std::variant<Crandall, MontgomeryFriendly, Mersenne, RandomBits>;

struct GeneratedPrime {
  Integer p;
  bool three_mod_four;  // square roots take the c^((p+1)/4) fast path
};

/// Throws ShapeExhausted when the shape's candidate is composite (fixed forms)
/// or no prime turned up within `budget` draws (RandomBits).
GeneratedPrime gen_prime(const PrimeShape& shape, Rng& rng, std::uint64_t budget = 1'000'000);

/// Legendre symbol (c/p) in {-1, 0, 1}, via Euler's criterion. p odd prime.
int legendre(const Integer& c, const Integer& p);

/// Square root of c modulo the odd prime p, choosing the root with an even
/// least-significant bit. Empty iff c is a non-residue.
std::optional<Integer> sqrt_mod(const Integer& c, const Integer& p);

/// Tonelli-Shanks regardless of p mod 4; same canonical root as sqrt_mod.
std::optional<Integer> sqrt_mod_tonelli_shanks(const Integer& c, const Integer& p);

/// Positive (t, s) with 4p = t^2 + D s^2, or empty when no representation
/// exists. D > 0, D = 0 or 3 (mod 4).
std::optional<std::pair<Integer, Integer>> cornacchia(const Integer& p, std::uint64_t D);

/// Smallest k <= bound with p^k = 1 (mod n); empty when no such k exists.
std::optional<std::uint64_t> embedding_degree(const Integer& n, const Integer& p,
                                              std::uint64_t bound = kDefaultEmbeddingBound);

struct SquarefreeResult {
  Integer d;  // squarefree part found so far (includes any unfactored cofactor)
  bool complete;
  std::uint64_t effort_used;  // trial divisions performed
};

/// Squarefree part of |m| by trial division up to `effort`, followed by
/// primality and perfect-square checks on the remaining cofactor.
SquarefreeResult squarefree_part(const Integer& m, std::uint64_t effort = kDefaultSquarefreeEffort);

struct PrimePower {
  Integer prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  std::vector<PrimePower> factors;  // ascending primes
  Integer cofactor;                 // unfactored remainder, 1 when complete
  bool complete() const { return cofactor == 1; }
  Integer product() const;
};

/// Trial division up to `bound`; a prime remainder is accepted as a factor.
Factorization factor_trial(const Integer& m, std::uint64_t bound);

/// Smallest h <= cofactor_max with N = h n, n prime; returns (h, n).
std::optional<std::pair<Integer, Integer>> near_prime_split(const Integer& N, unsigned cofactor_max);

/// Chinese remainder for pairwise coprime moduli.
Integer crt(const std::vector<Integer>& residues, const std::vector<Integer>& moduli);

}  // namespace ecsafe::nt
