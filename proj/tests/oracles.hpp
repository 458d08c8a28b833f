#pragma once

// Brute-force reference implementations. Plain 64-bit arithmetic, no shared
// code with the library, meant for small moduli only.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m); }

inline u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<u64> primes_below(u64 limit) {
  std::vector<u64> out;
  for (u64 n = 2; n < limit; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

/// Every r in [0, p) with r^2 = c (mod p), ascending.
inline std::vector<u64> roots(u64 c, u64 p) {
  std::vector<u64> out;
  for (u64 r = 0; r < p; ++r)
    if (mulmod(r, r, p) == c % p) out.push_back(r);
  return out;
}

/// Legendre symbol from the set of squares.
inline int legendre(u64 c, u64 p) {
  c %= p;
  if (c == 0) return 0;
  return roots(c, p).empty() ? -1 : 1;
}

inline u64 rhs(u64 x, u64 a, u64 b, u64 p) {
  return (mulmod(mulmod(x, x, p), x, p) + mulmod(a, x, p) + b) % p;
}

/// Affine points by double loop over (x, y).
inline std::vector<std::pair<u64, u64>> affine_points(u64 p, u64 a, u64 b) {
  std::vector<std::pair<u64, u64>> out;
  for (u64 x = 0; x < p; ++x)
    for (u64 y = 0; y < p; ++y)
      if (mulmod(y, y, p) == rhs(x, a, b, p)) out.emplace_back(x, y);
  return out;
}

/// #E by tabulating how many y square to each residue; O(p) memory and time.
inline u64 count_points(u64 p, u64 a, u64 b) {
  std::vector<std::uint32_t> hits(p, 0);
  for (u64 y = 0; y < p; ++y) ++hits[mulmod(y, y, p)];
  u64 n = 1;
  for (u64 x = 0; x < p; ++x) n += hits[rhs(x, a, b, p)];
  return n;
}

/// First (t, s) with s = 1, 2, ... and 4p = t^2 + D s^2, t > 0.
inline std::optional<std::pair<u64, u64>> cornacchia(u64 p, u64 D) {
  for (u64 s = 1; D * s * s < 4 * p; ++s) {
    const u64 rest = 4 * p - D * s * s;
    for (u64 t = 1; t * t <= rest; ++t)
      if (t * t == rest) return std::pair{t, s};
  }
  return std::nullopt;
}

/// Whether 4p = t^2 + D s^2 has any solution with t, s > 0.
inline bool representable(u64 p, u64 D) { return cornacchia(p, D).has_value(); }

/// Smallest k <= bound with p^k = 1 (mod n).
inline std::optional<u64> embedding_degree(u64 n, u64 p, u64 bound) {
  for (u64 k = 1; k <= bound; ++k)
    if (powmod(p, k, n) == 1) return k;
  return std::nullopt;
}

/// Squarefree part of m > 0 by full trial division.
inline u64 squarefree_part(u64 m) {
  u64 d = 1;
  for (u64 q = 2; q * q <= m; ++q) {
    unsigned e = 0;
    while (m % q == 0) {
      m /= q;
      ++e;
    }
    if (e % 2) d *= q;
  }
  return d * m;
}

}  // namespace oracle
