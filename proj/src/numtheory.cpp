#include "ecsafe/numtheory.hpp"

#include <algorithm>
#include <memory>
#include <mutex>

#include "ecsafe/error.hpp"

namespace ecsafe::nt {
namespace {

// Primes up to at least `limit`, from a sieve that grows on demand. Callers
// hold a snapshot, so a concurrent regrow cannot pull the list from under them.
std::shared_ptr<const std::vector<std::uint32_t>> primes_up_to(std::uint64_t limit) {
  static std::mutex mu;
  static std::shared_ptr<const std::vector<std::uint32_t>> primes = std::make_shared<std::vector<std::uint32_t>>();
  static std::uint64_t sieved = 0;
  std::lock_guard lock(mu);
  if (limit > sieved) {
    const std::uint64_t n = std::max<std::uint64_t>(limit, 2 * sieved);
    std::vector<bool> composite(n + 1, false);
    auto grown = std::make_shared<std::vector<std::uint32_t>>();
    for (std::uint64_t i = 2; i <= n; ++i) {
      if (composite[i]) continue;
      grown->push_back(static_cast<std::uint32_t>(i));
      for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
    }
    primes = std::move(grown);
    sieved = n;
  }
  return primes;
}

bool miller_rabin_round(const Integer& n, const Integer& n_minus_1, const Integer& d, unsigned r,
                        const Integer& base) {
  Integer x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned i = 1; i < r; ++i) {
    x = x * x % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

Integer powm(const Integer& b, const Integer& e, const Integer& m) {
  Integer r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer canonical_root(const Integer& r, const Integer& p) {
  if (mpz_odd_p(r.get_mpz_t())) return p - r;
  return r;
}

}  // namespace

bool is_prime(const Integer& n, unsigned rounds) {
  if (rounds == 0) throw Error(Errc::InvalidArgument, "primality rounds must be >= 1");
  if (n < 2) return false;
  if (n < kTrialDivisionLimit) {
    const std::uint64_t v = n.get_ui();
    for (std::uint64_t q = 2; q * q <= v; ++q)
      if (v % q == 0) return false;
    return true;
  }
  const auto primes = primes_up_to(1000);
  for (std::uint32_t q : *primes) {
    if (q > 1000) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), q)) return false;
  }

  const Integer n_minus_1 = n - 1;
  Integer d = n_minus_1;
  unsigned r = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++r;
  }

  static constexpr unsigned kFixedBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  const unsigned fixed = std::min<unsigned>(rounds, std::size(kFixedBases));
  for (unsigned i = 0; i < fixed; ++i) {
    if (!miller_rabin_round(n, n_minus_1, d, r, Integer(kFixedBases[i]))) return false;
  }
  if (rounds > fixed) {
    // Bases derived from n keep the test a pure function of its input.
    Rng rng(mpz_getlimbn(n.get_mpz_t(), 0));
    const Integer span = n - 3;
    for (unsigned i = fixed; i < rounds; ++i) {
      if (!miller_rabin_round(n, n_minus_1, d, r, 2 + rng.below(span))) return false;
    }
  }
  return true;
}

GeneratedPrime gen_prime(const PrimeShape& shape, Rng& rng, std::uint64_t budget) {
  auto finish = [](Integer p) { return GeneratedPrime{p, mod(p, 4) == 3}; };
  auto fixed_form = [&](const Integer& p, const char* form) {
    if (!is_prime(p)) throw Error(Errc::ShapeExhausted, std::string(form) + " candidate is composite");
    return finish(p);
  };

  if (auto* c = std::get_if<Crandall>(&shape)) {
    if (c->gamma >= 1024 || c->gamma % 2 == 0)
      throw Error(Errc::InvalidArgument, "Crandall gamma must be odd and < 2^10");
    const Integer p = pow2(c->alpha) - c->gamma;
    if (p < 2) throw Error(Errc::ShapeExhausted, "Crandall candidate below 2");
    return fixed_form(p, "Crandall");
  }
  if (auto* m = std::get_if<MontgomeryFriendly>(&shape)) {
    const Integer inner = pow2(m->beta) - m->gamma;
    if (inner <= 0) throw Error(Errc::InvalidArgument, "Montgomery-friendly shape needs 2^beta > gamma");
    const Integer p = pow2(m->alpha) * inner - 1;
    if (p < 2) throw Error(Errc::ShapeExhausted, "Montgomery-friendly candidate below 2");
    return fixed_form(p, "Montgomery-friendly");
  }
  if (auto* m = std::get_if<Mersenne>(&shape)) {
    if (m->k < 2) throw Error(Errc::ShapeExhausted, "Mersenne exponent below 2");
    return fixed_form(pow2(m->k) - 1, "Mersenne");
  }
  const auto& rb = std::get<RandomBits>(shape);
  if (rb.bits < 8) throw Error(Errc::InvalidArgument, "random primes need at least 8 bits");
  for (std::uint64_t i = 0; i < budget; ++i) {
    Integer candidate = rng.exact_bits(rb.bits);
    candidate |= 1;
    if (is_prime(candidate)) return finish(candidate);
  }
  throw Error(Errc::ShapeExhausted, "no random prime found within budget");
}

int legendre(const Integer& c, const Integer& p) {
  const Integer r = mod(c, p);
  if (r == 0) return 0;
  const Integer e = powm(r, (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

std::optional<Integer> sqrt_mod_tonelli_shanks(const Integer& c, const Integer& p) {
  const Integer a = mod(c, p);
  if (a == 0) return Integer(0);
  if (legendre(a, p) != 1) return std::nullopt;

  Integer q = p - 1;
  unsigned s = 0;
  while (mpz_even_p(q.get_mpz_t())) {
    q >>= 1;
    ++s;
  }
  Integer z = 2;
  while (legendre(z, p) != -1) ++z;

  Integer m = s;
  Integer cz = powm(z, q, p);
  Integer t = powm(a, q, p);
  Integer r = powm(a, (q + 1) / 2, p);
  while (t != 1) {
    unsigned i = 0;
    Integer t2 = t;
    while (t2 != 1) {
      t2 = t2 * t2 % p;
      ++i;
    }
    Integer b = cz;
    for (unsigned j = 0; j + i + 1 < m.get_ui(); ++j) b = b * b % p;
    m = i;
    cz = b * b % p;
    t = t * cz % p;
    r = r * b % p;
  }
  return canonical_root(r, p);
}

std::optional<Integer> sqrt_mod(const Integer& c, const Integer& p) {
  if (mod(p, 4) != 3) return sqrt_mod_tonelli_shanks(c, p);
  const Integer a = mod(c, p);
  if (a == 0) return Integer(0);
  const Integer r = powm(a, (p + 1) / 4, p);
  if (r * r % p != a) return std::nullopt;
  return canonical_root(r, p);
}

std::optional<std::pair<Integer, Integer>> cornacchia(const Integer& p, std::uint64_t D) {
  if (D == 0 || (D % 4 != 0 && D % 4 != 3))
    throw Error(Errc::InvalidArgument, "discriminant must be positive and 0 or 3 mod 4");
  const Integer four_p = 4 * p;
  const Integer d = from_u64(D);
  if (d >= four_p) return std::nullopt;

  auto root = sqrt_mod(-d, p);
  if (!root) return std::nullopt;
  Integer x0 = *root;
  if (mod(x0, 2) != D % 2) x0 = p - x0;

  // Euclid on (2p, x0) until the remainder drops below 2 sqrt(p).
  Integer a = 2 * p;
  Integer b = x0;
  const Integer limit = isqrt(four_p);
  while (b > limit) {
    Integer r = a % b;
    a = b;
    b = r;
  }
  const Integer rest = four_p - b * b;
  if (rest % d != 0) return std::nullopt;
  const Integer c = rest / d;
  if (!is_perfect_square(c) || c == 0 || b == 0) return std::nullopt;
  return std::pair{b, isqrt(c)};
}

std::optional<std::uint64_t> embedding_degree(const Integer& n, const Integer& p, std::uint64_t bound) {
  if (bound == 0) throw Error(Errc::InvalidArgument, "embedding-degree bound must be >= 1");
  if (n < 2) throw Error(Errc::InvalidArgument, "embedding degree needs n >= 2");
  const Integer base = mod(p, n);
  Integer x = base;
  for (std::uint64_t k = 1; k <= bound; ++k) {
    if (x == 1) return k;
    x = x * base % n;
  }
  return std::nullopt;
}

SquarefreeResult squarefree_part(const Integer& m, std::uint64_t effort) {
  if (m == 0) throw Error(Errc::InvalidArgument, "squarefree part of zero");
  if (effort == 0) throw Error(Errc::InvalidArgument, "effort must be positive");

  Integer r = abs(m);
  Integer d = 1;
  std::uint64_t used = 0;
  bool below_sqrt = false;  // every remaining factor exceeds sqrt(r)
  const auto primes = primes_up_to(effort);
  for (std::uint32_t q : *primes) {
    if (q > effort) break;
    if (Integer(q) * q > r) {
      below_sqrt = true;
      break;
    }
    ++used;
    if (!mpz_divisible_ui_p(r.get_mpz_t(), q)) continue;
    unsigned e = 0;
    while (mpz_divisible_ui_p(r.get_mpz_t(), q)) {
      mpz_divexact_ui(r.get_mpz_t(), r.get_mpz_t(), q);
      ++e;
    }
    if (e % 2 == 1) d *= q;
  }

  if (r == 1) return {d, true, used};
  if (below_sqrt || is_prime(r)) return {d * r, true, used};
  if (is_perfect_square(r)) return {d, true, used};
  // All prime factors of r exceed `effort`; below effort^3 that leaves exactly
  // two distinct primes.
  const Integer e = from_u64(effort);
  if (r < e * e * e) return {d * r, true, used};
  return {d * r, false, used};
}

Integer Factorization::product() const {
  Integer r = cofactor;
  for (const auto& f : factors) {
    Integer pp;
    mpz_pow_ui(pp.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
    r *= pp;
  }
  return r;
}

Factorization factor_trial(const Integer& m, std::uint64_t bound) {
  if (m < 1) throw Error(Errc::InvalidArgument, "factor_trial needs a positive integer");
  Factorization out;
  Integer r = m;
  const auto primes = primes_up_to(bound);
  for (std::uint32_t q : *primes) {
    if (q > bound) break;
    if (Integer(q) * q > r) break;
    if (!mpz_divisible_ui_p(r.get_mpz_t(), q)) continue;
    unsigned e = 0;
    while (mpz_divisible_ui_p(r.get_mpz_t(), q)) {
      mpz_divexact_ui(r.get_mpz_t(), r.get_mpz_t(), q);
      ++e;
    }
    out.factors.push_back({Integer(q), e});
  }
  if (r > 1 && is_prime(r)) {
    out.factors.push_back({r, 1});
    r = 1;
  }
  out.cofactor = r;
  return out;
}

std::optional<std::pair<Integer, Integer>> near_prime_split(const Integer& N, unsigned cofactor_max) {
  for (unsigned h = 1; h <= cofactor_max; ++h) {
    if (!mpz_divisible_ui_p(N.get_mpz_t(), h)) continue;
    Integer n = N / h;
    if (is_prime(n)) return std::pair{Integer(h), std::move(n)};
  }
  return std::nullopt;
}

Integer crt(const std::vector<Integer>& residues, const std::vector<Integer>& moduli) {
  if (residues.size() != moduli.size()) throw Error(Errc::InvalidArgument, "crt size mismatch");
  Integer x = 0;
  Integer m = 1;
  for (std::size_t i = 0; i < residues.size(); ++i) {
    const Integer& mi = moduli[i];
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), Integer(m % mi).get_mpz_t(), mi.get_mpz_t()) == 0)
      throw Error(Errc::InvalidArgument, "crt moduli not coprime");
    // x' = x + m * ((r_i - x) * m^-1 mod m_i)
    const Integer k = mod((residues[i] - x) * inv, mi);
    x += m * k;
    m *= mi;
  }
  return mod(x, m);
}

}  // namespace ecsafe::nt
