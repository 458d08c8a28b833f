#include "ecsafe/cm.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ecsafe/builtin_data.hpp"
#include "ecsafe/error.hpp"

namespace ecsafe {
namespace {

// Polynomials over F_p, coefficients in ascending degree order, no leading zeros.
using Poly = std::vector<Integer>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mod(Poly f, const Poly& g, const Integer& p) {
  Integer inv;
  mpz_invert(inv.get_mpz_t(), g.back().get_mpz_t(), p.get_mpz_t());
  while (f.size() >= g.size()) {
    const Integer q = mod(f.back() * inv, p);
    const std::size_t shift = f.size() - g.size();
    for (std::size_t i = 0; i < g.size(); ++i) f[shift + i] = mod(f[shift + i] - q * g[i], p);
    trim(f);
  }
  return f;
}

Poly poly_mul_mod(const Poly& f, const Poly& g, const Poly& m, const Integer& p) {
  if (f.empty() || g.empty()) return {};
  Poly r(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) r[i + j] += f[i] * g[j];
  for (auto& c : r) c = mod(c, p);
  trim(r);
  return poly_mod(std::move(r), m, p);
}

Poly poly_pow_mod(Poly base, Integer e, const Poly& m, const Integer& p) {
  Poly r{1};
  base = poly_mod(std::move(base), m, p);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = poly_mul_mod(r, base, m, p);
    base = poly_mul_mod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

Poly make_monic(Poly f, const Integer& p) {
  Integer inv;
  mpz_invert(inv.get_mpz_t(), f.back().get_mpz_t(), p.get_mpz_t());
  for (auto& c : f) c = mod(c * inv, p);
  return f;
}

Poly poly_gcd(Poly a, Poly b, const Integer& p) {
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a.empty() ? a : make_monic(std::move(a), p);
}

// g is monic and a product of distinct linear factors.
void split_roots(const Poly& g, const Integer& p, Rng& rng, std::vector<Integer>& out) {
  if (g.size() <= 1) return;
  if (g.size() == 2) {
    out.push_back(mod(-g[0], p));
    return;
  }
  const Integer half = (p - 1) / 2;
  for (;;) {
    Poly probe{rng.below(p), 1};  // x + delta
    Poly h = poly_pow_mod(probe, half, g, p);
    if (h.empty()) h = {0};
    h[0] = mod(h[0] - 1, p);
    trim(h);
    Poly d = poly_gcd(g, h, p);
    if (d.size() > 1 && d.size() < g.size()) {
      split_roots(d, p, rng, out);
      // g / d by long division.
      Poly rest;
      Poly num = g;
      rest.assign(g.size() - d.size() + 1, 0);
      while (num.size() >= d.size()) {
        const Integer q = num.back();
        const std::size_t shift = num.size() - d.size();
        rest[shift] = q;
        for (std::size_t i = 0; i < d.size(); ++i) num[shift + i] = mod(num[shift + i] - q * d[i], p);
        trim(num);
      }
      split_roots(rest, p, rng, out);
      return;
    }
  }
}

std::optional<Integer> pick_order(const Integer& p, const Integer& t, const OrderPreference& pref) {
  const Integer small = p + 1 - t;
  const Integer large = p + 1 + t;
  auto ok = [&](const Integer& N) {
    switch (pref.kind) {
      case OrderPreference::Kind::Prime: return nt::is_prime(N);
      case OrderPreference::Kind::NearPrime: return nt::near_prime_split(N, pref.cofactor_max).has_value();
      case OrderPreference::Kind::Any: return true;
    }
    return false;
  };
  const Integer& first = pref.prefer_larger ? large : small;
  const Integer& second = pref.prefer_larger ? small : large;
  if (ok(first)) return first;
  if (ok(second)) return second;
  return std::nullopt;
}

std::optional<std::pair<Integer, Integer>> subgroup_split(const Integer& N, const OrderPreference& pref) {
  if (pref.kind != OrderPreference::Kind::Any) return nt::near_prime_split(N, pref.cofactor_max);
  const nt::Factorization f = nt::factor_trial(N, std::uint64_t{1} << 24);
  if (!f.complete()) return std::nullopt;
  const Integer& n = f.factors.back().prime;
  return std::pair{N / n, n};
}

// Whether #E = N. Counted exactly when p is within the order engine's range;
// beyond it, a point of prime order n > 4 sqrt(p) with n | N pins #E to N.
bool has_order(const Curve& E, const Integer& N, const std::optional<std::pair<Integer, Integer>>& split,
               Rng& rng, const CountLimits& limits) {
  if (E.p() < limits.exhaustive_ceiling) return count_exhaustive(E, limits) == N;
  if (E.p() <= limits.bsgs_ceiling) return count_bsgs(E, rng, limits) == N;
  if (!split || split->second * split->second <= 16 * E.p())
    throw Error(Errc::Unsupported, "order of a curve this large needs a prime subgroup above 4 sqrt(p)");
  const auto& [h, n] = *split;
  for (int i = 0; i < 20; ++i) {
    const Point G = E.scalar_mul(h, E.random_point(rng));
    if (G.is_infinity()) continue;
    return E.scalar_mul(n, G).is_infinity();
  }
  return false;
}

}  // namespace

const ClassPolynomialTable& ClassPolynomialTable::builtin() {
  static const ClassPolynomialTable table = parse(data::kClassPolynomials);
  return table;
}

ClassPolynomialTable ClassPolynomialTable::parse(std::string_view text) {
  ClassPolynomialTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  bool versioned = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    auto fail = [&](const std::string& why) {
      return Error(Errc::ParseError, "class polynomials line " + std::to_string(lineno) + ": " + why);
    };
    if (!versioned) {
      std::string tag;
      int version = 0;
      if (!(fields >> tag >> version) || tag != "version") throw fail("expected 'version 1' header");
      if (version != 1) throw fail("unsupported version " + std::to_string(version));
      versioned = true;
      continue;
    }
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.size() < 4) throw fail("too few fields");
    ClassPolynomial entry;
    entry.D = to_u64(from_dec(tokens[0]));
    entry.class_number = static_cast<unsigned>(to_u64(from_dec(tokens[1])));
    if (entry.D % 4 != 0 && entry.D % 4 != 3) throw fail("D must be 0 or 3 mod 4");
    if (tokens.size() != entry.class_number + 3) throw fail("coefficient count does not match h_D");
    for (std::size_t i = 2; i < tokens.size(); ++i) entry.coefficients.push_back(from_dec(tokens[i]));
    if (entry.coefficients.back() != 1) throw fail("polynomial must be monic");
    if (!table.entries_.emplace(entry.D, std::move(entry)).second) throw fail("duplicate discriminant");
  }
  if (!versioned) throw Error(Errc::ParseError, "class polynomials: missing version header");
  return table;
}

ClassPolynomialTable ClassPolynomialTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const ClassPolynomial& ClassPolynomialTable::lookup(std::uint64_t D) const {
  auto it = entries_.find(D);
  if (it == entries_.end()) throw Error(Errc::Unsupported, "no class polynomial for D = " + std::to_string(D));
  return it->second;
}

std::vector<std::uint64_t> ClassPolynomialTable::discriminants(unsigned max_class_number) const {
  std::vector<std::uint64_t> out;
  for (const auto& [D, entry] : entries_)
    if (entry.class_number <= max_class_number) out.push_back(D);
  return out;
}

std::optional<CmParams> find_discriminant(const Integer& p, std::span<const std::uint64_t> candidates,
                                          const ClassPolynomialTable& table) {
  for (std::uint64_t D : candidates) {
    if (auto ts = nt::cornacchia(p, D)) {
      const unsigned h = table.contains(D) ? table.lookup(D).class_number : 0;
      return CmParams{D, ts->first, ts->second, h};
    }
  }
  return std::nullopt;
}

std::vector<Integer> roots_mod_p(std::span<const Integer> poly, const Integer& p) {
  Poly f;
  for (const auto& c : poly) f.push_back(mod(c, p));
  trim(f);
  if (f.empty()) throw Error(Errc::InvalidArgument, "zero polynomial");
  if (f.size() == 1) return {};
  f = make_monic(std::move(f), p);

  // gcd(f, x^p - x) keeps exactly the linear factors.
  Poly xp = poly_pow_mod(Poly{0, 1}, p, f, p);
  xp.resize(std::max<std::size_t>(xp.size(), 2), 0);
  xp[1] = mod(xp[1] - 1, p);
  trim(xp);
  const Poly g = xp.empty() ? f : poly_gcd(f, xp, p);

  std::vector<Integer> roots;
  Rng rng(mpz_getlimbn(p.get_mpz_t(), 0));
  split_roots(g, p, rng, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

Curve curve_from_j(const Integer& j0, const Integer& p) {
  const Integer j = mod(j0, p);
  if (j == 0) return Curve::with_prime(p, 0, 1);
  if (j == mod(Integer(1728), p)) return Curve::with_prime(p, 1, 0);
  Integer inv;
  mpz_invert(inv.get_mpz_t(), Integer(mod(1728 - j, p)).get_mpz_t(), p.get_mpz_t());
  const Integer k = mod(j * inv, p);
  return Curve::with_prime(p, 3 * k, 2 * k);
}

OrderInfo CmCurve::order_info() const {
  if (!subgroup) throw Error(Errc::InvalidArgument, "no base-point subgroup selected");
  return {order, trace, subgroup->n, subgroup->h};
}

std::optional<CmCurve> cm_generate(const Integer& p, std::span<const std::uint64_t> candidates,
                                   const OrderPreference& preference, Rng& rng,
                                   const ClassPolynomialTable& table, const CountLimits& limits) {
  const auto params = find_discriminant(p, candidates, table);
  if (!params) return std::nullopt;

  const auto target = pick_order(p, params->t, preference);
  if (!target) return std::nullopt;
  const auto split = subgroup_split(*target, preference);

  const ClassPolynomial& H = table.lookup(params->D);
  const std::vector<Integer> roots = roots_mod_p(H.coefficients, p);
  if (roots.empty()) return std::nullopt;
  const Integer& j0 = roots.front();

  std::optional<Curve> found;
  bool twisted = false;
  const Integer j1728 = mod(Integer(1728), p);
  if (j0 == 0 || j0 == j1728) {
    // The j-formula degenerates here; sweep the twist family instead.
    const std::uint64_t sweep = to_u64(std::min<Integer>(p - 1, 10'000));
    for (std::uint64_t c = 1; c <= sweep && !found; ++c) {
      const Curve E = j0 == 0 ? Curve::with_prime(p, 0, c) : Curve::with_prime(p, c, 0);
      if (has_order(E, *target, split, rng, limits)) found = E;
    }
  } else {
    const Curve E = curve_from_j(j0, p);
    if (has_order(E, *target, split, rng, limits)) {
      found = E;
    } else {
      const Curve Ec = E.twist(E.random_non_square(rng));
      if (has_order(Ec, *target, split, rng, limits)) {
        found = Ec;
        twisted = true;
      }
    }
  }
  if (!found) return std::nullopt;

  CmCurve out{*found, *params, j0, *target, p + 1 - *target, twisted, std::nullopt};
  if (split) {
    const auto& [h, n] = *split;
    // Project into the n-Sylow subgroup, then climb down to order exactly n.
    Integer sylow_cofactor = *target;
    while (sylow_cofactor % n == 0) sylow_cofactor /= n;
    for (int i = 0; i < 64 && !out.subgroup; ++i) {
      Point G = found->scalar_mul(sylow_cofactor, found->random_point(rng));
      if (G.is_infinity()) continue;
      for (Point next = found->scalar_mul(n, G); !next.is_infinity(); next = found->scalar_mul(n, G)) G = next;
      out.subgroup = Subgroup{std::move(G), n, h};
    }
  }
  return out;
}

CmSearchResult cm_generate_random_prime(unsigned bits, std::span<const std::uint64_t> candidates,
                                        const OrderPreference& preference, Rng& rng, std::uint64_t budget,
                                        const ClassPolynomialTable& table, const CountLimits& limits) {
  for (std::uint64_t i = 1; i <= budget; ++i) {
    const nt::GeneratedPrime p = nt::gen_prime(nt::RandomBits{bits}, rng);
    if (p.p <= 3) continue;
    if (auto curve = cm_generate(p.p, candidates, preference, rng, table, limits))
      return {std::move(*curve), i};
  }
  throw Error(Errc::RetryBudgetExhausted, "no CM curve within the prime budget");
}

}  // namespace ecsafe
