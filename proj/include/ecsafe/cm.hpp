#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ecsafe/curve.hpp"
#include "ecsafe/order.hpp"

namespace ecsafe {

/// A CM solution 4p = t^2 + D s^2 together with the class number of D.
struct CmParams {
  std::uint64_t D = 0;
  Integer t;
  Integer s;
  unsigned class_number = 0;  // 0 when D is not in the class-polynomial table
};

/// Hilbert class polynomial H_D, coefficients in ascending degree order.
struct ClassPolynomial {
  std::uint64_t D = 0;
  unsigned class_number = 0;
  std::vector<Integer> coefficients;
};

/// Versioned table of class polynomials (see data/class_polynomials.txt).
class ClassPolynomialTable {
 public:
  static const ClassPolynomialTable& builtin();
  static ClassPolynomialTable parse(std::string_view text);
  static ClassPolynomialTable load(const std::filesystem::path& path);

  /// Unsupported when D is not in the table.
  const ClassPolynomial& lookup(std::uint64_t D) const;
  bool contains(std::uint64_t D) const { return entries_.count(D) != 0; }

  /// Ascending discriminants with class number <= max_class_number.
  std::vector<std::uint64_t> discriminants(unsigned max_class_number) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::uint64_t, ClassPolynomial> entries_;
};

/// First D in `candidates` admitting 4p = t^2 + D s^2; empty when none does.
std::optional<CmParams> find_discriminant(const Integer& p, std::span<const std::uint64_t> candidates,
                                          const ClassPolynomialTable& table = ClassPolynomialTable::builtin());

/// Distinct roots in F_p of an integer polynomial (ascending coefficients),
/// by equal-degree splitting of gcd(f, x^p - x). Sorted ascending.
std::vector<Integer> roots_mod_p(std::span<const Integer> poly, const Integer& p);

/// y^2 = x^3 + 3k x + 2k with k = j0 / (1728 - j0); y^2 = x^3 + 1 for j0 = 0 and
/// y^2 = x^3 + x for j0 = 1728.
Curve curve_from_j(const Integer& j0, const Integer& p);

/// Which member of {p + 1 - t, p + 1 + t} to build.
struct OrderPreference {
  enum class Kind { Prime, NearPrime, Any };
  Kind kind = Kind::Prime;
  unsigned cofactor_max = 4;  // NearPrime: N = h n with n prime, h <= cofactor_max
  bool prefer_larger = true;  // tie-break when both orders qualify
};

/// Prime-order subgroup chosen for the base point.
struct Subgroup {
  Point base;
  Integer n;
  Integer h;
};

struct CmCurve {
  Curve curve;
  CmParams cm;
  Integer j_invariant;
  Integer order;  // verified #E
  Integer trace;  // p + 1 - order
  bool twisted = false;
  std::optional<Subgroup> subgroup;

  /// InvalidArgument when no subgroup was selected.
  OrderInfo order_info() const;
};

/// Complex-multiplication construction for a fixed prime p. Returns empty
/// (restart with another p) when no candidate D solves 4p = t^2 + D s^2 or
/// neither p + 1 - t nor p + 1 + t meets the preference. The order of the
/// emitted curve is always verified: by counting when p fits the order engine,
/// otherwise by a prime-subgroup certificate.
std::optional<CmCurve> cm_generate(const Integer& p, std::span<const std::uint64_t> candidates,
                                   const OrderPreference& preference, Rng& rng,
                                   const ClassPolynomialTable& table = ClassPolynomialTable::builtin(),
                                   const CountLimits& limits = {});

struct CmSearchResult {
  CmCurve curve;
  std::uint64_t primes_tried;
};

/// Draws random primes of `bits` bits until cm_generate succeeds.
/// RetryBudgetExhausted after `budget` primes.
CmSearchResult cm_generate_random_prime(unsigned bits, std::span<const std::uint64_t> candidates,
                                        const OrderPreference& preference, Rng& rng,
                                        std::uint64_t budget = 10'000,
                                        const ClassPolynomialTable& table = ClassPolynomialTable::builtin(),
                                        const CountLimits& limits = {});

}  // namespace ecsafe
