#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ecsafe/cm.hpp"
#include "ecsafe/curve.hpp"

namespace ecsafe {

enum class Verdict { Pass, Fail, Indeterminate };

enum class Criterion {
  C1_SUBGROUP_SIZE,
  C2_NON_ANOMALOUS,
  C3_UNIQUE_SUBGROUP,
  ORDER_PRIME,
  BASEPOINT_ORDER_PRIME,
  NON_SUPERSINGULAR,
  EMBEDDING_DEGREE,
  COFACTOR,
  B_NOT_SQUARE,
  TWIST_SECURE,
  CM_DISCRIMINANT,
  HASSE_CONSISTENT,
};

/// Catalog order; every report lists exactly these, in this order.
inline constexpr std::array<Criterion, 12> kCatalog = {
    Criterion::C1_SUBGROUP_SIZE,      Criterion::C2_NON_ANOMALOUS, Criterion::C3_UNIQUE_SUBGROUP,
    Criterion::ORDER_PRIME,           Criterion::BASEPOINT_ORDER_PRIME,
    Criterion::NON_SUPERSINGULAR,     Criterion::EMBEDDING_DEGREE, Criterion::COFACTOR,
    Criterion::B_NOT_SQUARE,          Criterion::TWIST_SECURE,     Criterion::CM_DISCRIMINANT,
    Criterion::HASSE_CONSISTENT,
};

std::string_view to_string(Criterion c);
std::optional<Criterion> criterion_from_string(std::string_view name);
std::string_view to_string(Verdict v);

struct ValidatorPolicy {
  unsigned security_bits = 160;                // L: require n > 2^L
  std::uint64_t embedding_bound = 100;         // reject n | p^k - 1 for k <= bound
  unsigned cofactor_max = 4;                   // largest acceptable h
  std::uint64_t discriminant_effort = 1'000'000;  // trial-division bound for t^2 - 4p
  bool require_prime_order = false;            // ORDER_PRIME demands h = 1
  std::uint64_t min_cm_discriminant = 0;       // CM_DISCRIMINANT: |D| must exceed this
  bool require_b_non_square = false;           // promote B_NOT_SQUARE from advisory

  /// Cryptographic thresholds (L = 160, embedding bound 100).
  static ValidatorPolicy audit() { return {}; }
  /// Thresholds scaled to curves of `bits` bits: L = bits - 2, and b must be
  /// a non-square (generated curves can afford it; standard ones often cannot).
  static ValidatorPolicy desk(unsigned bits);

  /// InvalidArgument unless L >= 1 and embedding_bound >= 1.
  void check() const;
};

/// A curve with its claimed order data and base point.
struct Subject {
  Curve curve;
  OrderInfo order;
  Point base;
  std::optional<CmParams> cm;  // known CM data, if the curve came from the CM generator
};

struct EvidenceItem {
  std::string key;
  std::string value;  // field-sized integers in hex, counts in decimal
  friend bool operator==(const EvidenceItem&, const EvidenceItem&) = default;
};

struct CriterionResult {
  Criterion id;
  Verdict verdict;
  bool required;
  std::vector<EvidenceItem> evidence;
  friend bool operator==(const CriterionResult&, const CriterionResult&) = default;
};

struct ValidationReport {
  std::vector<CriterionResult> results;
  Verdict overall;

  const CriterionResult& at(Criterion c) const;
  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

/// InconsistentSubject unless G is an affine point on the curve, N G = n G = O,
/// n h = N and t = p + 1 - N.
void check_consistency(const Subject& subject);

CriterionResult run_criterion(Criterion id, const Subject& subject, const ValidatorPolicy& policy);

/// Runs the whole catalog. Overall is Pass iff no required criterion is Fail or
/// Indeterminate; Fail if any required criterion fails; Indeterminate otherwise.
/// Criteria may be evaluated on up to `threads` threads; the report is
/// identical for any thread count.
ValidationReport validate(const Subject& subject, const ValidatorPolicy& policy, unsigned threads = 1);

}  // namespace ecsafe
