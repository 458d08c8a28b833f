#pragma once

#include <ostream>

#include <json.hpp>

#include "ecsafe/attack.hpp"
#include "ecsafe/cm.hpp"
#include "ecsafe/random_curve.hpp"
#include "ecsafe/registry.hpp"
#include "ecsafe/validator.hpp"

namespace ecsafe {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Field-sized integers are lowercase hex strings; counts are JSON numbers.

Json to_json(const Curve& curve);
Json to_json(const OrderInfo& order);
Json to_json(const Point& point);
Json to_json(const CmParams& cm);
Json to_json(const SeedTrace& trace);
Json to_json(const GenerationStats& stats);
Json to_json(const ValidatorPolicy& policy);
Json to_json(const CriterionResult& result);

// Top-level documents carry schema_version and kind.
Json to_json(const CurveSuite& suite);
Json to_json(const CmCurve& curve, std::uint64_t primes_tried);
Json to_json(const ValidationReport& report, const ValidatorPolicy& policy);
Json to_json(const DlpInstance& inst);
Json to_json(const AttackResult& result);
Json to_json(const AuditResult& audit, const ValidatorPolicy& policy);
Json to_json(const TrendReport& trend, const Registry& registry);

// Readers throw ParseError on missing or malformed fields.
Curve curve_from_json(const Json& j);
Point point_from_json(const Json& j);
OrderInfo order_from_json(const Json& j, const Integer& p);
CmParams cm_from_json(const Json& j);
SeedTrace trace_from_json(const Json& j);
/// Accepts any document with curve, order and base_point (suites, CM curves,
/// audits); cm is picked up when present.
Subject subject_from_json(const Json& j);
/// Fields absent from `j` keep their value from `base`.
ValidatorPolicy policy_from_json(const Json& j, const ValidatorPolicy& base);
DlpInstance instance_from_json(const Json& j);

/// ParseError with the parser's message on malformed text.
Json parse_json(std::string_view text);

void write_text(std::ostream& os, const CurveSuite& suite);
void write_text(std::ostream& os, const CmCurve& curve, std::uint64_t primes_tried);
void write_text(std::ostream& os, const ValidationReport& report);
void write_text(std::ostream& os, const DlpInstance& inst);
void write_text(std::ostream& os, const AttackResult& result);
void write_text(std::ostream& os, const AuditResult& audit);
void write_text(std::ostream& os, const TrendReport& trend, const Registry& registry);

}  // namespace ecsafe
