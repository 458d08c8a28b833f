#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecsafe/curve.hpp"
#include "ecsafe/validator.hpp"

namespace ecsafe {

enum class Approach { Deterministic, PseudoRandom, Random };

inline constexpr std::array<Approach, 3> kApproaches = {Approach::Deterministic, Approach::PseudoRandom,
                                                       Approach::Random};

std::string_view to_string(Approach a);
std::optional<Approach> approach_from_string(std::string_view name);

struct StandardCurveRecord {
  std::string name;
  std::string family;
  std::string agency;
  unsigned year = 0;
  unsigned security_bits = 0;
  Approach approach = Approach::Deterministic;
  Curve curve;
  OrderInfo order;
  Point base;
  std::string source;

  Subject subject() const { return Subject{curve, order, base, std::nullopt}; }
};

/// ConsistencyError unless G is on the curve, n G = O, n h = N and
/// |p + 1 - N| <= 2 sqrt(p).
void verify_record(const StandardCurveRecord& record);

/// Immutable after construction; every record has passed verify_record.
class Registry {
 public:
  Registry() = default;

  /// The shipped data set (data/standard_curves.txt).
  static const Registry& builtin();
  /// ParseError on malformed text, ConsistencyError on a self-contradicting record.
  static Registry parse(std::string_view text);
  static Registry load(const std::filesystem::path& path);

  /// Verifies the record first; InvalidArgument on a duplicate name.
  void add(StandardCurveRecord record);

  const std::vector<StandardCurveRecord>& records() const { return records_; }
  /// UnknownCurve when absent.
  const StandardCurveRecord& find(std::string_view name) const;
  std::size_t size() const { return records_.size(); }

 private:
  std::vector<StandardCurveRecord> records_;
};

struct AuditResult {
  StandardCurveRecord record;
  ValidationReport report;
};

/// Validates a record against its published order; nothing is recounted.
AuditResult audit(const Registry& registry, std::string_view name, const ValidatorPolicy& policy,
                  unsigned threads = 1);

struct TrendReport {
  std::array<std::uint64_t, 3> counts{};  // indexed like kApproaches
  std::uint64_t total = 0;
  std::optional<Approach> plurality;      // empty on an empty registry or a tie for the lead

  std::uint64_t count(Approach a) const { return counts[static_cast<std::size_t>(a)]; }
};

TrendReport trend_report(const Registry& registry);

}  // namespace ecsafe
