#include "ecsafe/registry.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ecsafe/builtin_data.hpp"
#include "ecsafe/error.hpp"

namespace ecsafe {
namespace {

constexpr std::size_t kFieldCount = 15;

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

unsigned parse_unsigned(std::string_view s, std::size_t line) {
  unsigned v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": expected a decimal number");
  return v;
}

StandardCurveRecord parse_record(std::string_view line, std::size_t number) {
  const auto f = split(line, '|');
  const std::string where = "line " + std::to_string(number) + ": ";
  if (f.size() != kFieldCount)
    throw Error(Errc::ParseError, where + "expected " + std::to_string(kFieldCount) + " fields, found " +
                                      std::to_string(f.size()));
  auto hex = [&](std::size_t i) {
    try {
      return from_hex(trim(f[i]));
    } catch (const Error& e) {
      throw Error(Errc::ParseError, where + e.what());
    }
  };
  const auto approach = approach_from_string(trim(f[5]));
  if (!approach) throw Error(Errc::ParseError, where + "unknown approach '" + std::string(f[5]) + "'");

  const Integer p = hex(6);
  if (!nt::is_prime(p)) throw Error(Errc::ConsistencyError, where + "p is not prime");
  Curve curve = [&] {
    try {
      return Curve::with_prime(p, hex(7), hex(8));
    } catch (const Error& e) {
      throw Error(Errc::ConsistencyError, where + e.what());
    }
  }();
  const Integer N = hex(11);
  const Integer n = hex(12);
  Integer h;
  try {
    h = from_dec(trim(f[13]));
  } catch (const Error& e) {
    throw Error(Errc::ParseError, where + e.what());
  }
  return StandardCurveRecord{std::string(trim(f[0])),
                             std::string(trim(f[1])),
                             std::string(trim(f[2])),
                             parse_unsigned(trim(f[3]), number),
                             parse_unsigned(trim(f[4]), number),
                             *approach,
                             std::move(curve),
                             OrderInfo{N, p + 1 - N, n, h},
                             Point::affine(hex(9), hex(10)),
                             std::string(trim(f[14]))};
}

}  // namespace

std::string_view to_string(Approach a) {
  switch (a) {
    case Approach::Deterministic: return "Deterministic";
    case Approach::PseudoRandom: return "PseudoRandom";
    case Approach::Random: return "Random";
  }
  return "Unknown";
}

std::optional<Approach> approach_from_string(std::string_view name) {
  for (Approach a : kApproaches)
    if (to_string(a) == name) return a;
  return std::nullopt;
}

void verify_record(const StandardCurveRecord& r) {
  const std::string who = r.name + ": ";
  const Curve& E = r.curve;
  if (r.name.empty()) throw Error(Errc::ConsistencyError, "record without a name");
  if (r.source.empty()) throw Error(Errc::ConsistencyError, who + "missing source citation");
  if (r.base.is_infinity() || !E.contains(r.base)) throw Error(Errc::ConsistencyError, who + "G is not on the curve");
  if (r.order.n <= 1 || r.order.h < 1) throw Error(Errc::ConsistencyError, who + "bad n or h");
  if (r.order.n * r.order.h != r.order.N) throw Error(Errc::ConsistencyError, who + "n * h != N");
  if (r.order.t != E.p() + 1 - r.order.N) throw Error(Errc::ConsistencyError, who + "t != p + 1 - N");
  if (r.order.t * r.order.t > 4 * E.p()) throw Error(Errc::ConsistencyError, who + "order violates the Hasse bound");
  if (!E.scalar_mul(r.order.n, r.base).is_infinity()) throw Error(Errc::ConsistencyError, who + "n G is not the identity");
}

const Registry& Registry::builtin() {
  static const Registry registry = parse(data::kStandardCurves);
  return registry;
}

Registry Registry::parse(std::string_view text) {
  Registry reg;
  bool versioned = false;
  std::size_t number = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    const std::string_view raw = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++number;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!versioned) {
      if (line != "version 1") throw Error(Errc::ParseError, "registry must start with 'version 1'");
      versioned = true;
      continue;
    }
    reg.add(parse_record(line, number));
  }
  if (!versioned) throw Error(Errc::ParseError, "registry has no version header");
  return reg;
}

Registry Registry::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void Registry::add(StandardCurveRecord record) {
  verify_record(record);
  if (std::any_of(records_.begin(), records_.end(), [&](const auto& r) { return r.name == record.name; }))
    throw Error(Errc::InvalidArgument, "duplicate curve name " + record.name);
  records_.push_back(std::move(record));
}

const StandardCurveRecord& Registry::find(std::string_view name) const {
  for (const auto& r : records_)
    if (r.name == name) return r;
  throw Error(Errc::UnknownCurve, "no curve named '" + std::string(name) + "'");
}

AuditResult audit(const Registry& registry, std::string_view name, const ValidatorPolicy& policy, unsigned threads) {
  const StandardCurveRecord& record = registry.find(name);
  return AuditResult{record, validate(record.subject(), policy, threads)};
}

TrendReport trend_report(const Registry& registry) {
  TrendReport t;
  for (const auto& r : registry.records()) {
    ++t.counts[static_cast<std::size_t>(r.approach)];
    ++t.total;
  }
  const auto best = std::max_element(t.counts.begin(), t.counts.end());
  if (*best > 0 && std::count(t.counts.begin(), t.counts.end(), *best) == 1)
    t.plurality = kApproaches[static_cast<std::size_t>(best - t.counts.begin())];
  return t;
}

}  // namespace ecsafe
