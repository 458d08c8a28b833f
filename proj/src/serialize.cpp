#include "ecsafe/serialize.hpp"

#include <iomanip>

#include "ecsafe/error.hpp"

namespace ecsafe {
namespace {

Json document(std::string_view kind) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  return j;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw Error(Errc::ParseError, std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw Error(Errc::ParseError, std::string("missing field '") + key + "'");
  return *it;
}

Integer hex_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw Error(Errc::ParseError, std::string("field '") + key + "' must be a hex string");
  return from_hex(v.get<std::string>());
}

template <class T>
T number_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    throw Error(Errc::ParseError, std::string("field '") + key + "' must be a non-negative integer");
  return v.get<T>();
}

std::string text_point(const Point& P) {
  if (P.is_infinity()) return "infinity";
  return "(" + to_hex(P.x()) + ", " + to_hex(P.y()) + ")";
}

void write_curve_lines(std::ostream& os, const Curve& E) {
  os << "p: " << to_hex(E.p()) << '\n' << "a: " << to_hex(E.a()) << '\n' << "b: " << to_hex(E.b()) << '\n';
}

void write_order_lines(std::ostream& os, const OrderInfo& o) {
  os << "N: " << to_hex(o.N) << '\n'
     << "t: " << to_hex(o.t) << '\n'
     << "n: " << to_hex(o.n) << '\n'
     << "h: " << o.h.get_str(10) << '\n';
}

}  // namespace

Json to_json(const Curve& E) { return Json{{"p", to_hex(E.p())}, {"a", to_hex(E.a())}, {"b", to_hex(E.b())}}; }

Json to_json(const OrderInfo& o) {
  return Json{{"N", to_hex(o.N)}, {"t", to_hex(o.t)}, {"n", to_hex(o.n)}, {"h", to_hex(o.h)}};
}

Json to_json(const Point& P) {
  if (P.is_infinity()) return Json{{"infinity", true}};
  return Json{{"infinity", false}, {"x", to_hex(P.x())}, {"y", to_hex(P.y())}};
}

Json to_json(const CmParams& cm) {
  return Json{{"D", cm.D}, {"t", to_hex(cm.t)}, {"s", to_hex(cm.s)}, {"class_number", cm.class_number}};
}

Json to_json(const SeedTrace& trace) {
  Json draws = Json::array();
  for (const Draw& d : trace.draws) draws.push_back(Json{{"label", d.label}, {"value", to_hex(d.value)}});
  return Json{{"seed", trace.seed},
              {"bits", trace.bits},
              {"p", to_hex(trace.p)},
              {"attempt", trace.attempt},
              {"draws", std::move(draws)}};
}

Json to_json(const GenerationStats& s) {
  Json aborts = Json::object();
  for (std::size_t i = 0; i < kAbortStepCount; ++i) aborts[std::string(to_string(static_cast<AbortStep>(i)))] = s.aborts[i];
  return Json{{"attempts", s.attempts},
              {"orders_counted", s.orders_counted},
              {"order_prime", s.order_prime},
              {"aborts", std::move(aborts)}};
}

Json to_json(const ValidatorPolicy& p) {
  return Json{{"security_bits", p.security_bits},
              {"embedding_bound", p.embedding_bound},
              {"cofactor_max", p.cofactor_max},
              {"discriminant_effort", p.discriminant_effort},
              {"require_prime_order", p.require_prime_order},
              {"min_cm_discriminant", p.min_cm_discriminant},
              {"require_b_non_square", p.require_b_non_square}};
}

Json to_json(const CriterionResult& r) {
  Json evidence = Json::object();
  for (const auto& e : r.evidence) evidence[e.key] = e.value;
  return Json{{"id", to_string(r.id)},
              {"verdict", to_string(r.verdict)},
              {"required", r.required},
              {"evidence", std::move(evidence)}};
}

Json to_json(const CurveSuite& s) {
  Json j = document("curve_suite");
  j["curve"] = to_json(s.curve);
  j["order"] = to_json(s.order);
  j["base_point"] = to_json(s.base);
  j["twist"] = Json{{"coefficient", to_hex(s.twist_coefficient)}, {"order", to_hex(s.twist_order)}};
  j["seed_trace"] = to_json(s.trace);
  j["stats"] = to_json(s.stats);
  return j;
}

Json to_json(const CmCurve& c, std::uint64_t primes_tried) {
  Json j = document("cm_curve");
  j["curve"] = to_json(c.curve);
  if (c.subgroup) {
    j["order"] = to_json(c.order_info());
    j["base_point"] = to_json(c.subgroup->base);
  } else {
    j["order"] = Json{{"N", to_hex(c.order)}, {"t", to_hex(c.trace)}};
  }
  j["cm"] = to_json(c.cm);
  j["j_invariant"] = to_hex(c.j_invariant);
  j["twisted"] = c.twisted;
  j["primes_tried"] = primes_tried;
  return j;
}

Json to_json(const ValidationReport& report, const ValidatorPolicy& policy) {
  Json j = document("validation_report");
  j["overall"] = to_string(report.overall);
  j["policy"] = to_json(policy);
  Json criteria = Json::array();
  for (const auto& r : report.results) criteria.push_back(to_json(r));
  j["criteria"] = std::move(criteria);
  return j;
}

Json to_json(const DlpInstance& inst) {
  Json j = document("dlp_instance");
  j["curve"] = to_json(inst.curve);
  j["P"] = to_json(inst.P);
  j["n"] = to_hex(inst.n);
  j["Q"] = to_json(inst.Q);
  if (inst.factors) {
    Json f = Json::array();
    for (const auto& pp : inst.factors->factors) f.push_back(Json{{"prime", to_hex(pp.prime)}, {"exponent", pp.exponent}});
    j["factors"] = std::move(f);
  }
  if (inst.interval) j["interval"] = Json{{"low", to_hex(inst.interval->first)}, {"high", to_hex(inst.interval->second)}};
  return j;
}

Json to_json(const AttackResult& r) {
  Json j = document("attack_result");
  j["method"] = to_string(r.method);
  j["l"] = to_hex(r.l);
  j["group_ops"] = r.group_ops;
  j["setup_ops"] = r.setup_ops;
  j["wall_time_ns"] = static_cast<std::int64_t>(r.wall_time.count());
  j["walkers"] = r.walkers;
  j["restarts"] = r.restarts;
  if (!r.walker_cpu_seconds.empty()) j["walker_cpu_seconds"] = r.walker_cpu_seconds;
  return j;
}

Json to_json(const AuditResult& a, const ValidatorPolicy& policy) {
  Json j = document("audit");
  const StandardCurveRecord& r = a.record;
  j["record"] = Json{{"name", r.name},
                     {"family", r.family},
                     {"agency", r.agency},
                     {"year", r.year},
                     {"security_bits", r.security_bits},
                     {"approach", to_string(r.approach)},
                     {"source", r.source}};
  j["curve"] = to_json(r.curve);
  j["order"] = to_json(r.order);
  j["base_point"] = to_json(r.base);
  j["report"] = to_json(a.report, policy);
  return j;
}

Json to_json(const TrendReport& t, const Registry& registry) {
  Json j = document("trend");
  j["total"] = t.total;
  Json counts = Json::object();
  for (Approach a : kApproaches) counts[std::string(to_string(a))] = t.count(a);
  j["counts"] = std::move(counts);
  j["plurality"] = t.plurality ? Json(to_string(*t.plurality)) : Json(nullptr);
  Json curves = Json::array();
  for (const auto& r : registry.records())
    curves.push_back(Json{{"name", r.name}, {"agency", r.agency}, {"year", r.year}, {"approach", to_string(r.approach)}});
  j["curves"] = std::move(curves);
  return j;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

Curve curve_from_json(const Json& j) {
  const Integer p = hex_field(j, "p");
  return Curve::make(p, mod(hex_field(j, "a"), p), mod(hex_field(j, "b"), p));
}

Point point_from_json(const Json& j) {
  const Json& inf = field(j, "infinity");
  if (!inf.is_boolean()) throw Error(Errc::ParseError, "field 'infinity' must be a boolean");
  if (inf.get<bool>()) return Point::infinity();
  return Point::affine(hex_field(j, "x"), hex_field(j, "y"));
}

OrderInfo order_from_json(const Json& j, const Integer& p) {
  OrderInfo o;
  o.N = hex_field(j, "N");
  o.t = j.contains("t") ? hex_field(j, "t") : p + 1 - o.N;
  o.n = j.contains("n") ? hex_field(j, "n") : o.N;
  o.h = j.contains("h") ? hex_field(j, "h") : Integer(1);
  return o;
}

CmParams cm_from_json(const Json& j) {
  CmParams cm;
  cm.D = number_field<std::uint64_t>(j, "D");
  cm.t = hex_field(j, "t");
  cm.s = hex_field(j, "s");
  cm.class_number = j.contains("class_number") ? number_field<unsigned>(j, "class_number") : 0;
  return cm;
}

SeedTrace trace_from_json(const Json& j) {
  SeedTrace t;
  t.seed = number_field<std::uint64_t>(j, "seed");
  t.bits = number_field<unsigned>(j, "bits");
  t.p = hex_field(j, "p");
  t.attempt = number_field<std::uint64_t>(j, "attempt");
  const Json& draws = field(j, "draws");
  if (!draws.is_array()) throw Error(Errc::ParseError, "field 'draws' must be an array");
  for (const Json& d : draws) {
    const Json& label = field(d, "label");
    if (!label.is_string()) throw Error(Errc::ParseError, "draw label must be a string");
    t.draws.push_back({label.get<std::string>(), hex_field(d, "value")});
  }
  return t;
}

Subject subject_from_json(const Json& j) {
  Curve E = curve_from_json(field(j, "curve"));
  OrderInfo o = order_from_json(field(j, "order"), E.p());
  Point G = point_from_json(field(j, "base_point"));
  std::optional<CmParams> cm;
  if (j.contains("cm")) cm = cm_from_json(j["cm"]);
  return Subject{std::move(E), std::move(o), std::move(G), std::move(cm)};
}

ValidatorPolicy policy_from_json(const Json& j, const ValidatorPolicy& base) {
  if (!j.is_object()) throw Error(Errc::ParseError, "policy must be a JSON object");
  ValidatorPolicy p = base;
  for (const auto& [key, value] : j.items()) {
    auto boolean = [&] {
      if (!value.is_boolean()) throw Error(Errc::ParseError, "policy field '" + key + "' must be a boolean");
      return value.get<bool>();
    };
    if (key == "security_bits") p.security_bits = number_field<unsigned>(j, "security_bits");
    else if (key == "embedding_bound") p.embedding_bound = number_field<std::uint64_t>(j, "embedding_bound");
    else if (key == "cofactor_max") p.cofactor_max = number_field<unsigned>(j, "cofactor_max");
    else if (key == "discriminant_effort") p.discriminant_effort = number_field<std::uint64_t>(j, "discriminant_effort");
    else if (key == "min_cm_discriminant") p.min_cm_discriminant = number_field<std::uint64_t>(j, "min_cm_discriminant");
    else if (key == "require_prime_order") p.require_prime_order = boolean();
    else if (key == "require_b_non_square") p.require_b_non_square = boolean();
    else if (key != "schema_version" && key != "kind") throw Error(Errc::ParseError, "unknown policy field '" + key + "'");
  }
  p.check();
  return p;
}

DlpInstance instance_from_json(const Json& j) {
  DlpInstance inst{curve_from_json(field(j, "curve")), point_from_json(field(j, "P")), hex_field(j, "n"),
                   point_from_json(field(j, "Q")), std::nullopt, std::nullopt};
  if (j.contains("factors")) {
    nt::Factorization f{{}, Integer(1)};
    const Json& arr = j["factors"];
    if (!arr.is_array()) throw Error(Errc::ParseError, "field 'factors' must be an array");
    for (const Json& e : arr) f.factors.push_back({hex_field(e, "prime"), number_field<unsigned>(e, "exponent")});
    inst.factors = std::move(f);
  }
  if (j.contains("interval")) inst.interval = std::pair{hex_field(j["interval"], "low"), hex_field(j["interval"], "high")};
  return inst;
}

void write_text(std::ostream& os, const CurveSuite& s) {
  os << "random curve over a " << s.trace.bits << "-bit prime\n";
  write_curve_lines(os, s.curve);
  write_order_lines(os, s.order);
  os << "G: " << text_point(s.base) << '\n'
     << "twist coefficient: " << to_hex(s.twist_coefficient) << '\n'
     << "twist order: " << to_hex(s.twist_order) << '\n'
     << "seed: " << s.trace.seed << '\n'
     << "attempt: " << s.trace.attempt << '\n'
     << "attempts: " << s.stats.attempts << '\n';
  for (std::size_t i = 0; i < kAbortStepCount; ++i)
    if (s.stats.aborts[i] > 0) os << "  aborted at " << to_string(static_cast<AbortStep>(i)) << ": " << s.stats.aborts[i] << '\n';
}

void write_text(std::ostream& os, const CmCurve& c, std::uint64_t primes_tried) {
  os << "CM curve, D = " << c.cm.D << ", class number " << c.cm.class_number << '\n';
  write_curve_lines(os, c.curve);
  if (c.subgroup) {
    write_order_lines(os, c.order_info());
    os << "G: " << text_point(c.subgroup->base) << '\n';
  } else {
    os << "N: " << to_hex(c.order) << '\n' << "t: " << to_hex(c.trace) << '\n';
  }
  os << "j: " << to_hex(c.j_invariant) << '\n'
     << "4p = t^2 + D s^2 with t = " << to_hex(c.cm.t) << ", s = " << to_hex(c.cm.s) << '\n'
     << "twisted: " << (c.twisted ? "yes" : "no") << '\n'
     << "primes tried: " << primes_tried << '\n';
}

void write_text(std::ostream& os, const ValidationReport& report) {
  for (const auto& r : report.results) {
    os << std::left << std::setw(24) << to_string(r.id) << std::setw(14) << to_string(r.verdict)
       << (r.required ? "required " : "advisory ");
    bool first = true;
    for (const auto& e : r.evidence) {
      os << (first ? "" : ", ") << e.key << '=' << e.value;
      first = false;
    }
    os << '\n';
  }
  os << "overall: " << to_string(report.overall) << '\n';
}

void write_text(std::ostream& os, const DlpInstance& inst) {
  write_curve_lines(os, inst.curve);
  os << "P: " << text_point(inst.P) << '\n' << "n: " << to_hex(inst.n) << '\n' << "Q: " << text_point(inst.Q) << '\n';
  if (inst.interval)
    os << "interval: [" << to_hex(inst.interval->first) << ", " << to_hex(inst.interval->second) << "]\n";
}

void write_text(std::ostream& os, const AttackResult& r) {
  os << "method: " << to_string(r.method) << '\n'
     << "l: " << to_hex(r.l) << '\n'
     << "group operations: " << r.group_ops << '\n';
  if (r.setup_ops) os << "setup operations: " << r.setup_ops << '\n';
  os << "wall time: " << std::chrono::duration<double>(r.wall_time).count() << " s\n";
  if (r.method == AttackMethod::Rho) os << "walkers: " << r.walkers << '\n' << "restarts: " << r.restarts << '\n';
}

void write_text(std::ostream& os, const AuditResult& a) {
  const StandardCurveRecord& r = a.record;
  os << r.name << " (" << r.family << ", " << r.agency << ", " << r.year << ")\n"
     << "approach: " << to_string(r.approach) << '\n'
     << "security: " << r.security_bits << " bits\n"
     << "source: " << r.source << '\n';
  write_text(os, a.report);
}

void write_text(std::ostream& os, const TrendReport& t, const Registry& registry) {
  for (const auto& r : registry.records())
    os << std::left << std::setw(18) << r.name << std::setw(8) << r.year << to_string(r.approach) << '\n';
  os << '\n';
  for (Approach a : kApproaches) os << std::left << std::setw(16) << to_string(a) << t.count(a) << '\n';
  os << "total: " << t.total << '\n'
     << "plurality: " << (t.plurality ? std::string(to_string(*t.plurality)) : std::string("none")) << '\n';
}

}  // namespace ecsafe
