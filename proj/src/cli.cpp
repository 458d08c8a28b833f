#include "ecsafe/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ecsafe/attack.hpp"
#include "ecsafe/cm.hpp"
#include "ecsafe/error.hpp"
#include "ecsafe/random_curve.hpp"
#include "ecsafe/registry.hpp"
#include "ecsafe/serialize.hpp"
#include "ecsafe/validator.hpp"

namespace ecsafe {
namespace {

/// Unreadable or malformed input file.
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad option value detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_json(text);
  } catch (const Error& e) {
    throw FileError(path + ": " + e.what());
  }
}

/// Runs `f` on a loaded document, turning content errors into file errors.
template <class F>
auto from_file(const std::string& path, F&& f) {
  const Json j = read_json_file(path);
  try {
    return f(j);
  } catch (const Error& e) {
    throw FileError(path + ": " + e.what());
  }
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Pass: return kExitOk;
    case Verdict::Fail: return kExitFail;
    case Verdict::Indeterminate: return kExitIndeterminate;
  }
  return kExitInternal;
}

int exit_for(Errc code) {
  switch (code) {
    case Errc::InvalidArgument:
    case Errc::UnknownCurve:
      return kExitUsage;
    case Errc::RetryBudgetExhausted:
    case Errc::ShapeExhausted:
    case Errc::CapExceeded:
    case Errc::NotInInterval:
    case Errc::DegenerateCollision:
    case Errc::Unsupported:
    case Errc::TooLarge:
      return kExitNoResult;
    default:
      return kExitInternal;
  }
}

struct Options {
  std::string format = "json";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::optional<std::uint64_t> seed;

  // generate random / cm / instance
  unsigned bits = 0;
  std::string policy_file;
  std::uint64_t max_attempts = 1'000'000;
  std::string prime;
  unsigned max_class_number = 3;
  std::string prefer = "prime";
  unsigned cofactor_max = 4;
  std::string classpoly_file;
  std::uint64_t smooth = 0;
  std::string interval_width;

  // validate / audit
  std::string curve_file;
  std::string name;
  bool trend = false;
  std::string registry_file;

  // attack
  std::string method;
  std::string instance_file;
  unsigned walkers = 1;
  std::uint64_t cap = std::uint64_t{1} << 32;
};

class Runner {
 public:
  Runner(Options opt, std::ostream& out) : opt_(std::move(opt)), out_(out) {}

  int generate_random() {
    const std::uint64_t seed = resolve_seed();
    ValidatorPolicy policy = ValidatorPolicy::desk(opt_.bits);
    if (!opt_.policy_file.empty()) policy = load_policy(policy);
    RandomGenOptions options;
    options.max_attempts = opt_.max_attempts;
    options.threads = opt_.threads;
    const CurveSuite suite = generate_random_curve(opt_.bits, policy, seed, options);
    if (json()) {
      Json j = to_json(suite);
      j["policy"] = to_json(policy);
      emit(j);
    } else {
      write_text(out_, suite);
    }
    return kExitOk;
  }

  int generate_cm() {
    const std::uint64_t seed = resolve_seed();
    const ClassPolynomialTable table =
        opt_.classpoly_file.empty() ? ClassPolynomialTable::builtin() : load_table(opt_.classpoly_file);
    const std::vector<std::uint64_t> candidates = table.discriminants(opt_.max_class_number);
    if (candidates.empty()) throw UsageError("no discriminants with class number <= " + std::to_string(opt_.max_class_number));
    OrderPreference pref;
    pref.cofactor_max = opt_.cofactor_max;
    if (opt_.prefer == "prime") pref.kind = OrderPreference::Kind::Prime;
    else if (opt_.prefer == "near-prime") pref.kind = OrderPreference::Kind::NearPrime;
    else pref.kind = OrderPreference::Kind::Any;

    Rng rng(seed);
    std::optional<CmCurve> curve;
    std::uint64_t tried = 1;
    if (!opt_.prime.empty()) {
      const Integer p = parse_integer(opt_.prime, "--prime");
      if (p <= 3 || !nt::is_prime(p)) throw UsageError("--prime must be a prime greater than 3");
      curve = cm_generate(p, candidates, pref, rng, table);
      if (!curve) throw Error(Errc::RetryBudgetExhausted, "no CM curve of the requested order shape for this prime");
    } else {
      CmSearchResult found = cm_generate_random_prime(opt_.bits, candidates, pref, rng, 10'000, table);
      curve = std::move(found.curve);
      tried = found.primes_tried;
    }
    if (json()) {
      Json j = to_json(*curve, tried);
      j["seed"] = seed;
      emit(j);
    } else {
      write_text(out_, *curve, tried);
      out_ << "seed: " << seed << '\n';
    }
    return kExitOk;
  }

  int generate_instance() {
    const std::uint64_t seed = resolve_seed();
    Rng rng(seed);
    GeneratedInstance g = opt_.smooth ? smooth_order_instance(opt_.bits, opt_.smooth, rng)
                                      : prime_order_instance(opt_.bits, rng);
    if (!opt_.interval_width.empty()) {
      Integer w = parse_integer(opt_.interval_width, "--interval-width");
      if (w < 1) throw UsageError("--interval-width must be positive");
      if (w > g.instance.n) w = g.instance.n;
      // Place l uniformly inside a window of width w that fits in [0, n).
      const Integer lo_min = g.l - w + 1 > 0 ? g.l - w + 1 : Integer(0);
      const Integer lo_max = g.l + w <= g.instance.n ? g.l : g.instance.n - w;
      const Integer low = lo_min + rng.below(lo_max - lo_min + 1);
      g.instance.interval = std::pair{low, low + w - 1};
    }
    if (json()) {
      Json j = to_json(g.instance);
      j["planted_l"] = to_hex(g.l);
      j["seed"] = seed;
      emit(j);
    } else {
      write_text(out_, g.instance);
      out_ << "planted l: " << to_hex(g.l) << '\n' << "seed: " << seed << '\n';
    }
    return kExitOk;
  }

  int validate_curve() {
    const Json doc = read_json_file(opt_.curve_file);
    Subject subject = [&] {
      try {
        return subject_from_json(doc);
      } catch (const Error& e) {
        throw FileError(opt_.curve_file + ": " + e.what());
      }
    }();
    ValidatorPolicy policy = ValidatorPolicy::audit();
    if (!opt_.policy_file.empty()) {
      policy = load_policy(policy);
    } else if (doc.contains("policy")) {
      try {
        policy = policy_from_json(doc["policy"], policy);
      } catch (const Error& e) {
        throw FileError(opt_.curve_file + ": " + e.what());
      }
    }
    const ValidationReport report = validate(subject, policy, opt_.threads);
    if (json()) emit(to_json(report, policy));
    else write_text(out_, report);
    return verdict_exit(report.overall);
  }

  int audit_registry() {
    const Registry loaded = opt_.registry_file.empty() ? Registry() : load_registry(opt_.registry_file);
    const Registry& registry = opt_.registry_file.empty() ? Registry::builtin() : loaded;
    if (opt_.trend) {
      const TrendReport trend = trend_report(registry);
      if (json()) emit(to_json(trend, registry));
      else write_text(out_, trend, registry);
      return kExitOk;
    }
    if (opt_.name.empty()) throw UsageError("audit needs --name or --trend");
    ValidatorPolicy policy = ValidatorPolicy::audit();
    if (!opt_.policy_file.empty()) policy = load_policy(policy);
    const AuditResult result = audit(registry, opt_.name, policy, opt_.threads);
    if (json()) emit(to_json(result, policy));
    else write_text(out_, result);
    return verdict_exit(result.report.overall);
  }

  int attack() {
    const auto method = method_from_string(opt_.method);
    if (!method) throw UsageError("unknown attack method '" + opt_.method + "'");
    const DlpInstance inst = from_file(opt_.instance_file, [](const Json& j) {
      DlpInstance i = instance_from_json(j);
      check_instance(i);
      return i;
    });
    const std::uint64_t seed = resolve_seed();
    Rng rng(seed);
    const AttackResult result = run_attack(*method, inst, rng, opt_.walkers, opt_.threads, opt_.cap);
    if (json()) {
      Json j = to_json(result);
      j["seed"] = seed;
      emit(j);
    } else {
      write_text(out_, result);
      out_ << "seed: " << seed << '\n';
    }
    return kExitOk;
  }

 private:
  bool json() const { return opt_.format == "json"; }

  void emit(const Json& j) { out_ << j.dump(2) << '\n'; }

  std::uint64_t resolve_seed() const { return opt_.seed ? *opt_.seed : Rng::entropy_seed(); }

  ValidatorPolicy load_policy(const ValidatorPolicy& base) const {
    return from_file(opt_.policy_file, [&](const Json& j) {
      return policy_from_json(j.contains("policy") ? j["policy"] : j, base);
    });
  }

  static ClassPolynomialTable load_table(const std::string& path) {
    const std::string text = read_file(path);
    try {
      return ClassPolynomialTable::parse(text);
    } catch (const Error& e) {
      throw FileError(path + ": " + e.what());
    }
  }

  static Registry load_registry(const std::string& path) {
    const std::string text = read_file(path);
    try {
      return Registry::parse(text);
    } catch (const Error& e) {
      throw FileError(path + ": " + e.what());
    }
  }

  static Integer parse_integer(const std::string& text, const char* flag) {
    try {
      if (text.rfind("0x", 0) == 0) return from_hex(text.substr(2));
      return from_dec(text);
    } catch (const Error&) {
      throw UsageError(std::string(flag) + " expects a decimal or 0x-prefixed hex integer");
    }
  }

  Options opt_;
  std::ostream& out_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Short Weierstrass curve generation, validation and attack toolkit", "ecsafe"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--threads", opt.threads, "Worker threads")->check(CLI::Range(1u, 1024u));

  auto* generate = app.add_subcommand("generate", "Generate a curve or a DLP instance");
  generate->require_subcommand(1);

  auto* random = generate->add_subcommand("random", "Random curve with prime order and prime twist order");
  random->add_option("--bits", opt.bits, "Prime size in bits")->required()->check(CLI::Range(16u, 60u));
  random->add_option("--seed", opt.seed, "Seed; drawn from the OS when absent");
  random->add_option("--policy", opt.policy_file, "Validator policy JSON");
  random->add_option("--max-attempts", opt.max_attempts, "Retry budget")->check(CLI::PositiveNumber);

  auto* cm = generate->add_subcommand("cm", "Curve by complex multiplication");
  auto* prime_opt = cm->add_option("--prime", opt.prime, "Field prime (decimal or 0x hex)");
  auto* bits_opt = cm->add_option("--bits", opt.bits, "Random prime size in bits")->check(CLI::Range(8u, 4096u));
  prime_opt->excludes(bits_opt);
  cm->add_option("--max-class-number", opt.max_class_number, "Largest class number to try")->check(CLI::Range(1u, 64u));
  cm->add_option("--prefer", opt.prefer, "Order shape")->check(CLI::IsMember({"prime", "near-prime", "any"}));
  cm->add_option("--cofactor-max", opt.cofactor_max, "Largest cofactor for near-prime orders")->check(CLI::Range(1u, 1024u));
  cm->add_option("--seed", opt.seed, "Seed; drawn from the OS when absent");
  cm->add_option("--classpoly", opt.classpoly_file, "Class polynomial table");

  auto* instance = generate->add_subcommand("instance", "Random ECDLP instance");
  instance->add_option("--bits", opt.bits, "Prime size in bits")->required()->check(CLI::Range(8u, 64u));
  instance->add_option("--smooth", opt.smooth, "Make the group order smooth below this bound");
  instance->add_option("--interval-width", opt.interval_width, "Also record an interval containing l");
  instance->add_option("--seed", opt.seed, "Seed; drawn from the OS when absent");

  auto* validate_cmd = app.add_subcommand("validate", "Run the criteria catalog on a curve file");
  validate_cmd->add_option("--curve", opt.curve_file, "Curve JSON")->required();
  validate_cmd->add_option("--policy", opt.policy_file, "Validator policy JSON");

  auto* audit_cmd = app.add_subcommand("audit", "Audit standard curves");
  auto* name_opt = audit_cmd->add_option("--name", opt.name, "Curve name");
  auto* trend_opt = audit_cmd->add_flag("--trend", opt.trend, "Summarize generation approaches");
  name_opt->excludes(trend_opt);
  audit_cmd->add_option("--policy", opt.policy_file, "Validator policy JSON");
  audit_cmd->add_option("--registry", opt.registry_file, "Registry file instead of the built-in one");

  auto* attack_cmd = app.add_subcommand("attack", "Solve a DLP instance");
  attack_cmd->add_option("--method", opt.method, "Solver")
      ->required()
      ->check(CLI::IsMember({"exhaustive", "bsgs", "rho", "lambda", "ph"}));
  attack_cmd->add_option("--instance", opt.instance_file, "Instance JSON")->required();
  attack_cmd->add_option("--walkers", opt.walkers, "Rho walkers")->check(CLI::Range(1u, 4096u));
  attack_cmd->add_option("--seed", opt.seed, "Seed; drawn from the OS when absent");
  attack_cmd->add_option("--cap", opt.cap, "Exhaustive search cap");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ecsafe: " << e.what() << '\n';
    return kExitUsage;
  }

  Runner runner(opt, out);
  try {
    if (random->parsed()) return runner.generate_random();
    if (cm->parsed()) {
      if (opt.prime.empty() && opt.bits == 0) throw UsageError("generate cm needs --prime or --bits");
      return runner.generate_cm();
    }
    if (instance->parsed()) return runner.generate_instance();
    if (validate_cmd->parsed()) return runner.validate_curve();
    if (audit_cmd->parsed()) return runner.audit_registry();
    if (attack_cmd->parsed()) return runner.attack();
    throw UsageError("no command given");
  } catch (const UsageError& e) {
    err << "ecsafe: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FileError& e) {
    err << "ecsafe: " << e.what() << '\n';
    return kExitFile;
  } catch (const Error& e) {
    err << "ecsafe: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const std::exception& e) {
    err << "ecsafe: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace ecsafe
