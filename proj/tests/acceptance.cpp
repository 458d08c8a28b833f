// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ecsafe/attack.hpp"
#include "ecsafe/cm.hpp"
#include "ecsafe/curve.hpp"
#include "ecsafe/error.hpp"
#include "ecsafe/numtheory.hpp"
#include "ecsafe/order.hpp"
#include "ecsafe/random_curve.hpp"
#include "ecsafe/registry.hpp"
#include "ecsafe/validator.hpp"
#include "oracles.hpp"

using namespace ecsafe;

namespace {

// Pinned tolerances and sizes.
constexpr double kGroupLawSeconds = 1.0;
constexpr int kHasseCurves = 1000;
constexpr std::uint64_t kHassePrimeLimit = 1 << 20;
constexpr double kHasseSeconds = 600.0;
constexpr int kTwistCurves = 100;
constexpr int kCmMinPrimes = 20;
constexpr std::uint64_t kCmPrimeLimit = 1 << 18;
constexpr double kCmSeconds = 60.0;
constexpr unsigned kSuiteBits = 40;
constexpr int kSuiteCount = 10;
constexpr double kSuiteSeconds = 600.0;
constexpr int kRhoRuns = 25;
constexpr double kRhoLow = 0.3;
constexpr double kRhoHigh = 3.0;
constexpr double kRhoSlope = 0.5;
constexpr double kRhoSlopeTolerance = 0.1;
constexpr double kRhoSeconds = 300.0;
constexpr int kSmoothInstances = 10;
constexpr std::uint64_t kSmoothBound = 1 << 16;
constexpr double kPhSecondsEach = 1.0;
constexpr int kAgreementInstances = 100;
constexpr double kAuditSeconds = 10.0;
constexpr std::uint64_t kSqrtPrimeLimit = 1 << 12;

struct Outcome {
  bool ok = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool cond, const std::string& what) {
    if (!cond && out_.ok) {
      out_.ok = false;
      out_.detail = what;
    }
  }
  void note(const std::string& text) {
    if (out_.ok) out_.detail = text;
  }
  Outcome result() const { return out_; }

 private:
  Outcome out_;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

Curve random_curve(const Integer& p, Rng& rng) {
  for (;;) {
    try {
      return Curve::with_prime(p, rng.below(p), rng.below(p));
    } catch (const Error& e) {
      if (e.code() != Errc::Singular) throw;
    }
  }
}

// 1
Outcome group_law() {
  Check c;
  const Curve E = Curve::make(5, 1, 1);
  std::vector<Point> pts{Point::infinity()};
  for (auto [x, y] : oracle::affine_points(5, 1, 1)) pts.push_back(Point::affine(x, y));
  c.expect(pts.size() == 9, "E(5,1,1) does not have 9 points");
  c.expect(E.p() + 1 - static_cast<long>(pts.size()) == -3, "trace is not -3");
  const Point O = Point::infinity();
  for (const Point& P : pts) {
    c.expect(E.add(P, O) == P && E.add(O, P) == P, "infinity is not the identity");
    for (const Point& Q : pts) {
      const Point PQ = E.add(P, Q);
      c.expect(E.contains(PQ), "sum leaves the curve");
      c.expect(std::find(pts.begin(), pts.end(), PQ) != pts.end(), "sum not in the table");
      c.expect(PQ == E.add(Q, P), "addition not commutative");
      for (const Point& R : pts) c.expect(E.add(PQ, R) == E.add(P, E.add(Q, R)), "addition not associative");
    }
    Point acc = O;
    for (int l = 0; l < 9; ++l) {
      c.expect(E.scalar_mul(l, P) == acc, "scalar_mul disagrees with repeated addition");
      acc = E.add(acc, P);
    }
  }
  c.note("9x9 table, 729 triples");
  return c.result();
}

// 2
Outcome hasse() {
  Check c;
  Rng rng(2002);
  int violations = 0;
  for (int i = 0; i < kHasseCurves; ++i) {
    const unsigned bits = 8 + static_cast<unsigned>(rng.below(13));  // 8..20
    const Integer p = nt::gen_prime(nt::RandomBits{bits}, rng).p;
    c.expect(p < from_u64(kHassePrimeLimit), "prime above the limit");
    const Curve E = random_curve(p, rng);
    const Integer N = count_exhaustive(E);
    const Integer t = p + 1 - N;
    if (t * t > 4 * p) ++violations;
    c.expect(to_u64(N) == oracle::count_points(to_u64(p), to_u64(E.a()), to_u64(E.b())),
             "count_exhaustive disagrees with the oracle");
  }
  c.expect(violations == 0, fmt("%d Hasse violations", violations));
  c.note(fmt("%d curves, 0 violations", kHasseCurves));
  return c.result();
}

// 3
Outcome twist() {
  Check c;
  const Curve toy = Curve::make(5, 1, 1);
  const Curve toy_twist = toy.twist(2);
  c.expect(count_exhaustive(toy) == 9 && count_exhaustive(toy_twist) == 3, "p = 5 case is not 9 + 3");
  Rng rng(2003);
  for (int i = 0; i < kTwistCurves; ++i) {
    const Integer p = nt::gen_prime(nt::RandomBits{8 + static_cast<unsigned>(rng.below(9))}, rng).p;
    const Curve E = random_curve(p, rng);
    const Integer cc = E.random_non_square(rng);
    c.expect(oracle::legendre(to_u64(cc), to_u64(p)) == -1, "twist coefficient is a square");
    const Curve Et = E.twist(cc);
    c.expect(count_exhaustive(E) + count_exhaustive(Et) == 2 * p + 2, "N + N' != 2p + 2");
  }
  c.note(fmt("%d twists plus p = 5: 9 + 3 = 12", kTwistCurves));
  return c.result();
}

// 4
Outcome cm_reproduction() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  Rng rng(2004);
  const std::vector<std::uint64_t> d7 = {7};
  const auto big = cm_generate(11, d7, OrderPreference{OrderPreference::Kind::Any, 4, true}, rng);
  c.expect(big.has_value(), "no curve for p = 11, D = 7");
  if (big) {
    c.expect(big->cm.t == 4 && big->cm.s == 2, "(t, s) != (4, 2)");
    c.expect(big->j_invariant == 2, "j != 2");
    c.expect(big->curve == Curve::make(11, 5, 7), "curve != E(11,5,7)");
    c.expect(oracle::count_points(11, 5, 7) == 16 && big->order == 16, "order != 16");
    const Curve tw = big->curve.twist(big->curve.random_non_square(rng));
    c.expect(oracle::count_points(11, to_u64(tw.a()), to_u64(tw.b())) == 8, "twist order != 8");
  }

  const std::vector<std::uint64_t> class_one = ClassPolynomialTable::builtin().discriminants(1);
  int primes = 0, curves = 0;
  for (std::uint64_t p : oracle::primes_below(kCmPrimeLimit)) {
    if (p < 1000 || p % 211 != 7) continue;
    ++primes;
    for (std::uint64_t D : class_one) {
      const std::vector<std::uint64_t> one = {D};
      const auto got = cm_generate(from_u64(p), one, OrderPreference{OrderPreference::Kind::Any, 4, true}, rng);
      c.expect(got.has_value() == oracle::representable(p, D), "representability mismatch");
      if (!got) continue;
      ++curves;
      const Integer t = got->cm.t;
      const Integer N = from_u64(oracle::count_points(p, to_u64(got->curve.a()), to_u64(got->curve.b())));
      c.expect(N == got->order, "emitted order differs from the count");
      c.expect(N == from_u64(p) + 1 - t || N == from_u64(p) + 1 + t, "order not p + 1 -/+ t");
    }
  }
  const double secs = seconds_since(start);
  c.expect(primes >= kCmMinPrimes, fmt("only %d primes", primes));
  c.expect(secs < kCmSeconds, fmt("took %.1f s", secs));
  c.note(fmt("p = 11 case exact; %d primes, %d curves counted", primes, curves));
  return c.result();
}

// 5
Outcome random_round_trip() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const ValidatorPolicy policy = ValidatorPolicy::desk(kSuiteBits);
  std::uint64_t attempts = 0;
  for (int i = 0; i < kSuiteCount; ++i) {
    const std::uint64_t seed = 5000 + static_cast<std::uint64_t>(i);
    const CurveSuite suite = generate_random_curve(kSuiteBits, policy, seed, RandomGenOptions{});
    attempts += suite.stats.attempts;
    const ValidationReport report = validate(suite.subject(), policy);
    for (const auto& r : report.results)
      c.expect(r.verdict != Verdict::Fail, fmt("seed %llu: %s failed", static_cast<unsigned long long>(seed),
                                                std::string(to_string(r.id)).c_str()));
    c.expect(replay(suite.trace, policy) == suite, "replay differs");
  }
  const double secs = seconds_since(start);
  c.expect(secs < kSuiteSeconds, fmt("took %.1f s", secs));
  c.note(fmt("%d suites, %llu attempts, replay exact, %.1f s", kSuiteCount,
             static_cast<unsigned long long>(attempts), secs));
  return c.result();
}

// 6
Outcome rho_cost() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  Rng rng(2006);
  std::vector<double> xs, ys;
  double ratio24 = 0;
  for (unsigned bits : {16u, 20u, 24u}) {
    const GeneratedInstance g = prime_order_instance(bits, rng);
    std::vector<double> ops;
    for (int run = 0; run < kRhoRuns; ++run) {
      const AttackResult r = pollard_rho(g.instance, 1, rng, 1);
      c.expect(r.l == g.l, "rho returned a wrong logarithm");
      ops.push_back(static_cast<double>(r.group_ops));
    }
    const double n = g.instance.n.get_d();
    const double med = median(ops);
    xs.push_back(std::log(n));
    ys.push_back(std::log(med));
    if (bits == 24) {
      ratio24 = med / std::sqrt(std::numbers::pi * n / 2);
      c.expect(ratio24 >= kRhoLow && ratio24 <= kRhoHigh, fmt("median/expected = %.2f", ratio24));
    }
  }
  const double mx = (xs[0] + xs[1] + xs[2]) / 3, my = (ys[0] + ys[1] + ys[2]) / 3;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 3; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  c.expect(std::abs(slope - kRhoSlope) <= kRhoSlopeTolerance, fmt("slope %.3f", slope));
  const double secs = seconds_since(start);
  c.expect(secs < kRhoSeconds, fmt("took %.1f s", secs));
  c.note(fmt("median/sqrt(pi n/2) = %.2f at 2^24, slope %.3f", ratio24, slope));
  return c.result();
}

// 7
Outcome pohlig_hellman_weak() {
  Check c;
  Rng rng(2007);
  double worst = 0;
  for (int i = 0; i < kSmoothInstances; ++i) {
    const GeneratedInstance g = smooth_order_instance(48, kSmoothBound, rng);
    const AttackResult r = pohlig_hellman(g.instance, *g.instance.factors);
    const double secs = std::chrono::duration<double>(r.wall_time).count();
    worst = std::max(worst, secs);
    const Subject s{g.instance.curve, g.order, g.instance.P, std::nullopt};
    const bool weak = run_criterion(Criterion::ORDER_PRIME, s, ValidatorPolicy::desk(48)).verdict == Verdict::Fail;
    c.expect(r.l == g.l && secs < kPhSecondsEach && weak, fmt("instance %d: attack and verdict disagree", i));
    for (const auto& f : g.instance.factors->factors) c.expect(f.prime < from_u64(kSmoothBound), "order not smooth");
  }
  c.note(fmt("%d instances, slowest %.4f s", kSmoothInstances, worst));
  return c.result();
}

// 8
Outcome bsgs_exact() {
  Check c;
  const DlpInstance toy{Curve::make(5, 1, 1), Point::affine(0, 1), 9, Point::affine(3, 1), std::nullopt,
                        std::nullopt};
  const AttackResult r = bsgs(toy);
  c.expect(r.l == 5, "fixture l != 5");
  c.expect(r.group_ops <= 2 * 3 + 2, fmt("fixture used %llu ops", static_cast<unsigned long long>(r.group_ops)));

  Rng rng(2008);
  for (int i = 0; i < kAgreementInstances; ++i) {
    const GeneratedInstance g = prime_order_instance(10 + static_cast<unsigned>(rng.below(9)), rng);
    c.expect(g.instance.n < pow2(20), "n above 2^20");
    const Integer e = exhaustive_search(g.instance, std::uint64_t{1} << 20).l;
    const Integer b = bsgs(g.instance).l;
    const Integer rho = pollard_rho(g.instance, 2, rng, 1).l;
    const Integer ph = pohlig_hellman(g.instance, nt::factor_trial(g.instance.n, 1 << 20)).l;
    c.expect(e == g.l && b == g.l && rho == g.l && ph == g.l, fmt("instance %d: solvers disagree", i));
  }
  c.note(fmt("fixture in %llu ops; %d instances agree", static_cast<unsigned long long>(r.group_ops),
             kAgreementInstances));
  return c.result();
}

// 9
Outcome standards_audit() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const ValidatorPolicy policy = ValidatorPolicy::audit();
  c.expect(policy.security_bits == 160 && policy.embedding_bound == 100, "audit policy drifted");
  const Criterion must_pass[] = {Criterion::C1_SUBGROUP_SIZE,  Criterion::C2_NON_ANOMALOUS,
                                 Criterion::C3_UNIQUE_SUBGROUP, Criterion::ORDER_PRIME,
                                 Criterion::BASEPOINT_ORDER_PRIME, Criterion::NON_SUPERSINGULAR,
                                 Criterion::COFACTOR,          Criterion::EMBEDDING_DEGREE,
                                 Criterion::HASSE_CONSISTENT};
  std::ostringstream seen;
  for (const char* name : {"P-256", "secp256k1", "brainpoolP256r1"}) {
    const AuditResult a = audit(Registry::builtin(), name, policy);
    for (Criterion k : must_pass)
      c.expect(a.report.at(k).verdict == Verdict::Pass, fmt("%s: %s not Pass", name, std::string(to_string(k)).c_str()));
    for (Criterion k : {Criterion::TWIST_SECURE, Criterion::CM_DISCRIMINANT}) {
      const Verdict v = a.report.at(k).verdict;
      c.expect(v != Verdict::Fail, fmt("%s: %s Fail", name, std::string(to_string(k)).c_str()));
      seen << ' ' << to_string(v)[0];
    }
  }
  const TrendReport trend = trend_report(Registry::builtin());
  c.expect(trend.plurality == Approach::Deterministic, "plurality is not Deterministic");
  const double secs = seconds_since(start);
  c.expect(secs < kAuditSeconds, fmt("took %.1f s", secs));
  c.note(fmt("twist/CM verdicts:%s; plurality Deterministic %llu/%llu; %.1f s", seen.str().c_str(),
             static_cast<unsigned long long>(trend.count(Approach::Deterministic)),
             static_cast<unsigned long long>(trend.total), secs));
  return c.result();
}

// 10
Outcome sqrt_and_compression() {
  Check c;
  std::uint64_t residues = 0, points = 0;
  for (std::uint64_t p : oracle::primes_below(kSqrtPrimeLimit)) {
    if (p == 2) continue;
    const Integer P = from_u64(p);
    for (std::uint64_t v = 0; v < p; ++v) {
      ++residues;
      const auto want = oracle::roots(v, p);
      const auto got = nt::sqrt_mod(from_u64(v), P);
      c.expect(got.has_value() == !want.empty(), "sqrt_mod existence wrong");
      if (!got) continue;
      c.expect(std::find(want.begin(), want.end(), to_u64(*got)) != want.end(), "sqrt_mod root wrong");
      if (p % 4 == 3) c.expect(nt::sqrt_mod_tonelli_shanks(from_u64(v), P) == got, "fast path disagrees");
    }
    if (p <= 3) continue;
    for (std::uint64_t b = 1;; ++b) {
      if ((4 + 27 * b * b) % p == 0) continue;
      const Curve E = Curve::make(P, 1, from_u64(b));
      for (auto [x, y] : oracle::affine_points(p, 1, b)) {
        ++points;
        const Point pt = Point::affine(from_u64(x), from_u64(y));
        c.expect(E.decompress(compress(pt)) == pt, "compression round trip failed");
      }
      break;
    }
  }
  c.note(fmt("%llu residues, %llu points", static_cast<unsigned long long>(residues),
             static_cast<unsigned long long>(points)));
  return c.result();
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"group law on E(5,1,1)", group_law},
      {"Hasse bound", hasse},
      {"twist order identity", twist},
      {"CM reproduction", cm_reproduction},
      {"random generation round trip", random_round_trip},
      {"rho cost law", rho_cost},
      {"Pohlig-Hellman on smooth orders", pohlig_hellman_weak},
      {"BSGS exactness and solver agreement", bsgs_exact},
      {"standards audit", standards_audit},
      {"square roots and compression", sqrt_and_compression},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = seconds_since(start);
    if (index == 1 && secs >= kGroupLawSeconds) o = {false, fmt("took %.2f s", secs)};
    if (index == 2 && secs >= kHasseSeconds) o = {false, fmt("took %.1f s", secs)};
    if (!o.ok) ++failed;
    std::printf("%s %2d %s: %s (%.2f s)\n", o.ok ? "PASS" : "FAIL", index, name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
