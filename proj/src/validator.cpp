#include "ecsafe/validator.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "ecsafe/error.hpp"

namespace ecsafe {
namespace {

std::string dec(const Integer& v) { return v.get_str(10); }
std::string dec(std::uint64_t v) { return std::to_string(v); }

Verdict verdict_of(bool pass) { return pass ? Verdict::Pass : Verdict::Fail; }

CriterionResult evaluate(Criterion id, const Subject& s, const ValidatorPolicy& policy) {
  const Integer& p = s.curve.p();
  const OrderInfo& o = s.order;
  CriterionResult r{id, Verdict::Pass, true, {}};
  auto ev = [&](std::string key, std::string value) { r.evidence.push_back({std::move(key), std::move(value)}); };

  switch (id) {
    case Criterion::C1_SUBGROUP_SIZE: {
      ev("n_bits", dec(bit_length(o.n)));
      ev("L", dec(policy.security_bits));
      r.verdict = verdict_of(o.n > pow2(policy.security_bits));
      break;
    }
    case Criterion::C2_NON_ANOMALOUS: {
      ev("N", to_hex(o.N));
      ev("p", to_hex(p));
      r.verdict = verdict_of(o.N != p);
      break;
    }
    case Criterion::C3_UNIQUE_SUBGROUP: {
      // n > 4 sqrt(p)  <=>  n^2 > 16 p
      ev("n", to_hex(o.n));
      ev("four_sqrt_p_floor", to_hex(isqrt(16 * p)));
      r.verdict = verdict_of(o.n * o.n > 16 * p);
      break;
    }
    case Criterion::ORDER_PRIME: {
      ev("N", to_hex(o.N));
      ev("h", dec(o.h));
      const bool prime = nt::is_prime(o.N);
      ev("N_prime", prime ? "true" : "false");
      bool pass = prime;
      if (!policy.require_prime_order && !prime)
        pass = o.h <= policy.cofactor_max && nt::is_prime(o.n);
      r.verdict = verdict_of(pass);
      break;
    }
    case Criterion::BASEPOINT_ORDER_PRIME: {
      ev("n", to_hex(o.n));
      r.verdict = verdict_of(nt::is_prime(o.n));
      break;
    }
    case Criterion::NON_SUPERSINGULAR: {
      ev("t", to_hex(o.t));
      r.verdict = verdict_of(mod(o.t, p) != 0);
      break;
    }
    case Criterion::EMBEDDING_DEGREE: {
      ev("bound", dec(policy.embedding_bound));
      const auto k = nt::embedding_degree(o.n, p, policy.embedding_bound);
      ev("k", k ? dec(*k) : std::string("exceeds_bound"));
      r.verdict = verdict_of(!k);
      break;
    }
    case Criterion::COFACTOR: {
      ev("h", dec(o.h));
      ev("cofactor_max", dec(policy.cofactor_max));
      r.verdict = verdict_of(o.h <= policy.cofactor_max);
      break;
    }
    case Criterion::B_NOT_SQUARE: {
      r.required = policy.require_b_non_square;
      const int symbol = nt::legendre(s.curve.b(), p);
      ev("legendre_b", std::to_string(symbol));
      r.verdict = verdict_of(symbol == -1);
      break;
    }
    case Criterion::TWIST_SECURE: {
      // The twist passes when its largest prime-order subgroup clears the
      // same 2^L bar as the curve itself.
      const Integer twist_order = 2 * p + 2 - o.N;
      ev("twist_order", to_hex(twist_order));
      if (twist_order <= 0) {
        r.verdict = Verdict::Fail;
        break;
      }
      const Integer bar = pow2(policy.security_bits);
      const nt::Factorization f = nt::factor_trial(twist_order, policy.discriminant_effort);
      if (f.complete()) {
        const Integer& largest = f.factors.back().prime;
        ev("twist_cofactor", dec(twist_order / largest));
        ev("largest_prime_bits", dec(bit_length(largest)));
        r.verdict = verdict_of(largest > bar);
      } else {
        ev("unfactored_bits", dec(bit_length(f.cofactor)));
        r.verdict = f.cofactor <= bar ? Verdict::Fail : Verdict::Indeterminate;
      }
      break;
    }
    case Criterion::CM_DISCRIMINANT: {
      ev("min_discriminant", dec(policy.min_cm_discriminant));
      if (s.cm) {
        ev("D", dec(s.cm->D));
        ev("h_D", dec(s.cm->class_number));
        ev("source", "cm");
        const bool consistent = 4 * p == s.cm->t * s.cm->t + s.cm->D * s.cm->s * s.cm->s &&
                                abs(s.cm->t) == abs(o.t);
        if (!consistent) {
          r.verdict = Verdict::Fail;
          ev("consistent", "false");
          break;
        }
        r.verdict = verdict_of(s.cm->D > policy.min_cm_discriminant);
        break;
      }
      const Integer m = o.t * o.t - 4 * p;
      if (m == 0) {
        r.verdict = Verdict::Fail;
        break;
      }
      const nt::SquarefreeResult sf = nt::squarefree_part(m, policy.discriminant_effort);
      ev("effort_used", dec(sf.effort_used));
      if (!sf.complete) {
        ev("partial_squarefree_part", to_hex(sf.d));
        r.verdict = Verdict::Indeterminate;
        break;
      }
      // Fundamental discriminant of Q(sqrt(-d)).
      const Integer D = mod(sf.d, 4) == 3 ? sf.d : 4 * sf.d;
      ev("D", to_hex(D));
      ev("source", "factorization");
      r.verdict = verdict_of(D > policy.min_cm_discriminant);
      break;
    }
    case Criterion::HASSE_CONSISTENT: {
      ev("t", to_hex(o.t));
      ev("two_sqrt_p_floor", to_hex(isqrt(4 * p)));
      r.verdict = verdict_of(o.t * o.t <= 4 * p);
      break;
    }
  }
  return r;
}

}  // namespace

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::C1_SUBGROUP_SIZE: return "C1_SUBGROUP_SIZE";
    case Criterion::C2_NON_ANOMALOUS: return "C2_NON_ANOMALOUS";
    case Criterion::C3_UNIQUE_SUBGROUP: return "C3_UNIQUE_SUBGROUP";
    case Criterion::ORDER_PRIME: return "ORDER_PRIME";
    case Criterion::BASEPOINT_ORDER_PRIME: return "BASEPOINT_ORDER_PRIME";
    case Criterion::NON_SUPERSINGULAR: return "NON_SUPERSINGULAR";
    case Criterion::EMBEDDING_DEGREE: return "EMBEDDING_DEGREE";
    case Criterion::COFACTOR: return "COFACTOR";
    case Criterion::B_NOT_SQUARE: return "B_NOT_SQUARE";
    case Criterion::TWIST_SECURE: return "TWIST_SECURE";
    case Criterion::CM_DISCRIMINANT: return "CM_DISCRIMINANT";
    case Criterion::HASSE_CONSISTENT: return "HASSE_CONSISTENT";
  }
  return "UNKNOWN";
}

std::optional<Criterion> criterion_from_string(std::string_view name) {
  for (Criterion c : kCatalog)
    if (to_string(c) == name) return c;
  return std::nullopt;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

ValidatorPolicy ValidatorPolicy::desk(unsigned bits) {
  ValidatorPolicy p;
  p.security_bits = bits > 3 ? bits - 2 : 1;
  p.require_b_non_square = true;
  return p;
}

void ValidatorPolicy::check() const {
  if (security_bits < 1) throw Error(Errc::InvalidArgument, "L must be >= 1");
  if (embedding_bound < 1) throw Error(Errc::InvalidArgument, "embedding bound must be >= 1");
  if (discriminant_effort < 1) throw Error(Errc::InvalidArgument, "discriminant effort must be >= 1");
}

const CriterionResult& ValidationReport::at(Criterion c) const {
  for (const auto& r : results)
    if (r.id == c) return r;
  throw Error(Errc::InvalidArgument, "criterion missing from report");
}

void check_consistency(const Subject& s) {
  const Curve& E = s.curve;
  const OrderInfo& o = s.order;
  auto fail = [](const std::string& why) { return Error(Errc::InconsistentSubject, why); };
  if (s.base.is_infinity()) throw fail("base point is the point at infinity");
  if (!E.contains(s.base)) throw fail("base point is not on the curve");
  if (o.N <= 0 || o.n <= 0 || o.h <= 0) throw fail("orders must be positive");
  if (o.n * o.h != o.N) throw fail("n * h != N");
  if (o.t != E.p() + 1 - o.N) throw fail("t != p + 1 - N");
  if (!E.scalar_mul(o.N, s.base).is_infinity()) throw fail("N * G is not the identity");
  if (!E.scalar_mul(o.n, s.base).is_infinity()) throw fail("n * G is not the identity");
}

CriterionResult run_criterion(Criterion id, const Subject& subject, const ValidatorPolicy& policy) {
  policy.check();
  check_consistency(subject);
  return evaluate(id, subject, policy);
}

ValidationReport validate(const Subject& subject, const ValidatorPolicy& policy, unsigned threads) {
  policy.check();
  check_consistency(subject);

  std::vector<std::optional<CriterionResult>> slots(kCatalog.size());
  std::vector<std::exception_ptr> errors(kCatalog.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < kCatalog.size();) {
      try {
        slots[i] = evaluate(kCatalog[i], subject, policy);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::clamp<unsigned>(threads, 1, kCatalog.size());
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  }

  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  ValidationReport report{{}, Verdict::Pass};
  bool any_fail = false;
  bool any_indeterminate = false;
  for (auto& slot : slots) {
    if (slot->required) {
      any_fail |= slot->verdict == Verdict::Fail;
      any_indeterminate |= slot->verdict == Verdict::Indeterminate;
    }
    report.results.push_back(std::move(*slot));
  }
  report.overall = any_fail ? Verdict::Fail : any_indeterminate ? Verdict::Indeterminate : Verdict::Pass;
  return report;
}

}  // namespace ecsafe
