#include "ecsafe/integer.hpp"

#include <cctype>

#include "ecsafe/error.hpp"
#include "ecsafe/rng.hpp"

namespace ecsafe {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotPrime: return "NotPrime";
    case Errc::Singular: return "Singular";
    case Errc::ShapeExhausted: return "ShapeExhausted";
    case Errc::TooLarge: return "TooLarge";
    case Errc::Ambiguous: return "Ambiguous";
    case Errc::HasseViolation: return "HasseViolation";
    case Errc::TrivialTwist: return "TrivialTwist";
    case Errc::NotOnCurve: return "NotOnCurve";
    case Errc::BadOrder: return "BadOrder";
    case Errc::Unsupported: return "Unsupported";
    case Errc::RetryBudgetExhausted: return "RetryBudgetExhausted";
    case Errc::InconsistentSubject: return "InconsistentSubject";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::OutOfSubgroup: return "OutOfSubgroup";
    case Errc::DegenerateCollision: return "DegenerateCollision";
    case Errc::NotInInterval: return "NotInInterval";
    case Errc::BadFactorization: return "BadFactorization";
    case Errc::ParseError: return "ParseError";
    case Errc::ConsistencyError: return "ConsistencyError";
    case Errc::UnknownCurve: return "UnknownCurve";
  }
  return "Unknown";
}

std::string to_hex(const Integer& v) { return v.get_str(16); }

namespace {

Integer parse_digits(std::string_view text, int base, bool (*valid)(int)) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  if (body.empty()) throw Error(Errc::ParseError, "empty integer literal");
  for (char c : body) {
    if (!valid(static_cast<unsigned char>(c)))
      throw Error(Errc::ParseError, "bad digit in '" + std::string(text) + "'");
  }
  Integer r(std::string(body), base);
  return negative ? Integer(-r) : r;
}

}  // namespace

Integer from_hex(std::string_view text) {
  return parse_digits(text, 16, [](int c) { return std::isxdigit(c) != 0; });
}

Integer from_dec(std::string_view text) {
  return parse_digits(text, 10, [](int c) { return std::isdigit(c) != 0; });
}

std::size_t bit_length(const Integer& v) {
  if (v == 0) return 0;
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

Integer isqrt(const Integer& v) {
  if (v < 0) throw Error(Errc::InvalidArgument, "isqrt of negative value");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

bool is_perfect_square(const Integer& v) {
  return v >= 0 && mpz_perfect_square_p(v.get_mpz_t()) != 0;
}

Integer mod(const Integer& v, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  return r;
}

std::uint64_t to_u64(const Integer& v) {
  if (v < 0 || bit_length(v) > 64) throw Error(Errc::TooLarge, "value does not fit in 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

Integer from_u64(std::uint64_t v) {
  Integer r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return r;
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng Rng::derive(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  Rng r(0);
  r.engine_.seed(seq);
  return r;
}

std::uint64_t Rng::entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw Error(Errc::InvalidArgument, "empty range");
  // Rejection sampling keeps the output independent of the standard library's
  // distribution implementation.
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  for (;;) {
    std::uint64_t v = engine_();
    if (v < limit) return v % bound;
  }
}

Integer Rng::below(const Integer& bound) {
  if (bound <= 0) throw Error(Errc::InvalidArgument, "empty range");
  if (bound == 1) return 0;
  const std::size_t bits = bit_length(bound - 1);
  const std::size_t words = (bits + 63) / 64;
  for (;;) {
    Integer v = 0;
    for (std::size_t i = 0; i < words; ++i) {
      v <<= 64;
      v += from_u64(engine_());
    }
    v >>= static_cast<mp_bitcnt_t>(words * 64 - bits);
    if (v < bound) return v;
  }
}

Integer Rng::exact_bits(unsigned bits) {
  if (bits == 0) throw Error(Errc::InvalidArgument, "zero-width integer");
  Integer top = pow2(bits - 1);
  return top + below(top);
}

}  // namespace ecsafe
