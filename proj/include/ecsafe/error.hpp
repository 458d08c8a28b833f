#pragma once

#include <stdexcept>
#include <string>

namespace ecsafe {

/// Failure categories raised by the toolkit. Outcomes that are part of a normal
/// search (no square root, no Cornacchia solution, CM restart) are returned as
/// empty optionals instead.
enum class Errc {
  InvalidArgument,
  NotPrime,
  Singular,
  ShapeExhausted,
  TooLarge,
  Ambiguous,
  HasseViolation,
  TrivialTwist,
  NotOnCurve,
  BadOrder,
  Unsupported,
  RetryBudgetExhausted,
  InconsistentSubject,
  CapExceeded,
  OutOfSubgroup,
  DegenerateCollision,
  NotInInterval,
  BadFactorization,
  ParseError,
  ConsistencyError,
  UnknownCurve,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ecsafe
