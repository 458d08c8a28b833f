#pragma once

#include <cstdint>
#include <optional>

#include "ecsafe/integer.hpp"
#include "ecsafe/numtheory.hpp"
#include "ecsafe/rng.hpp"

namespace ecsafe {

/// Either the point at infinity or an affine point (x, y).
class Point {
 public:
  Point() = default;  // infinity
  static Point infinity() { return Point(); }
  static Point affine(Integer x, Integer y) { return Point(std::move(x), std::move(y)); }

  bool is_infinity() const { return infinity_; }
  const Integer& x() const { return x_; }
  const Integer& y() const { return y_; }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.infinity_ || b.infinity_) return a.infinity_ == b.infinity_;
    return a.x_ == b.x_ && a.y_ == b.y_;
  }

 private:
  Point(Integer x, Integer y) : infinity_(false), x_(std::move(x)), y_(std::move(y)) {}

  bool infinity_ = true;
  Integer x_;
  Integer y_;
};

/// Compressed affine point: abscissa plus the least-significant bit of y.
struct CompressedPoint {
  Integer x;
  bool y_odd;
  friend bool operator==(const CompressedPoint&, const CompressedPoint&) = default;
};

/// Curve order data: N = #E, trace t = p + 1 - N, base point order n, cofactor h = N / n.
struct OrderInfo {
  Integer N;
  Integer t;
  Integer n;
  Integer h;
  friend bool operator==(const OrderInfo&, const OrderInfo&) = default;
};

/// E: y^2 = x^3 + ax + b over F_p, p > 3 prime, 4a^3 + 27b^2 != 0.
///
/// Arithmetic is affine with one field inversion per addition; inputs are
/// assumed to lie on the curve.
class Curve {
 public:
  /// Validating constructor: NotPrime for composite p or p <= 3, Singular when
  /// the discriminant vanishes. a and b are reduced mod p.
  static Curve make(const Integer& p, const Integer& a, const Integer& b);

  /// Skips the primality test on p (caller already established it); still
  /// rejects singular coefficients.
  static Curve with_prime(const Integer& p, const Integer& a, const Integer& b);

  const Integer& p() const { return p_; }
  const Integer& a() const { return a_; }
  const Integer& b() const { return b_; }

  /// x^3 + ax + b mod p.
  Integer rhs(const Integer& x) const;
  bool contains(const Point& P) const;

  Point negate(const Point& P) const;
  Point add(const Point& P, const Point& Q) const;
  Point dbl(const Point& P) const;

  /// Double-and-add. Negative scalars are rejected. When `ops` is non-null it
  /// is incremented once per group addition or doubling performed.
  Point scalar_mul(const Integer& l, const Point& P, std::uint64_t* ops = nullptr) const;

  /// Uniform affine point.
  Point random_point(Rng& rng) const;

  /// Point with abscissa x and the requested y parity; NotOnCurve when
  /// x^3 + ax + b is a non-residue (or y = 0 with an odd parity bit).
  Point decompress(const CompressedPoint& c) const;

  /// Quadratic twist y^2 = x^3 + a c^2 x + b c^3. Throws TrivialTwist when c is
  /// a nonzero square unless `allow_square` is set.
  Curve twist(const Integer& c, bool allow_square = false) const;

  /// Random non-square in F_p.
  Integer random_non_square(Rng& rng) const;

  friend bool operator==(const Curve&, const Curve&) = default;

 private:
  Curve(Integer p, Integer a, Integer b) : p_(std::move(p)), a_(std::move(a)), b_(std::move(b)) {}

  Integer inverse(const Integer& v) const;

  Integer p_;
  Integer a_;
  Integer b_;
};

/// InvalidArgument for the point at infinity.
CompressedPoint compress(const Point& P);

/// Exact order of P given the group order N and its complete factorization.
/// BadOrder when N * P != infinity.
Integer point_order(const Curve& E, const Point& P, const Integer& N, const nt::Factorization& factors);

}  // namespace ecsafe
