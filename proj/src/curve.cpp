#include "ecsafe/curve.hpp"

#include "ecsafe/error.hpp"

namespace ecsafe {

Curve Curve::make(const Integer& p, const Integer& a, const Integer& b) {
  if (p <= 3 || !nt::is_prime(p)) throw Error(Errc::NotPrime, "field characteristic must be a prime > 3");
  return with_prime(p, a, b);
}

Curve Curve::with_prime(const Integer& p, const Integer& a, const Integer& b) {
  if (p <= 3) throw Error(Errc::NotPrime, "field characteristic must be a prime > 3");
  Integer ar = mod(a, p);
  Integer br = mod(b, p);
  if (mod(4 * ar * ar * ar + 27 * br * br, p) == 0)
    throw Error(Errc::Singular, "4a^3 + 27b^2 = 0 mod p");
  return Curve(p, std::move(ar), std::move(br));
}

Integer Curve::rhs(const Integer& x) const { return mod((x * x + a_) * x + b_, p_); }

bool Curve::contains(const Point& P) const {
  if (P.is_infinity()) return true;
  if (P.x() < 0 || P.x() >= p_ || P.y() < 0 || P.y() >= p_) return false;
  return mod(P.y() * P.y(), p_) == rhs(P.x());
}

Integer Curve::inverse(const Integer& v) const {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), v.get_mpz_t(), p_.get_mpz_t()) == 0)
    throw Error(Errc::InvalidArgument, "inverse of zero");
  return r;
}

Point Curve::negate(const Point& P) const {
  if (P.is_infinity() || P.y() == 0) return P;
  return Point::affine(P.x(), p_ - P.y());
}

Point Curve::dbl(const Point& P) const {
  if (P.is_infinity() || P.y() == 0) return Point::infinity();
  const Integer& x = P.x();
  const Integer& y = P.y();
  const Integer slope = mod((3 * x * x + a_) * inverse(mod(2 * y, p_)), p_);
  Integer x3 = mod(slope * slope - 2 * x, p_);
  Integer y3 = mod(slope * (x - x3) - y, p_);
  return Point::affine(std::move(x3), std::move(y3));
}

Point Curve::add(const Point& P, const Point& Q) const {
  if (P.is_infinity()) return Q;
  if (Q.is_infinity()) return P;
  if (P.x() == Q.x()) {
    if (P.y() == Q.y()) return dbl(P);
    return Point::infinity();  // Q = -P
  }
  const Integer slope = mod((Q.y() - P.y()) * inverse(mod(Q.x() - P.x(), p_)), p_);
  Integer x3 = mod(slope * slope - P.x() - Q.x(), p_);
  Integer y3 = mod(slope * (P.x() - x3) - P.y(), p_);
  return Point::affine(std::move(x3), std::move(y3));
}

Point Curve::scalar_mul(const Integer& l, const Point& P, std::uint64_t* ops) const {
  if (l < 0) throw Error(Errc::InvalidArgument, "negative scalar");
  Point acc;
  if (l == 0 || P.is_infinity()) return acc;
  std::uint64_t count = 0;
  for (std::size_t i = bit_length(l); i-- > 0;) {
    if (!acc.is_infinity()) {
      acc = dbl(acc);
      ++count;
    }
    if (mpz_tstbit(l.get_mpz_t(), i)) {
      if (acc.is_infinity()) {
        acc = P;
      } else {
        acc = add(acc, P);
        ++count;
      }
    }
  }
  if (ops) *ops += count;
  return acc;
}

Point Curve::random_point(Rng& rng) const {
  for (;;) {
    Integer x = rng.below(p_);
    const Integer v = rhs(x);
    if (v == 0) {
      // One point at this x instead of two: accept half the time to stay uniform.
      if (rng.bit()) return Point::affine(std::move(x), Integer(0));
      continue;
    }
    if (nt::legendre(v, p_) != 1) continue;
    Integer y = *nt::sqrt_mod(v, p_);
    if (rng.bit()) y = p_ - y;
    return Point::affine(std::move(x), std::move(y));
  }
}

CompressedPoint compress(const Point& P) {
  if (P.is_infinity()) throw Error(Errc::InvalidArgument, "cannot compress the point at infinity");
  return {P.x(), mpz_odd_p(P.y().get_mpz_t()) != 0};
}

Point Curve::decompress(const CompressedPoint& c) const {
  if (c.x < 0 || c.x >= p_) throw Error(Errc::InvalidArgument, "abscissa out of range");
  auto y = nt::sqrt_mod(rhs(c.x), p_);
  if (!y) throw Error(Errc::NotOnCurve, "x^3 + ax + b is not a square");
  const bool odd = mpz_odd_p(y->get_mpz_t()) != 0;
  if (odd != c.y_odd) {
    if (*y == 0) throw Error(Errc::NotOnCurve, "y = 0 has no odd representative");
    *y = p_ - *y;
  }
  return Point::affine(c.x, std::move(*y));
}

Curve Curve::twist(const Integer& c, bool allow_square) const {
  const Integer cr = mod(c, p_);
  if (cr == 0) throw Error(Errc::InvalidArgument, "twist coefficient must be nonzero");
  if (!allow_square && nt::legendre(cr, p_) == 1)
    throw Error(Errc::TrivialTwist, "twist by a square is isomorphic to the curve");
  const Integer c2 = cr * cr % p_;
  return Curve(p_, a_ * c2 % p_, b_ * c2 % p_ * cr % p_);
}

Integer Curve::random_non_square(Rng& rng) const {
  for (;;) {
    Integer c = 1 + rng.below(p_ - 1);
    if (nt::legendre(c, p_) == -1) return c;
  }
}

Integer point_order(const Curve& E, const Point& P, const Integer& N, const nt::Factorization& factors) {
  if (!factors.complete() || factors.product() != N)
    throw Error(Errc::InvalidArgument, "point_order needs the complete factorization of N");
  if (!E.scalar_mul(N, P).is_infinity()) throw Error(Errc::BadOrder, "N * P is not the identity");
  Integer n = N;
  for (const auto& f : factors.factors) {
    for (unsigned i = 0; i < f.exponent; ++i) {
      const Integer reduced = n / f.prime;
      if (!E.scalar_mul(reduced, P).is_infinity()) break;
      n = reduced;
    }
  }
  return n;
}

}  // namespace ecsafe
