#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "ecsafe/curve.hpp"
#include "ecsafe/error.hpp"
#include "ecsafe/order.hpp"
#include "oracles.hpp"

using namespace ecsafe;

namespace {

std::vector<Point> all_points(const Curve& E) {
  std::vector<Point> out{Point::infinity()};
  for (auto [x, y] : oracle::affine_points(to_u64(E.p()), to_u64(E.a()), to_u64(E.b())))
    out.push_back(Point::affine(from_u64(x), from_u64(y)));
  return out;
}

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_SUITE("curve") {

TEST_CASE("construction") {
  CHECK_NOTHROW(Curve::make(5, 1, 1));
  CHECK(code_of([] { Curve::make(7, 0, 0); }) == Errc::Singular);
  CHECK(code_of([] { Curve::make(9, 1, 1); }) == Errc::NotPrime);
  CHECK(code_of([] { Curve::make(3, 1, 1); }) == Errc::NotPrime);

  // Every pair over F_5 that the discriminant test rejects.
  int singular = 0;
  for (unsigned a = 0; a < 5; ++a)
    for (unsigned b = 0; b < 5; ++b) {
      const bool zero = (4 * a * a * a + 27 * b * b) % 5 == 0;
      if (zero) {
        ++singular;
        CHECK(code_of([&] { Curve::make(5, a, b); }) == Errc::Singular);
      } else {
        CHECK_NOTHROW(Curve::make(5, a, b));
      }
    }
  CHECK(singular > 0);
}

TEST_CASE("group law on E(5,1,1)") {
  const Curve E = Curve::make(5, 1, 1);
  const Point P = Point::affine(0, 1);
  CHECK(E.add(P, Point::infinity()) == P);
  CHECK(E.add(P, Point::affine(0, 4)).is_infinity());
  CHECK(E.dbl(P) == Point::affine(4, 2));
  CHECK(E.add(P, P) == Point::affine(4, 2));
  CHECK(E.scalar_mul(0, P).is_infinity());
  CHECK(E.scalar_mul(5, P) == Point::affine(3, 1));
  CHECK(E.scalar_mul(9, P).is_infinity());
  CHECK(E.scalar_mul(3, P) == Point::affine(2, 1));
  CHECK_THROWS(E.scalar_mul(-1, P));
}

TEST_CASE("group axioms exhaustively on small curves") {
  for (auto [p, a, b] : {std::tuple{5u, 1u, 1u}, {11u, 5u, 7u}, {13u, 2u, 3u}, {23u, 1u, 1u}, {31u, 0u, 7u}}) {
    const Curve E = Curve::make(p, a, b);
    const auto pts = all_points(E);
    for (const Point& P : pts) {
      REQUIRE(E.add(P, Point::infinity()) == P);
      REQUIRE(E.add(P, E.negate(P)).is_infinity());
      for (const Point& Q : pts) {
        const Point S = E.add(P, Q);
        REQUIRE(E.contains(S));
        REQUIRE(S == E.add(Q, P));
      }
    }
    for (std::size_t i = 0; i < pts.size(); i += 3)
      for (std::size_t j = 0; j < pts.size(); j += 2)
        for (const Point& R : pts) REQUIRE(E.add(E.add(pts[i], pts[j]), R) == E.add(pts[i], E.add(pts[j], R)));
  }
}

TEST_CASE("associativity on random triples") {
  Rng rng(11);
  const Curve E = Curve::make(251, 17, 42);
  for (int i = 0; i < 10'000; ++i) {
    const Point P = E.random_point(rng), Q = E.random_point(rng), R = E.random_point(rng);
    REQUIRE(E.add(E.add(P, Q), R) == E.add(P, E.add(Q, R)));
  }
}

TEST_CASE("scalar_mul matches repeated addition") {
  const Curve E = Curve::make(101, 3, 9);
  const auto pts = all_points(E);
  const std::uint64_t N = pts.size();
  for (std::size_t k = 0; k < pts.size(); k += 7) {
    Point acc;
    for (std::uint64_t l = 0; l <= N; ++l) {
      REQUIRE(E.scalar_mul(from_u64(l), pts[k]) == acc);
      acc = E.add(acc, pts[k]);
    }
  }
}

TEST_CASE("random_point is on the curve, affine and reproducible") {
  const Curve E = Curve::make(5, 1, 1);
  const auto pts = all_points(E);
  Rng rng(3);
  std::set<std::pair<long, long>> seen;
  for (int i = 0; i < 400; ++i) {
    const Point P = E.random_point(rng);
    REQUIRE_FALSE(P.is_infinity());
    REQUIRE(std::find(pts.begin(), pts.end(), P) != pts.end());
    seen.emplace(P.x().get_si(), P.y().get_si());
  }
  CHECK(seen.size() == 8);
  Rng a(9), b(9);
  CHECK(E.random_point(a) == E.random_point(b));
}

TEST_CASE("random_point is uniform including y = 0 points") {
  // y^2 = x^3 + x over F_13 has (0, 0) among its points.
  const Curve E = Curve::make(13, 1, 0);
  const auto pts = all_points(E);
  Rng rng(21);
  std::map<std::pair<long, long>, int> hist;
  const int draws = 40'000;
  for (int i = 0; i < draws; ++i) {
    const Point P = E.random_point(rng);
    ++hist[{P.x().get_si(), P.y().get_si()}];
  }
  const double expected = static_cast<double>(draws) / static_cast<double>(pts.size() - 1);
  for (const auto& [pt, count] : hist) CHECK(std::abs(count - expected) < 0.15 * expected);
}

TEST_CASE("compression") {
  const Curve E = Curve::make(5, 1, 1);
  const auto c = compress(Point::affine(0, 1));
  CHECK(c == CompressedPoint{0, true});
  CHECK(E.decompress(c) == Point::affine(0, 1));
  CHECK(compress(Point::affine(4, 2)) == CompressedPoint{4, false});
  CHECK(E.decompress({4, false}) == Point::affine(4, 2));
  CHECK(code_of([&] { E.decompress({1, false}); }) == Errc::NotOnCurve);

  for (auto [p, a, b] : {std::tuple{5u, 1u, 1u}, {13u, 1u, 0u}, {103u, 4u, 9u}, {109u, 0u, 5u}}) {
    const Curve C = Curve::make(p, a, b);
    for (const Point& P : all_points(C))
      if (!P.is_infinity()) REQUIRE(C.decompress(compress(P)) == P);
  }
}

TEST_CASE("twist") {
  const Curve E = Curve::make(5, 1, 1);
  const Curve Ec = E.twist(2);
  CHECK(Ec == Curve::make(5, 4, 3));
  CHECK(oracle::count_points(5, 4, 3) == 3);
  CHECK(code_of([&] { E.twist(4); }) == Errc::TrivialTwist);
  CHECK(code_of([&] { E.twist(0); }) == Errc::InvalidArgument);
  const Curve same = E.twist(4, true);
  CHECK(oracle::count_points(5, to_u64(same.a()), to_u64(same.b())) == 9);

  Rng rng(4);
  for (std::uint64_t p : oracle::primes_below(1 << 12)) {
    if (p < 5 || p % 37 != 1) continue;
    const Curve C = Curve::make(from_u64(p), 2, 3);
    const Integer c = C.random_non_square(rng);
    const Curve T = C.twist(c);
    REQUIRE(oracle::count_points(p, 2, 3) + oracle::count_points(p, to_u64(T.a()), to_u64(T.b())) == 2 * p + 2);
  }
}

TEST_CASE("point_order") {
  const Curve E = Curve::make(5, 1, 1);
  const nt::Factorization nine{{{3, 2}}, 1};
  CHECK(point_order(E, Point::affine(0, 1), 9, nine) == 9);
  CHECK(point_order(E, Point::infinity(), 9, nine) == 1);
  CHECK(code_of([&] { point_order(E, Point::affine(0, 1), 10, nt::Factorization{{{2, 1}, {5, 1}}, 1}); }) ==
        Errc::BadOrder);
  CHECK(code_of([&] { point_order(E, Point::affine(0, 1), 9, nt::Factorization{{{3, 1}}, 3}); }) ==
        Errc::InvalidArgument);

  // Orders of every point on E(101, 3, 9), checked by repeated addition.
  const Curve C = Curve::make(101, 3, 9);
  const auto pts = all_points(C);
  const Integer N = from_u64(pts.size());
  const auto f = nt::factor_trial(N, 1000);
  for (const Point& P : pts) {
    std::uint64_t k = 1;
    for (Point R = P; !R.is_infinity(); R = C.add(R, P)) ++k;
    REQUIRE(point_order(C, P, N, f) == from_u64(P.is_infinity() ? 1 : k));
  }
}

}
