#include <doctest.h>

#include <algorithm>

#include "ecsafe/error.hpp"
#include "ecsafe/numtheory.hpp"
#include "oracles.hpp"

using namespace ecsafe;

TEST_SUITE("numtheory") {

TEST_CASE("is_prime small values") {
  CHECK(nt::is_prime(2));
  CHECK_FALSE(nt::is_prime(9));
  CHECK_FALSE(nt::is_prime(1));
  CHECK_FALSE(nt::is_prime(0));
  CHECK(nt::is_prime(Integer(2147483647)));  // 2^31 - 1
  for (std::uint64_t n = 0; n < 5000; ++n) CHECK(nt::is_prime(Integer(static_cast<unsigned long>(n))) == oracle::is_prime(n));
}

TEST_CASE("is_prime agrees with trial division above the table") {
  for (std::uint64_t n = 65'521; n < 70'000; ++n) REQUIRE(nt::is_prime(from_u64(n)) == oracle::is_prime(n));
  // Carmichael numbers and a strong pseudoprime to several small bases.
  for (unsigned long n : {561ul, 1105ul, 1729ul, 2465ul, 3215031751ul}) CHECK_FALSE(nt::is_prime(Integer(n)));
  CHECK(nt::is_prime(from_hex("ffffffff00000001000000000000000000000000ffffffffffffffffffffffff")));
  CHECK_FALSE(nt::is_prime(from_hex("ffffffff00000001000000000000000000000000fffffffffffffffffffffffd")));
}

TEST_CASE("gen_prime shapes") {
  Rng rng(1);
  CHECK(nt::gen_prime(nt::Mersenne{5}, rng).p == 31);
  CHECK(nt::gen_prime(nt::Mersenne{127}, rng).p == pow2(127) - 1);
  CHECK_THROWS_AS(nt::gen_prime(nt::Mersenne{4}, rng), Error);
  const auto c = nt::gen_prime(nt::Crandall{32, 5}, rng);
  CHECK(c.p == Integer(4294967291ul));
  CHECK(c.p == pow2(32) - 5);
  CHECK(c.three_mod_four == (c.p % 4 == 3));
  CHECK(oracle::is_prime(4294967291ul));
  try {
    nt::gen_prime(nt::Mersenne{4}, rng);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ShapeExhausted);
  }
  for (unsigned bits : {8u, 17u, 64u, 128u}) {
    const auto r = nt::gen_prime(nt::RandomBits{bits}, rng);
    CHECK(bit_length(r.p) == bits);
    CHECK(nt::is_prime(r.p));
    CHECK(r.three_mod_four == (r.p % 4 == 3));
  }
  CHECK_THROWS(nt::gen_prime(nt::RandomBits{7}, rng));
  CHECK_THROWS(nt::gen_prime(nt::Crandall{32, 4}, rng));  // gamma must be odd
}

TEST_CASE("gen_prime Montgomery-friendly form") {
  Rng rng(2);
  // Scan small parameters; every success must match the form exactly.
  int found = 0;
  for (unsigned beta = 8; beta < 20; ++beta) {
    for (unsigned gamma = 1; gamma < 40; gamma += 2) {
      try {
        const auto r = nt::gen_prime(nt::MontgomeryFriendly{4, beta, gamma}, rng);
        CHECK(r.p == pow2(4) * (pow2(beta) - gamma) - 1);
        CHECK(nt::is_prime(r.p));
        ++found;
      } catch (const Error& e) {
        CHECK(e.code() == Errc::ShapeExhausted);
      }
    }
  }
  CHECK(found > 0);
}

TEST_CASE("gen_prime is reproducible from the seed") {
  Rng a(77), b(77);
  CHECK(nt::gen_prime(nt::RandomBits{96}, a).p == nt::gen_prime(nt::RandomBits{96}, b).p);
}

TEST_CASE("legendre examples and exhaustive agreement") {
  CHECK(nt::legendre(4, 7) == 1);
  CHECK(nt::legendre(0, 11) == 0);
  CHECK(nt::legendre(3, 5) == -1);
  for (std::uint64_t p : oracle::primes_below(200)) {
    if (p == 2) continue;
    for (std::uint64_t c = 0; c < p; ++c) REQUIRE(nt::legendre(from_u64(c), from_u64(p)) == oracle::legendre(c, p));
  }
}

TEST_CASE("sqrt_mod examples") {
  CHECK(nt::sqrt_mod(2, 7) == Integer(4));
  CHECK(nt::sqrt_mod(0, 13) == Integer(0));
  CHECK_FALSE(nt::sqrt_mod(3, 5).has_value());
}

TEST_CASE("sqrt_mod and Tonelli-Shanks against exhaustive roots") {
  for (std::uint64_t p : oracle::primes_below(600)) {
    if (p == 2) continue;
    const Integer P = from_u64(p);
    for (std::uint64_t c = 0; c < p; ++c) {
      const auto want = oracle::roots(c, p);
      const auto got = nt::sqrt_mod(from_u64(c), P);
      const auto ts = nt::sqrt_mod_tonelli_shanks(from_u64(c), P);
      REQUIRE(got.has_value() == !want.empty());
      REQUIRE(ts.has_value() == !want.empty());
      if (!got) continue;
      const std::uint64_t r = to_u64(*got);
      REQUIRE(std::find(want.begin(), want.end(), r) != want.end());
      REQUIRE(r % 2 == 0);
      REQUIRE(*ts == *got);
      if (c != 0) REQUIRE(std::find(want.begin(), want.end(), p - r) != want.end());
    }
  }
}

TEST_CASE("cornacchia examples") {
  CHECK(nt::cornacchia(11, 7) == std::pair{Integer(4), Integer(2)});
  CHECK(nt::cornacchia(13, 3) == std::pair{Integer(7), Integer(1)});
  CHECK_FALSE(nt::cornacchia(5, 7).has_value());
  CHECK(nt::cornacchia(5, 11) == std::pair{Integer(3), Integer(1)});
}

TEST_CASE("cornacchia agrees with exhaustive search") {
  for (std::uint64_t p : oracle::primes_below(3000)) {
    if (p < 5) continue;
    for (std::uint64_t D : {3ull, 4ull, 7ull, 8ull, 11ull, 15ull, 19ull, 20ull, 23ull, 43ull, 67ull, 163ull}) {
      const auto got = nt::cornacchia(from_u64(p), D);
      REQUIRE(got.has_value() == oracle::representable(p, D));
      if (!got) continue;
      const Integer& t = got->first;
      const Integer& s = got->second;
      REQUIRE(t > 0);
      REQUIRE(s > 0);
      REQUIRE(4 * from_u64(p) - t * t - from_u64(D) * s * s == 0);
    }
  }
}

TEST_CASE("embedding_degree") {
  CHECK(nt::embedding_degree(7, 13, 20) == std::uint64_t{2});
  CHECK(nt::embedding_degree(5, 11, 20) == std::uint64_t{1});
  // ord_101(2) = 100.
  CHECK_FALSE(nt::embedding_degree(101, 2, 99).has_value());
  CHECK(nt::embedding_degree(101, 2, 100) == std::uint64_t{100});
  for (std::uint64_t n : oracle::primes_below(120))
    for (std::uint64_t p : oracle::primes_below(120)) {
      if (n == p) continue;
      const auto got = nt::embedding_degree(from_u64(n), from_u64(p), 20);
      const auto want = oracle::embedding_degree(n, p, 20);
      REQUIRE(got == want);
      if (got) {
        REQUIRE(oracle::powmod(p, *got, n) == 1);
        for (std::uint64_t j = 1; j < *got; ++j) REQUIRE(oracle::powmod(p, j, n) != 1);
      }
    }
}

TEST_CASE("squarefree_part") {
  auto sf = nt::squarefree_part(12);
  CHECK(sf.d == 3);
  CHECK(sf.complete);
  sf = nt::squarefree_part(7);
  CHECK(sf.d == 7);
  CHECK(sf.complete);
  sf = nt::squarefree_part(-12);
  CHECK(sf.d == 3);

  for (std::uint64_t m = 1; m < 3000; ++m) {
    const auto r = nt::squarefree_part(from_u64(m), 10);
    if (r.complete) REQUIRE(r.d == oracle::squarefree_part(m));
  }
  for (std::uint64_t m = 1; m < 3000; ++m) {
    const auto r = nt::squarefree_part(from_u64(m), 1000);
    REQUIRE(r.complete);
    REQUIRE(r.d == oracle::squarefree_part(m));
  }
}

TEST_CASE("squarefree_part budget exhaustion") {
  Rng rng(5);
  const Integer q1 = nt::gen_prime(nt::RandomBits{80}, rng).p;
  const Integer q2 = nt::gen_prime(nt::RandomBits{80}, rng).p;
  // 5 q1 q2^2 hides a square behind a composite cofactor.
  const auto hidden = nt::squarefree_part(5 * q1 * q2 * q2, 100);
  CHECK_FALSE(hidden.complete);
  CHECK(hidden.d == 5 * q1 * q2 * q2);
  // (q1 q2)^2 * 5: the perfect-square check finishes the job.
  const auto square = nt::squarefree_part(q1 * q1 * q2 * q2 * 5, 100);
  CHECK(square.complete);
  CHECK(square.d == 5);
  const auto prime_cofactor = nt::squarefree_part(4 * q1, 100);
  CHECK(prime_cofactor.complete);
  CHECK(prime_cofactor.d == q1);
}

TEST_CASE("factor_trial and near_prime_split") {
  const auto f = nt::factor_trial(360, 100);
  CHECK(f.complete());
  CHECK(f.product() == 360);
  REQUIRE(f.factors.size() == 3);
  CHECK(f.factors[0] == nt::PrimePower{2, 3});
  CHECK(f.factors[2] == nt::PrimePower{5, 1});
  CHECK(nt::near_prime_split(4 * 1009, 4) == std::pair{Integer(4), Integer(1009)});
  CHECK(nt::near_prime_split(1009, 4) == std::pair{Integer(1), Integer(1009)});
  CHECK_FALSE(nt::near_prime_split(5 * 1009, 4).has_value());
}

TEST_CASE("crt") {
  CHECK(nt::crt({2, 3, 2}, {3, 5, 7}) == 23);
  CHECK(nt::crt({5}, {9}) == 5);
}

}

TEST_SUITE("numtheory") {

TEST_CASE("primes above the trial limit survive a large sieve") {
  const nt::Factorization f = nt::factor_trial(66643, std::uint64_t{1} << 22);
  CHECK(f.complete());
  REQUIRE(f.factors.size() == 1);
  CHECK(f.factors[0].prime == 66643);
  for (std::uint64_t p : oracle::primes_below(1 << 17))
    if (p > 1000) REQUIRE(nt::is_prime(from_u64(p)));
}

}
