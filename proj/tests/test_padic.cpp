#include <doctest.h>

#include <random>

#include "ubern/errors.hpp"
#include "ubern/padic.hpp"

using namespace ubern;

namespace {

long brute_vp(std::uint64_t p, BigInt x) {
  if (x < 0) x = -x;
  long v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

std::uint64_t brute_legendre(std::uint64_t p, std::uint64_t a) {
  std::uint64_t total = 0;
  for (std::uint64_t q = p; q <= a; q *= p) total += a / q;
  return total;
}

BigInt brute_double_factorial(long a) {
  BigInt r = 1;
  for (long x = a; x > 1; x -= 2) r *= x;
  return r;
}

BigInt modulus(std::uint64_t p, unsigned k) { return pow(BigInt(static_cast<unsigned long>(p)), k); }

BigInt mod_pos(const BigInt& x, const BigInt& m) {
  BigInt r = x % m;
  if (r < 0) r += m;
  return r;
}

}  // namespace

TEST_CASE("valuations of integers and rationals") {
  CHECK(vp(3, make_rational(18)) == 2);
  CHECK(vp(2, make_rational(1)) == 0);
  CHECK(vp(5, make_rational(-5, 63)) == 1);
  CHECK(vp(3, make_rational(5, 18)) == -2);
  CHECK(vp(7, make_rational(0)).is_infinite());
  CHECK(vp(3, make_rational(0)) > Valuation(1000000));
  CHECK(vp(3, make_rational(6, 4)) == vp(3, make_rational(3, 2)));
  CHECK(vp(2, std::uint64_t{96}) == 5u);
  CHECK(Valuation::infinite().to_string() == "inf");
  CHECK_THROWS_AS(vp(4, make_rational(8)), PreconditionError);
  CHECK_THROWS(Valuation::infinite().value());

  std::mt19937_64 rng(7);
  for (int t = 0; t < 500; ++t) {
    const long a = long(rng() % 100000) + 1, b = long(rng() % 100000) + 1;
    for (std::uint64_t p : {2, 3, 5, 7})
      CHECK(vp(p, make_rational(a, b)).value() == brute_vp(p, a) - brute_vp(p, b));
  }
}

TEST_CASE("digit sums and factorial valuations") {
  CHECK(digit_sum(3, 0) == 0);
  CHECK(digit_sum(2, 10) == 2);
  CHECK(digit_sum(5, 24) == 8);
  CHECK(vp_factorial(2, 10) == 8);
  CHECK(vp_factorial(3, 0) == 0);
  CHECK(vp_factorial(3, 7) == 2);
  for (std::uint64_t p : {2, 3, 5, 7})
    for (std::uint64_t a = 0; a <= 5000; ++a) REQUIRE(vp_factorial(p, a) == brute_legendre(p, a));
  for (std::uint64_t p : {2, 3, 5})
    for (unsigned long a = 0; a <= 120; ++a) CHECK(long(vp_factorial(p, a)) == brute_vp(p, factorial(a)));
}

TEST_CASE("double factorials") {
  CHECK(double_factorial(7) == 105);
  CHECK(double_factorial(-1) == 1);
  CHECK(double_factorial(1) == 1);
  CHECK(double_factorial(9) == 945);
  CHECK(double_factorial(9) % 4 == 1);
  for (long a = 1; a < 400; a += 2) CHECK(double_factorial(a) == brute_double_factorial(a));
  CHECK_THROWS_AS(double_factorial(0), PreconditionError);
  CHECK_THROWS_AS(double_factorial(6), PreconditionError);
  CHECK_THROWS_AS(double_factorial(-3), PreconditionError);
}

TEST_CASE("factorial unit residues agree with exact factorials") {
  CHECK(factorial_unit_mod(3, 3, 1) == 2);
  CHECK(factorial_unit_mod(2, 0, 4) == 1);
  {
    const BigInt unit = factorial(10) / 25;
    CHECK(BigInt(static_cast<unsigned long>(factorial_unit_mod(5, 10, 1))) == unit % 5);
  }
  for (std::uint64_t p : {2, 3, 5})
    for (unsigned k = 1; k <= 4; ++k) {
      const BigInt m = modulus(p, k);
      for (unsigned long a = 0; a <= 300; ++a) {
        const BigInt f = factorial(a);
        const BigInt unit = f / modulus(p, unsigned(vp_factorial(p, a)));
        REQUIRE(BigInt(static_cast<unsigned long>(factorial_unit_mod(p, a, k))) == unit % m);
      }
    }
  // Larger moduli and arguments that need several block levels.
  for (std::uint64_t p : {2, 7, 11})
    for (unsigned long a : {1000UL, 2047UL, 2048UL, 2401UL, 5000UL}) {
      const unsigned k = 6;
      const BigInt unit = factorial(a) / modulus(p, unsigned(vp_factorial(p, a)));
      CHECK(BigInt(static_cast<unsigned long>(factorial_unit_mod(p, a, k))) == unit % modulus(p, k));
    }
}

TEST_CASE("g and f") {
  CHECK(g_func(1) == make_rational(1, 2));
  CHECK(g_func(2) == make_rational(-1, 4));
  CHECK(g_func(5) == make_rational(21, 2));
  CHECK_THROWS_AS(g_func(0), PreconditionError);

  CHECK(f_sum(0, 1) == 3);
  CHECK(f_sum(1, 1) == 5);
  CHECK(vp(2, f_sum(2, 4)) >= 4);
  CHECK(f_term(0, 1, 1) == 2);
  CHECK(f_term(0, 1, 2) == 1);
  for (unsigned long a = 0; a <= 20; ++a)
    for (unsigned long i = 1; i <= 6; ++i) {
      BigInt prod = 1;
      for (unsigned long t = 1; t <= 2 * i; ++t) prod *= a + t;
      BigInt sum = 0;
      for (unsigned long j = 1; j <= 2 * i; ++j) {
        CHECK(f_term(a, i, j) * (a + j) == prod);
        sum += prod / (a + j);
      }
      CHECK(f_sum(a, i) == sum);
    }
  CHECK_THROWS_AS(f_term(0, 1, 3), PreconditionError);
}

TEST_CASE("rational congruences and residues") {
  CHECK(congruent(make_rational(10), make_rational(1), 3, 2));
  CHECK_FALSE(congruent(make_rational(10), make_rational(1), 3, 3));
  CHECK(congruent(make_rational(1, 2), make_rational(5), 3, 2));  // 1/2 == 5 mod 9
  CHECK_FALSE(congruent(make_rational(1, 3), make_rational(0), 3, 0));
  CHECK(congruent(make_rational(7, 5), make_rational(7, 5), 5, 100));
  CHECK(residue_mod(make_rational(1, 2), 3, 2) == 5);
  CHECK(residue_mod(make_rational(-1), 2, 3) == 7);
  CHECK_THROWS_AS(residue_mod(make_rational(1, 3), 3, 1), PreconditionError);
}

TEST_CASE("p-adic scalars round-trip and track precision") {
  const PadicScalar a = PadicScalar::from_rational(make_rational(18), 3, 4);
  CHECK(a.valuation() == 2);
  CHECK(a.unit() == 2);
  CHECK(a.precision() == 4);
  CHECK(a.absolute_precision() == 6);

  const PadicScalar z = PadicScalar::from_rational_absolute(make_rational(27), 3, 3);
  CHECK(z.is_zero());
  CHECK(z.absolute_precision() == 3);
  CHECK_THROWS(PadicScalar(3, 0, 3, 2));

  std::mt19937_64 rng(11);
  for (std::uint64_t p : {2, 3, 5, 7})
    for (int t = 0; t < 300; ++t) {
      const long num = long(rng() % 20001) - 10000;
      const long den = long(rng() % 500) + 1;
      const Rational q = make_rational(num, den);
      const unsigned k = unsigned(rng() % 5) + 1;
      if (q == 0) continue;
      const PadicScalar s = PadicScalar::from_rational(q, p, k);
      const long v = vp(p, q).value();
      CHECK(s.valuation() == v);
      // Read-back agrees with q to k digits past the leading one.
      CHECK(congruent(s.to_rational(), q, p, v + long(k)));
      CHECK(congruent((-s).to_rational(), -q, p, v + long(k)));
      CHECK(congruent(s.inverse().to_rational(), 1 / q, p, -v + long(k)));
    }
}

TEST_CASE("p-adic arithmetic matches exact arithmetic") {
  std::mt19937_64 rng(13);
  for (std::uint64_t p : {2, 3, 5})
    for (int t = 0; t < 400; ++t) {
      const Rational x = make_rational(long(rng() % 2001) - 1000, long(rng() % 300) + 1);
      const Rational y = make_rational(long(rng() % 2001) - 1000, long(rng() % 300) + 1);
      if (x == 0 || y == 0) continue;
      const long absolute = 4;
      const PadicScalar px = PadicScalar::from_rational_absolute(x, p, absolute);
      const PadicScalar py = PadicScalar::from_rational_absolute(y, p, absolute);
      const PadicScalar sum = px + py;
      CHECK(sum.absolute_precision() == absolute);
      CHECK(congruent(sum.to_rational(), x + y, p, absolute));
      const PadicScalar diff = px - py;
      CHECK(congruent(diff.to_rational(), x - y, p, absolute));
      if (!px.is_zero() && !py.is_zero()) {
        const PadicScalar prod = px * py;
        CHECK(congruent(prod.to_rational(), x * y, p, prod.absolute_precision()));
      }
    }
}

TEST_CASE("modular helpers") {
  CHECK(modp::pow(3, 4, 7) == 4);
  CHECK(modp::inverse(3, 7) == 5);
  CHECK(modp::mul(UINT64_C(1) << 61, 4, (UINT64_C(1) << 62) - 57) == (UINT64_C(1) << 63) % ((UINT64_C(1) << 62) - 57));
  CHECK(prime_power(3, 4) == 81);
  CHECK_THROWS_AS(prime_power(3, 60), PreconditionError);
  CHECK(is_prime(2));
  CHECK(is_prime(97));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));
}
