#include "ubern/padic.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "ubern/errors.hpp"

namespace ubern {

namespace {

// Absolute precision of the exact zero.
constexpr long kExact = std::numeric_limits<long>::max() / 4;

long clamp_precision(long a) { return std::min(a, kExact); }

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

void require_prime(std::uint64_t p, const char* what) {
  if (!is_prime(p)) throw PreconditionError(std::string(what) + ": " + std::to_string(p) + " is not prime");
}

long Valuation::value() const {
  if (!value_) throw std::logic_error("valuation is +infinity");
  return *value_;
}

std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() <=> b.is_infinite();
  return *a.value_ <=> *b.value_;
}

unsigned vp(std::uint64_t p, std::uint64_t a) {
  if (a == 0) throw std::invalid_argument("vp of machine integer 0");
  unsigned v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

Valuation vp(std::uint64_t p, const BigInt& a) {
  require_prime(p, "vp");
  if (a == 0) return Valuation::infinite();
  BigInt prime(static_cast<unsigned long>(p));
  BigInt stripped;
  return Valuation(static_cast<long>(mpz_remove(stripped.get_mpz_t(), a.get_mpz_t(), prime.get_mpz_t())));
}

Valuation vp(std::uint64_t p, const Rational& q) {
  if (q == 0) {
    require_prime(p, "vp");
    return Valuation::infinite();
  }
  Rational reduced = q;
  reduced.canonicalize();
  return Valuation(vp(p, reduced.get_num()).value() - vp(p, reduced.get_den()).value());
}

std::uint64_t digit_sum(std::uint64_t p, std::uint64_t a) {
  std::uint64_t s = 0;
  for (; a; a /= p) s += a % p;
  return s;
}

std::uint64_t vp_factorial(std::uint64_t p, std::uint64_t a) { return (a - digit_sum(p, a)) / (p - 1); }

BigInt double_factorial(long a) {
  if (a < -1 || a % 2 == 0) throw PreconditionError("double_factorial: need odd a >= -1, got " + std::to_string(a));
  BigInt r;
  if (a <= 0) return 1;
  mpz_2fac_ui(r.get_mpz_t(), static_cast<unsigned long>(a));
  return r;
}

std::uint64_t prime_power(std::uint64_t p, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (r > (std::uint64_t(1) << 62) / p)
      throw PreconditionError("prime power " + std::to_string(p) + "^" + std::to_string(k) + " exceeds 62 bits");
    r *= p;
  }
  return r;
}

namespace modp {

std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  for (; e; e >>= 1) {
    if (e & 1) r = mul(r, a, m);
    a = mul(a, a, m);
  }
  return r;
}

std::uint64_t inverse(std::uint64_t a, std::uint64_t m) {
  __int128 old_r = static_cast<__int128>(a % m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    std::swap(old_r, r);
    r -= q * old_r;
    std::swap(old_s, s);
    s -= q * old_s;
  }
  if (old_r != 1) throw std::invalid_argument("modp::inverse: not a unit");
  __int128 x = old_s % static_cast<__int128>(m);
  if (x < 0) x += m;
  return static_cast<std::uint64_t>(x);
}

}  // namespace modp

std::uint64_t factorial_unit_mod(std::uint64_t p, std::uint64_t a, unsigned k) {
  require_prime(p, "factorial_unit_mod");
  const std::uint64_t modulus = prime_power(p, k);
  if (modulus == 1) return 0;
  // Product of all units below p^k: -1, except +1 for 2^k with k >= 3.
  const std::uint64_t full_block = (p == 2 && k >= 3) ? 1 : modulus - 1;
  std::uint64_t result = 1;
  for (; a > 1; a /= p) {
    result = modp::mul(result, modp::pow(full_block, a / modulus, modulus), modulus);
    const std::uint64_t tail = a % modulus;
    for (std::uint64_t i = 2; i <= tail; ++i)
      if (i % p) result = modp::mul(result, i, modulus);
  }
  return result;
}

Rational g_func(unsigned long a) {
  if (a == 0) throw PreconditionError("g_func: a must be positive");
  Rational g = make_rational(double_factorial(2 * long(a) - 3), BigInt(2 * a));
  return (a % 2 == 1) ? g : Rational(-g);
}

BigInt f_term(unsigned long a, unsigned long i, unsigned long j) {
  if (i == 0 || j == 0 || j > 2 * i) throw PreconditionError("f_term: need i >= 1 and 1 <= j <= 2i");
  BigInt prod = 1;
  for (unsigned long t = 1; t <= 2 * i; ++t)
    if (t != j) prod *= static_cast<unsigned long>(a + t);
  return prod;
}

BigInt f_sum(unsigned long a, unsigned long i) {
  BigInt sum = 0;
  for (unsigned long j = 1; j <= 2 * i; ++j) sum += f_term(a, i, j);
  return sum;
}

bool congruent(const Rational& x, const Rational& y, std::uint64_t p, long k) {
  return vp(p, Rational(x - y)) >= k;
}

BigInt residue_mod(const Rational& q, std::uint64_t p, unsigned k) {
  if (vp(p, q) < 0) throw PreconditionError("residue_mod: " + to_string(q) + " is not p-integral");
  BigInt modulus = pow(BigInt(static_cast<unsigned long>(p)), k);
  BigInt inv;
  if (!mpz_invert(inv.get_mpz_t(), q.get_den().get_mpz_t(), modulus.get_mpz_t())) {
    if (modulus == 1) return 0;
    throw std::logic_error("residue_mod: denominator not invertible");
  }
  BigInt r = q.get_num() * inv;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

// ---------------------------------------------------------------------------
// PadicScalar

PadicScalar PadicScalar::zero(std::uint64_t p, long absolute_precision) {
  PadicScalar z;
  z.prime_ = p;
  z.valuation_ = clamp_precision(absolute_precision);
  return z;
}

PadicScalar::PadicScalar(std::uint64_t p, long valuation, std::uint64_t unit, unsigned precision)
    : prime_(p), valuation_(valuation), precision_(precision), zero_(false) {
  if (precision == 0) throw PreconditionError("PadicScalar: precision must be positive");
  unit_ = unit % prime_power(p, precision);
  if (unit_ % p == 0) throw PreconditionError("PadicScalar: unit must be prime to p");
}

PadicScalar PadicScalar::from_rational(const Rational& q, std::uint64_t p, unsigned precision) {
  require_prime(p, "PadicScalar");
  if (q == 0) return zero(p, kExact);
  const long v = vp(p, q).value();
  Rational shifted = q;
  BigInt pv = pow(BigInt(static_cast<unsigned long>(p)), static_cast<unsigned long>(std::labs(v)));
  if (v > 0)
    shifted /= pv;
  else
    shifted *= pv;
  const BigInt r = residue_mod(shifted, p, precision);
  return PadicScalar(p, v, r.get_ui(), precision);
}

PadicScalar PadicScalar::from_rational_absolute(const Rational& q, std::uint64_t p, long absolute_precision) {
  require_prime(p, "PadicScalar");
  if (q == 0) return zero(p, kExact).truncated(absolute_precision);
  const long v = vp(p, q).value();
  if (v >= absolute_precision) return zero(p, absolute_precision);
  return from_rational(q, p, static_cast<unsigned>(absolute_precision - v));
}

PadicScalar PadicScalar::truncated(long absolute_precision) const {
  if (absolute_precision > this->absolute_precision())
    throw std::invalid_argument("PadicScalar::truncated: precision not available");
  if (zero_ || absolute_precision <= valuation_) return zero(prime_, absolute_precision);
  return PadicScalar(prime_, valuation_, unit_, static_cast<unsigned>(absolute_precision - valuation_));
}

PadicScalar PadicScalar::operator-() const {
  if (zero_) return *this;
  const std::uint64_t m = prime_power(prime_, precision_);
  return PadicScalar(prime_, valuation_, m - unit_, precision_);
}

PadicScalar PadicScalar::inverse() const {
  if (zero_) throw std::domain_error("PadicScalar::inverse of zero");
  return PadicScalar(prime_, -valuation_, modp::inverse(unit_, prime_power(prime_, precision_)), precision_);
}

PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
  if (a.prime_ != b.prime_) throw PreconditionError("PadicScalar: prime mismatch");
  if (a.zero_ && b.zero_) return PadicScalar::zero(a.prime_, clamp_precision(a.valuation_ + b.valuation_));
  if (a.zero_) return PadicScalar::zero(a.prime_, clamp_precision(a.valuation_ + b.valuation_));
  if (b.zero_) return PadicScalar::zero(a.prime_, clamp_precision(a.valuation_ + b.valuation_));
  const unsigned k = std::min(a.precision_, b.precision_);
  const std::uint64_t m = prime_power(a.prime_, k);
  return PadicScalar(a.prime_, a.valuation_ + b.valuation_, modp::mul(a.unit_ % m, b.unit_ % m, m), k);
}

PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
  if (a.prime_ != b.prime_) throw PreconditionError("PadicScalar: prime mismatch");
  const long abs = std::min(a.absolute_precision(), b.absolute_precision());
  if (a.zero_) return b.truncated(abs);
  if (b.zero_) return a.truncated(abs);
  const long vmin = std::min(a.valuation_, b.valuation_);
  const long digits = abs - vmin;
  if (digits <= 0) return PadicScalar::zero(a.prime_, abs);
  const std::uint64_t p = a.prime_;
  const std::uint64_t m = prime_power(p, static_cast<unsigned>(digits));
  auto shifted = [&](const PadicScalar& x) -> std::uint64_t {
    const long shift = x.valuation_ - vmin;
    if (shift >= digits) return 0;
    return modp::mul(x.unit_ % m, prime_power(p, static_cast<unsigned>(shift)), m);
  };
  std::uint64_t sum = shifted(a) + shifted(b);
  if (sum >= m) sum -= m;
  if (sum == 0) return PadicScalar::zero(p, abs);
  const unsigned t = vp(p, sum);
  return PadicScalar(p, vmin + t, sum / prime_power(p, t), static_cast<unsigned>(digits - t));
}

Rational PadicScalar::to_rational() const {
  if (zero_) return 0;
  Rational r{BigInt(static_cast<unsigned long>(unit_))};
  BigInt pv = pow(BigInt(static_cast<unsigned long>(prime_)), static_cast<unsigned long>(std::labs(valuation_)));
  if (valuation_ >= 0)
    r *= pv;
  else
    r /= pv;
  return r;
}

std::string PadicScalar::to_string() const {
  if (zero_) {
    if (valuation_ >= kExact) return "0";
    return "O(" + std::to_string(prime_) + "^" + std::to_string(valuation_) + ")";
  }
  return std::to_string(prime_) + "^" + std::to_string(valuation_) + "*" + std::to_string(unit_) + " (mod " +
         std::to_string(prime_) + "^" + std::to_string(precision_) + ")";
}

}  // namespace ubern
