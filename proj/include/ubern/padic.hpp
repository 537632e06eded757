#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "ubern/rational.hpp"

namespace ubern {

bool is_prime(std::uint64_t n);
/// Throws PreconditionError unless p is prime.
void require_prime(std::uint64_t p, const char* what);

/// A p-adic valuation: a finite integer or +infinity (the valuation of 0).
class Valuation {
 public:
  static Valuation infinite() { return Valuation(); }
  explicit Valuation(long v) : value_(v) {}

  bool is_infinite() const { return !value_; }
  /// Throws std::logic_error for +infinity.
  long value() const;

  friend bool operator==(const Valuation&, const Valuation&) = default;
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b);
  friend bool operator==(const Valuation& a, long b) { return a.value_ == b; }
  friend std::strong_ordering operator<=>(const Valuation& a, long b) { return a <=> Valuation(b); }

  std::string to_string() const { return value_ ? std::to_string(*value_) : "inf"; }

 private:
  Valuation() = default;
  std::optional<long> value_;
};

/// v_p(a) for a machine integer a != 0.
unsigned vp(std::uint64_t p, std::uint64_t a);
Valuation vp(std::uint64_t p, const BigInt& a);
/// v_p(num) - v_p(den) on the reduced fraction; +infinity for q = 0.
Valuation vp(std::uint64_t p, const Rational& q);

/// Sum of the base-p digits of a.
std::uint64_t digit_sum(std::uint64_t p, std::uint64_t a);

/// v_p(a!) = (a - s_p(a)) / (p - 1), never forming a!.
std::uint64_t vp_factorial(std::uint64_t p, std::uint64_t a);

/// a!! = a (a-2) ... 3 1 for odd a >= 1, with (-1)!! = 1. Throws
/// PreconditionError for even a or a < -1.
BigInt double_factorial(long a);

/// p^k, throwing PreconditionError when it does not fit in 62 bits.
std::uint64_t prime_power(std::uint64_t p, unsigned k);

/// (a! / p^{v_p(a!)}) mod p^k from block products of units, without forming a!.
std::uint64_t factorial_unit_mod(std::uint64_t p, std::uint64_t a, unsigned k);

/// g(a) = (-1)^(a-1) (2a-3)!! / (2a), a >= 1.
Rational g_func(unsigned long a);

/// f_a(i, j) = (a+1)(a+2)...(a+2i) / (a+j), 1 <= j <= 2i.
BigInt f_term(unsigned long a, unsigned long i, unsigned long j);
/// sum_{j=1}^{2i} f_a(i, j).
BigInt f_sum(unsigned long a, unsigned long i);

/// x == y (mod p^k), i.e. v_p(x - y) >= k. A non-p-integral difference is
/// simply "not congruent" for k >= 0.
bool congruent(const Rational& x, const Rational& y, std::uint64_t p, long k);

/// q mod p^k as an integer in [0, p^k). Throws PreconditionError if q is not
/// p-integral.
BigInt residue_mod(const Rational& q, std::uint64_t p, unsigned k);

/// A p-adic number known to finite precision: p^valuation * unit, where the
/// unit is known modulo p^precision (relative precision). The zero mark
/// stands for "divisible by p^absolute_precision()" with nothing else known.
class PadicScalar {
 public:
  static PadicScalar zero(std::uint64_t p, long absolute_precision);
  /// Unit residue is reduced mod p^precision; it must be prime to p.
  PadicScalar(std::uint64_t p, long valuation, std::uint64_t unit, unsigned precision);

  /// Image of q with `precision` digits after its leading one.
  static PadicScalar from_rational(const Rational& q, std::uint64_t p, unsigned precision);
  /// Image of q known modulo p^absolute_precision (the zero mark if
  /// v_p(q) >= absolute_precision).
  static PadicScalar from_rational_absolute(const Rational& q, std::uint64_t p, long absolute_precision);

  std::uint64_t prime() const { return prime_; }
  bool is_zero() const { return zero_; }
  /// Valuation of a nonzero scalar; for the zero mark, its absolute precision.
  long valuation() const { return valuation_; }
  std::uint64_t unit() const { return unit_; }
  unsigned precision() const { return precision_; }
  long absolute_precision() const { return zero_ ? valuation_ : valuation_ + long(precision_); }

  /// Re-expresses this scalar modulo p^absolute_precision (must not exceed
  /// the precision already known).
  PadicScalar truncated(long absolute_precision) const;

  PadicScalar operator-() const;
  PadicScalar inverse() const;

  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }

  /// p^valuation * unit as an exact rational (0 for the zero mark).
  Rational to_rational() const;
  std::string to_string() const;

  friend bool operator==(const PadicScalar&, const PadicScalar&) = default;

 private:
  PadicScalar() = default;

  std::uint64_t prime_ = 2;
  long valuation_ = 0;
  std::uint64_t unit_ = 0;
  unsigned precision_ = 0;
  bool zero_ = true;
};

namespace modp {

std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow(std::uint64_t a, std::uint64_t e, std::uint64_t m);
/// Inverse of a unit modulo m.
std::uint64_t inverse(std::uint64_t a, std::uint64_t m);

}  // namespace modp

}  // namespace ubern
