#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ubern {

using BigInt = mpz_class;
/// Arbitrary-precision rational, always kept canonical (lowest terms,
/// positive denominator).
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
Rational make_rational(const BigInt& num, const BigInt& den);

/// "num/den" in lowest terms; integers keep the "/1" suffix so the format
/// is uniform.
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

/// Accepts "a/b" or "a". Throws std::invalid_argument on malformed text or a
/// zero denominator.
Rational parse_rational(std::string_view text);

BigInt factorial(unsigned long n);
BigInt pow(const BigInt& base, unsigned long exp);

}  // namespace ubern
