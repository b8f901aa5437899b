#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace tropcert {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

using IntVector = std::vector<BigInt>;
using RatVector = std::vector<Rational>;

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on a malformed
/// string or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise (lowest terms,
/// positive denominator).
std::string to_string(const Rational &q);
std::string to_string(const BigInt &z);
std::string to_string(const RatVector &v);
std::string to_string(const IntVector &v);

inline bool is_integer(const Rational &q) {
  return boost::multiprecision::denominator(q) == 1;
}

BigInt gcd(const BigInt &a, const BigInt &b);
BigInt lcm(const BigInt &a, const BigInt &b);

/// gcd of all entries (0 for the zero vector), always non-negative.
BigInt content(const IntVector &v);

/// Positive multiple of v with integer entries and content 1 (zero stays zero).
IntVector primitive_integer_multiple(const RatVector &v);

RatVector to_rational(const IntVector &v);

Rational dot(const RatVector &a, const RatVector &b);
Rational dot(const IntVector &a, const RatVector &b);

bool is_zero(const RatVector &v);
bool is_zero(const IntVector &v);

RatVector operator+(const RatVector &a, const RatVector &b);
RatVector operator-(const RatVector &a, const RatVector &b);
RatVector operator*(const Rational &s, const RatVector &a);

} // namespace tropcert
