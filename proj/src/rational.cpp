#include "tropcert/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace tropcert {

namespace {

bool valid_integer_literal(std::string_view s) {
  size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+'))
    ++i;
  if (i == s.size())
    return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      return false;
  return true;
}

BigInt parse_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  return BigInt(std::string(s));
}

} // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!valid_integer_literal(text))
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    return Rational(parse_integer(text));
  }
  auto num = text.substr(0, slash);
  auto den = text.substr(slash + 1);
  if (!valid_integer_literal(num) || !valid_integer_literal(den) || den.front() == '-' ||
      den.front() == '+')
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  BigInt d = parse_integer(den);
  if (d == 0)
    throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_integer(num), d);
}

std::string to_string(const Rational &q) {
  if (is_integer(q))
    return boost::multiprecision::numerator(q).str();
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

std::string to_string(const BigInt &z) { return z.str(); }

std::string to_string(const RatVector &v) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i)
      out += ",";
    out += to_string(v[i]);
  }
  return out + ")";
}

std::string to_string(const IntVector &v) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i)
      out += ",";
    out += v[i].str();
  }
  return out + ")";
}

BigInt gcd(const BigInt &a, const BigInt &b) {
  return boost::multiprecision::gcd(a, b);
}

BigInt lcm(const BigInt &a, const BigInt &b) {
  if (a == 0 || b == 0)
    return 0;
  return boost::multiprecision::abs(a / gcd(a, b) * b);
}

BigInt content(const IntVector &v) {
  BigInt g = 0;
  for (const auto &x : v)
    g = gcd(g, x);
  return boost::multiprecision::abs(g);
}

IntVector primitive_integer_multiple(const RatVector &v) {
  BigInt den = 1;
  for (const auto &x : v)
    den = lcm(den, boost::multiprecision::denominator(x));
  IntVector out(v.size());
  for (size_t i = 0; i < v.size(); ++i)
    out[i] = boost::multiprecision::numerator(v[i]) * (den / boost::multiprecision::denominator(v[i]));
  BigInt g = content(out);
  if (g > 1)
    for (auto &x : out)
      x /= g;
  return out;
}

RatVector to_rational(const IntVector &v) {
  RatVector out;
  out.reserve(v.size());
  for (const auto &x : v)
    out.emplace_back(x);
  return out;
}

Rational dot(const RatVector &a, const RatVector &b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: length mismatch");
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0)
      s += a[i] * b[i];
  return s;
}

Rational dot(const IntVector &a, const RatVector &b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: length mismatch");
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0)
      s += Rational(a[i]) * b[i];
  return s;
}

bool is_zero(const RatVector &v) {
  for (const auto &x : v)
    if (x != 0)
      return false;
  return true;
}

bool is_zero(const IntVector &v) {
  for (const auto &x : v)
    if (x != 0)
      return false;
  return true;
}

RatVector operator+(const RatVector &a, const RatVector &b) {
  RatVector out(a);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] += b.at(i);
  return out;
}

RatVector operator-(const RatVector &a, const RatVector &b) {
  RatVector out(a);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] -= b.at(i);
  return out;
}

RatVector operator*(const Rational &s, const RatVector &a) {
  RatVector out(a);
  for (auto &x : out)
    x *= s;
  return out;
}

} // namespace tropcert
