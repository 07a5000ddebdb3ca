#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>

#include <optional>
#include <stdexcept>
#include <string>

namespace supersle {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses "p", "p/q" or "-p/q". Throws on malformed input.
inline Rational parse_rational(const std::string& s) {
  auto bad = [&] { throw std::invalid_argument("malformed rational: '" + s + "'"); };
  if (s.empty()) bad();
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(s));
    Integer num(s.substr(0, slash));
    Integer den(s.substr(slash + 1));
    if (den == 0) bad();
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    bad();
  }
  return Rational(0);  // unreachable
}

inline Rational pow_int(const Rational& base, long e) {
  if (e == 0) return Rational(1);
  Rational b = e > 0 ? base : Rational(1) / base;
  unsigned long n = e > 0 ? e : -e;
  Rational acc(1);
  while (n) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  return acc;
}

/// Exact square root of a non-negative rational, if it is a perfect square.
inline std::optional<Rational> exact_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  Integer n = numerator(r), d = denominator(r);
  Integer sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
  if (sn * sn != n || sd * sd != d) return std::nullopt;
  return Rational(sn, sd);
}

/// Generalized binomial coefficient C(p, j) for rational p and j >= 0.
inline Rational binomial(const Rational& p, unsigned j) {
  Rational acc(1);
  for (unsigned i = 0; i < j; ++i) acc *= (p - Rational(i)) / Rational(i + 1);
  return acc;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact rational value of a finite double (doubles are dyadic rationals).
inline Rational exact_from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite double");
  int exp = 0;
  double m = std::frexp(v, &exp);  // v = m * 2^exp with |m| in [0.5, 1)
  auto scaled = static_cast<long long>(std::ldexp(m, 53));
  exp -= 53;
  Rational r(scaled);
  return exp >= 0 ? r * pow_int(Rational(2), exp) : r / pow_int(Rational(2), -exp);
}

}  // namespace supersle
