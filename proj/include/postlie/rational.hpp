#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace postlie {

/// Arbitrary-precision rational; always kept canonical by GMP.
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" (decimal integers). Throws ParseError.
Rational parse_rational(std::string_view text);

/// Canonical decimal form, "p/q" or "p" when the denominator is one.
std::string to_string(const Rational& q);

/// Exact conversion of a finite double.
Rational rational_from_double(double x);

/// Conversion of exact constants into the scalar type of a computation.
template <class T>
T scalar_cast(const Rational& q);

template <>
inline double scalar_cast<double>(const Rational& q) {
  return q.get_d();
}

template <>
inline Rational scalar_cast<Rational>(const Rational& q) {
  return q;
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& q) { return q.get_d(); }

inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace postlie
