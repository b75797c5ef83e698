#pragma once

#include <gmpxx.h>

#include <string>

namespace rdm {

/// Exact arbitrary-precision rational. All solver arithmetic uses this type.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

/// "p/q", or just "p" when the denominator is 1.
std::string to_fraction_string(const Rational& r);

/// Exact decimal expansion when the denominator has only factors 2 and 5
/// ("1.5", "-0.125", "3"); otherwise falls back to "p/q".
std::string to_decimal_string(const Rational& r);

/// Accepts "p", "p/q" or a finite decimal such as "0.25".
Rational parse_rational(const std::string& text);

}  // namespace rdm
