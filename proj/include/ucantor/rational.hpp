#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace ucantor {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", "p" or "-p/q" exactly. Decimal points are rejected so that
/// no value ever passes through binary floating point.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text ("p" when q = 1).
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

/// Decimal rendering with `digits` significant digits. Display only.
std::string to_decimal(const Rational& r, int digits = 12);

Integer floor(const Rational& r);
Integer ceil(const Rational& r);

/// r^e for integer e >= 0.
Rational pow(const Rational& r, unsigned long e);

Rational max_of(const Rational& a, const Rational& b);

/// max(a/b, b/a) for positive a, b.
Rational symmetric_ratio(const Rational& a, const Rational& b);

Integer lcm_of_denominators(const std::vector<Rational>& values);

}  // namespace ucantor

namespace ucantor {

/// Closed exact interval [lower, upper] used wherever a quantity is only
/// known up to a certified enclosure.
struct Bracket {
  Rational lower;
  Rational upper;

  bool exact() const { return lower == upper; }
  bool contains(const Rational& x) const { return lower <= x && x <= upper; }
  Rational width() const { return upper - lower; }
};

}  // namespace ucantor
