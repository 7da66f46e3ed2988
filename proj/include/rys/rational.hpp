#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace rys {

// GMP rationals are kept canonical after every arithmetic operation by gmpxx.
using Rational = mpq_class;

Rational parse_rational(std::string_view text);   // "p/q", "p", or a decimal like "0.25"
std::string to_string(const Rational& q);          // "p/q" or "p"
Rational rpow(const Rational& base, long exponent); // exponent may be negative (base != 0)
double to_double(const Rational& q);

}  // namespace rys
