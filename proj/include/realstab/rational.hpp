#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace realstab {

/// Arbitrary-precision rational scalar. All transfer-matrix algebra runs on
/// this type; doubles only appear at the pole-finding / norm boundary.
using Rational = mpq_class;

/// Parses "p/q", an integer, or a finite decimal ("-0.25", "1e-3") exactly.
/// Throws ParseError on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when q == 1) form.
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

/// Exact binary value of a finite double.
Rational from_double(double value);

/// Nearest multiple of 2^-bits not exceeding |value| in magnitude (sign kept).
Rational quantize_toward_zero(double value, unsigned bits);

}  // namespace realstab
