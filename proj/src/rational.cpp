#include "realstab/rational.hpp"

#include <cctype>
#include <cmath>

#include "realstab/errors.hpp"

namespace realstab {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  if (!is_integer_literal(s)) {
    throw ParseError("malformed rational '" + std::string(whole) + "'");
  }
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return mpz_class(digits, 10);
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
  std::string_view mantissa = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = s.substr(0, e);
    auto exp_text = s.substr(e + 1);
    if (!is_integer_literal(exp_text) || exp_text.size() > 6) {
      throw ParseError("malformed exponent in '" + std::string(whole) + "'");
    }
    exponent = std::stol(std::string(exp_text));
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (char c : mantissa) {
    if (c == '.') {
      if (seen_point) throw ParseError("malformed decimal '" + std::string(whole) + "'");
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      throw ParseError("malformed rational '" + std::string(whole) + "'");
    }
  }
  if (digits.empty()) throw ParseError("malformed rational '" + std::string(whole) + "'");
  mpz_class num(digits, 10);
  if (negative) num = -num;
  long shift = exponent - frac_digits;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  Rational out = shift >= 0 ? Rational(num * scale) : Rational(num, scale);
  out.canonicalize();
  return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto first = text.find_first_not_of(" \t");
  auto last = text.find_last_not_of(" \t");
  if (first == std::string_view::npos) throw ParseError("empty rational literal");
  std::string_view s = text.substr(first, last - first + 1);

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(s.substr(0, slash), text);
    mpz_class den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational out(num, den);
    out.canonicalize();
    return out;
  }
  if (is_integer_literal(s)) return Rational(parse_integer(s, text));
  return parse_decimal(s, text);
}

std::string to_string(const Rational& value) { return value.get_str(10); }

Rational from_double(double value) {
  if (!std::isfinite(value)) throw ParseError("non-finite value cannot be made exact");
  Rational out(value);
  out.canonicalize();
  return out;
}

Rational quantize_toward_zero(double value, unsigned bits) {
  double scaled = std::trunc(std::ldexp(value, static_cast<int>(bits)));
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, bits);
  Rational out(mpz_class(scaled), den);
  out.canonicalize();
  return out;
}

}  // namespace realstab
