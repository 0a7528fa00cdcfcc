#include "realstab/rational_function.hpp"

#include "realstab/errors.hpp"

namespace realstab {

RationalFunction::RationalFunction(const Rational& c)
    : num_(Polynomial::constant(c)), den_(Polynomial::constant(1)) {}

RationalFunction::RationalFunction(const Polynomial& p) : num_(p), den_(Polynomial::constant(1)) {}

RationalFunction::RationalFunction(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw ZeroDenominator("rational function with zero denominator");
  if (num.is_zero()) {
    num_ = Polynomial();
    den_ = Polynomial::constant(1);
    return;
  }
  if (den.is_constant()) {
    num_ = num.scaled(1 / den.leading());
    den_ = Polynomial::constant(1);
    return;
  }
  Polynomial g = gcd(num, den);
  Polynomial n = g.is_constant() ? num : exact_div(num, g);
  Polynomial d = g.is_constant() ? den : exact_div(den, g);
  Rational lead = d.leading();
  num_ = n.scaled(1 / lead);
  den_ = d.scaled(1 / lead);
}

Rational RationalFunction::value_at_infinity() const {
  if (num_.degree() < den_.degree()) return 0;
  return num_.leading() / den_.leading();
}

RationalFunction RationalFunction::reciprocal() const {
  if (is_zero()) throw ZeroDenominator("reciprocal of the zero function");
  Rational lead = num_.leading();
  return {den_.scaled(1 / lead), num_.scaled(1 / lead), Reduced{}};
}

RationalFunction RationalFunction::scaled(const Rational& c) const {
  if (c == 0) return {};
  return {num_.scaled(c), den_, Reduced{}};
}

Rational RationalFunction::eval(const Rational& x) const {
  Rational d = den_.eval(x);
  if (d == 0) throw ZeroDenominator("evaluation at a pole");
  return num_.eval(x) / d;
}

std::complex<double> RationalFunction::eval(std::complex<double> x) const { return num_.eval(x) / den_.eval(x); }

RationalFunction RationalFunction::operator-() const { return {-num_, den_, Reduced{}}; }

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  // With a polynomial operand the sum is already reduced: gcd(p*d + n, d) = gcd(n, d) = 1.
  if (a.den_.is_one()) return {a.num_ * b.den_ + b.num_, b.den_, RationalFunction::Reduced{}};
  if (b.den_.is_one()) return {b.num_ * a.den_ + a.num_, a.den_, RationalFunction::Reduced{}};
  if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
  Polynomial g = gcd(a.den_, b.den_);
  if (g.is_constant()) return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  Polynomial ad = exact_div(a.den_, g);
  Polynomial bd = exact_div(b.den_, g);
  return {a.num_ * bd + b.num_ * ad, ad * b.den_};
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.is_constant()) return b.scaled(a.constant_value());
  if (b.is_constant()) return a.scaled(b.constant_value());
  // Cross-cancel: with both operands reduced, the product of the cancelled
  // parts is reduced too.
  Polynomial g1 = gcd(a.num_, b.den_);
  Polynomial g2 = gcd(b.num_, a.den_);
  Polynomial an = g1.is_constant() ? a.num_ : exact_div(a.num_, g1);
  Polynomial bd = g1.is_constant() ? b.den_ : exact_div(b.den_, g1);
  Polynomial bn = g2.is_constant() ? b.num_ : exact_div(b.num_, g2);
  Polynomial ad = g2.is_constant() ? a.den_ : exact_div(a.den_, g2);
  Polynomial den = ad * bd;
  Rational lead = den.leading();
  if (lead != 1) return {(an * bn).scaled(1 / lead), den.scaled(1 / lead), RationalFunction::Reduced{}};
  return {an * bn, den, RationalFunction::Reduced{}};
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) { return a * b.reciprocal(); }

std::string RationalFunction::str() const {
  if (den_.is_one()) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

}  // namespace realstab
