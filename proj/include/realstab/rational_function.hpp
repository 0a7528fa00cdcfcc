#pragma once

#include <complex>
#include <string>

#include "realstab/polynomial.hpp"

namespace realstab {

/// Exact ratio num/den of polynomials in z, always held in canonical form:
/// gcd(num, den) = 1 and den monic. The zero function is 0/1. Canonical form
/// makes equality structural.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(Polynomial::constant(1)) {}
  RationalFunction(const Rational& c);  // NOLINT(google-explicit-constructor)
  RationalFunction(int c) : RationalFunction(Rational(c)) {}  // NOLINT
  explicit RationalFunction(const Polynomial& p);
  /// Canonicalizes num/den; throws ZeroDenominator when den == 0.
  RationalFunction(const Polynomial& num, const Polynomial& den);

  /// The function z.
  static RationalFunction z() { return RationalFunction(Polynomial::z()); }
  /// The function z^-1.
  static RationalFunction z_inv() { return {Polynomial::constant(1), Polynomial::z()}; }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  /// The value of a constant function. Only meaningful when is_constant().
  Rational constant_value() const { return num_.coeff(0); }
  /// deg(num) <= deg(den).
  bool is_proper() const { return num_.degree() <= den_.degree(); }
  /// deg(num) < deg(den), i.e. z*f is proper.
  bool is_strictly_proper() const { return is_zero() || num_.degree() < den_.degree(); }
  /// Value at infinity of a proper function (0 when strictly proper).
  Rational value_at_infinity() const;

  RationalFunction reciprocal() const;
  RationalFunction scaled(const Rational& c) const;

  /// Exact value at a rational point; throws ZeroDenominator at a pole.
  Rational eval(const Rational& x) const;
  std::complex<double> eval(std::complex<double> x) const;

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

  std::string str() const;

 private:
  struct Reduced {};
  RationalFunction(Polynomial num, Polynomial den, Reduced) : num_(std::move(num)), den_(std::move(den)) {}

  Polynomial num_;
  Polynomial den_;
};

/// Free-function form of the canonicalizing constructor.
inline RationalFunction canonicalize(const Polynomial& num, const Polynomial& den) { return {num, den}; }

}  // namespace realstab
