#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "realstab/rational.hpp"

namespace realstab {

/// Polynomial in z with exact rational coefficients, stored in ascending
/// powers. Trailing zeros are always stripped; the zero polynomial is the
/// single coefficient 0 and has degree -1.
class Polynomial {
 public:
  Polynomial();
  explicit Polynomial(std::vector<Rational> coeffs);
  Polynomial(std::initializer_list<Rational> coeffs);

  static Polynomial constant(const Rational& c);
  static Polynomial monomial(std::size_t power, const Rational& c = 1);
  /// The polynomial z.
  static Polynomial z() { return monomial(1); }

  int degree() const;
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0; }
  bool is_constant() const { return coeffs_.size() == 1; }
  bool is_one() const { return coeffs_.size() == 1 && coeffs_[0] == 1; }
  const Rational& leading() const { return coeffs_.back(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  /// Coefficient of z^k (zero beyond the degree).
  Rational coeff(std::size_t k) const;

  Polynomial monic() const;
  Polynomial derivative() const;
  Polynomial scaled(const Rational& c) const;
  /// p(z) -> z^k p(z)
  Polynomial shifted(std::size_t k) const;

  Rational eval(const Rational& x) const;
  std::complex<double> eval(std::complex<double> x) const;
  std::vector<double> to_double() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  std::string str(const char* var = "z") const;

 private:
  void strip();
  std::vector<Rational> coeffs_;
};

/// Quotient and remainder; throws ZeroDenominator when the divisor is zero.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);

/// Quotient of a division known to be exact. Throws IdentityCheckFailed if
/// the remainder is nonzero.
Polynomial exact_div(const Polynomial& a, const Polynomial& b);

/// Monic gcd (gcd(0, 0) = 0).
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// Monic lcm.
Polynomial lcm(const Polynomial& a, const Polynomial& b);

/// Square-free factorization (Yun). Returns (factor, multiplicity) pairs of
/// monic, pairwise coprime, square-free factors of positive degree.
std::vector<std::pair<Polynomial, int>> square_free_factors(const Polynomial& p);

}  // namespace realstab
