#include "realstab/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "realstab/analysis.hpp"
#include "realstab/errors.hpp"

namespace realstab {

namespace {

std::string dims(const RationalMatrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

}  // namespace

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionMismatch("ragged initializer list");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1;
  return out;
}

bool RationalMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return x == 0; });
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

RationalMatrix RationalMatrix::inverse() const {
  if (rows_ != cols_) throw DimensionMismatch("cannot invert non-square " + dims(*this));
  const std::size_t n = rows_;
  RationalMatrix a(*this);
  RationalMatrix inv = identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a(piv, k) == 0) ++piv;
    if (piv == n) throw SingularMatrix("constant matrix is singular");
    if (piv != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(k, j));
        std::swap(inv(piv, j), inv(k, j));
      }
    Rational scale = 1 / a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) *= scale;
      inv(k, j) *= scale;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      Rational f = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

Rational RationalMatrix::trace() const {
  Rational t = 0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

TransferMatrix RationalMatrix::to_transfer() const {
  TransferMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = RationalFunction((*this)(i, j));
  return out;
}

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("cannot add " + dims(a) + " and " + dims(b));
  RationalMatrix out(a);
  for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] += b.data_[k];
  return out;
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) { return a + Rational(-1) * b; }

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatch("cannot multiply " + dims(a) + " by " + dims(b));
  RationalMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

RationalMatrix operator*(const Rational& c, const RationalMatrix& a) {
  RationalMatrix out(a);
  for (auto& x : out.data_) x *= c;
  return out;
}

std::string RationalMatrix::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? "; " : "") << "[";
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << to_string((*this)(i, j));
    os << "]";
  }
  os << "]";
  return os.str();
}

namespace {

// Faddeev-LeVerrier: returns the characteristic coefficients c[0..n] (c[n] = 1)
// and the adjugate terms M_1..M_n with adj(zI - A) = sum_k M_k z^(n-k).
std::pair<std::vector<Rational>, std::vector<RationalMatrix>> leverrier(const RationalMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = 1;
  std::vector<RationalMatrix> terms;
  RationalMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m + c[n - k + 1] * RationalMatrix::identity(n);
    terms.push_back(m);
    c[n - k] = -(a * m).trace() / Rational(static_cast<long>(k));
  }
  return {std::move(c), std::move(terms)};
}

}  // namespace

Polynomial characteristic_polynomial(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("characteristic polynomial of non-square " + dims(a));
  return Polynomial(leverrier(a).first);
}

double spectral_radius(const RationalMatrix& a) {
  double r = 0.0;
  for (const auto& root : roots(characteristic_polynomial(a))) r = std::max(r, std::abs(root));
  return r;
}

bool is_schur_stable(const RationalMatrix& a, double tol) { return spectral_radius(a) < 1.0 - tol; }

TransferMatrix shift_minus(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("zI - A needs square A, got " + dims(a));
  TransferMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      out(i, j) = RationalFunction(i == j ? Polynomial{-a(i, j), Rational(1)} : Polynomial::constant(-a(i, j)));
  return out;
}

TransferMatrix resolvent(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("resolvent needs square A, got " + dims(a));
  const std::size_t n = a.rows();
  auto [c, terms] = leverrier(a);
  Polynomial charpoly(c);
  TransferMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Rational> coeffs(n, Rational(0));
      for (std::size_t k = 1; k <= n; ++k) coeffs[n - k] = terms[k - 1](i, j);
      out(i, j) = RationalFunction(Polynomial(std::move(coeffs)), charpoly);
    }
  return out;
}

StateSpace::StateSpace(RationalMatrix a, RationalMatrix b, RationalMatrix c, RationalMatrix d)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
  const std::size_t n = A.rows();
  if (A.cols() != n) throw DimensionMismatch("A must be square, got " + dims(A));
  if (B.rows() != n) throw DimensionMismatch("B must have " + std::to_string(n) + " rows, got " + dims(B));
  if (C.rows() == 0 && C.cols() == 0) C = RationalMatrix(0, n);
  if (C.cols() != n) throw DimensionMismatch("C must have " + std::to_string(n) + " columns, got " + dims(C));
  if (D.rows() == 0 && D.cols() == 0) D = RationalMatrix(C.rows(), B.cols());
  if (D.rows() != C.rows() || D.cols() != B.cols())
    throw DimensionMismatch("D must be " + std::to_string(C.rows()) + "x" + std::to_string(B.cols()) + ", got " + dims(D));
}

TransferMatrix StateSpace::transfer() const {
  return C.to_transfer() * resolvent(A) * B.to_transfer() + D.to_transfer();
}

RationalMatrix deadbeat_state_gain(const RationalMatrix& a, const RationalMatrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != 1)
    throw DimensionMismatch("deadbeat gain needs square A and an n x 1 B");
  RationalMatrix ctrb(n, n);
  RationalMatrix col = b;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) ctrb(i, k) = col(i, 0);
    col = a * col;
  }
  RationalMatrix a_pow = RationalMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) a_pow = a_pow * a;
  RationalMatrix last_row(1, n);
  last_row(0, n - 1) = 1;
  return Rational(-1) * (last_row * ctrb.inverse() * a_pow);
}

RationalMatrix deadbeat_observer_gain(const RationalMatrix& a, const RationalMatrix& c) {
  return deadbeat_state_gain(a.transpose(), c.transpose()).transpose();
}

}  // namespace realstab
