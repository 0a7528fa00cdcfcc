#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "realstab/transfer_matrix.hpp"

namespace realstab {

/// Dense matrix of exact rationals (plant data and static gains).
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}
  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  bool is_zero() const;
  RationalMatrix transpose() const;
  /// Exact Gauss-Jordan inverse; throws SingularMatrix.
  RationalMatrix inverse() const;
  Rational trace() const;
  /// The constant transfer matrix with these entries.
  TransferMatrix to_transfer() const;

  friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator*(const Rational& c, const RationalMatrix& a);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string str() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// det(zI - A), monic of degree n (Faddeev-LeVerrier).
Polynomial characteristic_polynomial(const RationalMatrix& a);

/// Largest eigenvalue modulus of a.
double spectral_radius(const RationalMatrix& a);

/// True when every eigenvalue has modulus < 1 - tol (nilpotent matrices pass).
bool is_schur_stable(const RationalMatrix& a, double tol = 1e-9);

/// zI - A as a polynomial transfer matrix.
TransferMatrix shift_minus(const RationalMatrix& a);

/// (zI - A)^-1, exact.
TransferMatrix resolvent(const RationalMatrix& a);

/// x+ = A x + B u, y = C x + D u.
struct StateSpace {
  RationalMatrix A, B, C, D;

  StateSpace() = default;
  /// Throws DimensionMismatch on inconsistent shapes. Missing C/D default to
  /// 0 x n and p x m zero matrices.
  StateSpace(RationalMatrix a, RationalMatrix b, RationalMatrix c = {}, RationalMatrix d = {});

  std::size_t states() const { return A.rows(); }
  std::size_t inputs() const { return B.cols(); }
  std::size_t outputs() const { return C.rows(); }

  /// C (zI - A)^-1 B + D.
  TransferMatrix transfer() const;
};

/// Ackermann gain F (1 x n) with A + B F nilpotent; B must be n x 1 and the
/// pair controllable (throws SingularMatrix otherwise).
RationalMatrix deadbeat_state_gain(const RationalMatrix& a, const RationalMatrix& b);

/// Dual of deadbeat_state_gain: L (n x 1) with A + L C nilpotent; C is 1 x n.
RationalMatrix deadbeat_observer_gain(const RationalMatrix& a, const RationalMatrix& c);

}  // namespace realstab
