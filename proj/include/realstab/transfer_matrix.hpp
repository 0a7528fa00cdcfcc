#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "realstab/rational_function.hpp"

namespace realstab {

/// A named group of consecutive rows or columns (one signal of a realization).
struct Block {
  std::string label;
  std::size_t size = 0;
  friend bool operator==(const Block&, const Block&) = default;
};

using Partition = std::vector<Block>;

/// Dense matrix of rational functions, row-major, with optional named block
/// partitions on rows and columns.
class TransferMatrix {
 public:
  TransferMatrix() = default;
  /// rows x cols zero matrix.
  TransferMatrix(std::size_t rows, std::size_t cols);
  TransferMatrix(std::size_t rows, std::size_t cols, std::vector<RationalFunction> entries);
  /// Row-major nested initializer, e.g. {{1, RationalFunction::z_inv()}, {0, 1}}.
  TransferMatrix(std::initializer_list<std::initializer_list<RationalFunction>> rows);

  static TransferMatrix identity(std::size_t n);
  static TransferMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  /// Assembles a matrix from a grid of blocks; rows of the grid must agree in
  /// height and columns in width. Empty (0x0) placeholders are not allowed.
  static TransferMatrix from_blocks(const std::vector<std::vector<TransferMatrix>>& grid);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  const RationalFunction& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  RationalFunction& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const std::vector<RationalFunction>& entries() const { return entries_; }

  // Partitions.
  const Partition& row_blocks() const { return row_blocks_; }
  const Partition& col_blocks() const { return col_blocks_; }
  bool has_partition() const { return !row_blocks_.empty() || !col_blocks_.empty(); }
  /// Sets both partitions; throws DimensionMismatch if sizes do not sum up.
  TransferMatrix& set_partition(Partition row_blocks, Partition col_blocks);
  TransferMatrix with_partition(Partition row_blocks, Partition col_blocks) const;
  TransferMatrix without_partition() const;

  /// Sub-matrix starting at (r0, c0).
  TransferMatrix slice(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const;
  /// Sub-matrix for block (bi, bj) of the partitions.
  TransferMatrix block(std::size_t bi, std::size_t bj) const;
  /// Copy with `sub` written at (r0, c0).
  TransferMatrix with_slice(std::size_t r0, std::size_t c0, const TransferMatrix& sub) const;

  TransferMatrix transpose() const;
  TransferMatrix scaled(const RationalFunction& f) const;
  TransferMatrix operator-() const;

  bool is_zero() const;
  bool is_identity() const;
  bool is_proper() const;
  bool is_strictly_proper() const;
  bool is_constant() const;
  /// Largest denominator degree over all entries.
  int max_den_degree() const;

  std::string str() const;

  friend bool operator==(const TransferMatrix& a, const TransferMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }
  friend bool operator!=(const TransferMatrix& a, const TransferMatrix& b) { return !(a == b); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<RationalFunction> entries_;
  Partition row_blocks_;
  Partition col_blocks_;
};

/// Offsets of each block: offsets[b] is the first row/col of block b.
std::vector<std::size_t> block_offsets(const Partition& p);
std::size_t partition_size(const Partition& p);
/// Index of the block with the given label.
std::optional<std::size_t> find_block(const Partition& p, const std::string& label);

TransferMatrix mat_add(const TransferMatrix& x, const TransferMatrix& y);
TransferMatrix mat_sub(const TransferMatrix& x, const TransferMatrix& y);
TransferMatrix mat_mul(const TransferMatrix& x, const TransferMatrix& y);

/// Exact inverse by Gauss-Jordan elimination over rational functions, skipping
/// zero entries so structured (mostly identity) matrices stay cheap. Throws
/// SingularMatrix if det == 0.
TransferMatrix mat_inverse(const TransferMatrix& x);

/// Exact determinant via fraction-free elimination.
RationalFunction determinant(const TransferMatrix& x);

inline TransferMatrix operator+(const TransferMatrix& x, const TransferMatrix& y) { return mat_add(x, y); }
inline TransferMatrix operator-(const TransferMatrix& x, const TransferMatrix& y) { return mat_sub(x, y); }
inline TransferMatrix operator*(const TransferMatrix& x, const TransferMatrix& y) { return mat_mul(x, y); }

/// [x y]
TransferMatrix hstack(const TransferMatrix& x, const TransferMatrix& y);
/// [x; y]
TransferMatrix vstack(const TransferMatrix& x, const TransferMatrix& y);

}  // namespace realstab
