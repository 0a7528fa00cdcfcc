#include "realstab/transfer_matrix.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

#include "realstab/errors.hpp"

namespace realstab {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DimensionMismatch(what);
}

std::string dims(const TransferMatrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

using PolyGrid = std::vector<std::vector<Polynomial>>;

// Writes x = diag(1/scale) * P with P polynomial; returns P and the row scales.
std::pair<PolyGrid, std::vector<Polynomial>> clear_row_denominators(const TransferMatrix& x) {
  PolyGrid p(x.rows(), std::vector<Polynomial>(x.cols()));
  std::vector<Polynomial> scale(x.rows(), Polynomial::constant(1));
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (!x(i, j).is_zero()) scale[i] = lcm(scale[i], x(i, j).den());
    }
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const auto& f = x(i, j);
      if (f.is_zero()) continue;
      p[i][j] = f.den().is_one() ? f.num() * scale[i] : f.num() * exact_div(scale[i], f.den());
    }
  }
  return {std::move(p), std::move(scale)};
}

std::optional<std::size_t> pick_pivot(const PolyGrid& m, std::size_t k, std::size_t n) {
  std::optional<std::size_t> best;
  for (std::size_t r = k; r < n; ++r) {
    if (m[r][k].is_zero()) continue;
    if (!best || m[r][k].degree() < m[*best][k].degree() ||
        (m[r][k].degree() == m[*best][k].degree() && m[r][k].coeffs().size() < m[*best][k].coeffs().size())) {
      best = r;
    }
  }
  return best;
}

// Bareiss update (pivot * a - lead * b) / prev for the entry pair.
Polynomial bareiss_step(const Polynomial& pivot, const Polynomial& a, const Polynomial& lead, const Polynomial& b,
                        const Polynomial& prev) {
  if (lead.is_zero() || b.is_zero()) {
    if (a.is_zero()) return Polynomial();
    return prev.is_one() ? pivot * a : exact_div(pivot * a, prev);
  }
  Polynomial t = pivot * a - lead * b;
  return prev.is_one() ? t : exact_div(t, prev);
}

}  // namespace

TransferMatrix::TransferMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

TransferMatrix::TransferMatrix(std::size_t rows, std::size_t cols, std::vector<RationalFunction> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  require(entries_.size() == rows * cols, "entry count does not match " + std::to_string(rows) + "x" +
                                              std::to_string(cols));
}

TransferMatrix::TransferMatrix(std::initializer_list<std::initializer_list<RationalFunction>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    require(row.size() == cols_, "ragged initializer list");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

TransferMatrix TransferMatrix::identity(std::size_t n) {
  TransferMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1;
  return out;
}

TransferMatrix TransferMatrix::from_blocks(const std::vector<std::vector<TransferMatrix>>& grid) {
  require(!grid.empty() && !grid[0].empty(), "empty block grid");
  std::vector<std::size_t> heights, widths;
  for (const auto& row : grid) {
    require(row.size() == grid[0].size(), "ragged block grid");
    heights.push_back(row[0].rows());
  }
  for (const auto& b : grid[0]) widths.push_back(b.cols());
  std::size_t total_rows = std::accumulate(heights.begin(), heights.end(), std::size_t{0});
  std::size_t total_cols = std::accumulate(widths.begin(), widths.end(), std::size_t{0});
  TransferMatrix out(total_rows, total_cols);
  std::size_t r0 = 0;
  for (std::size_t bi = 0; bi < grid.size(); ++bi) {
    std::size_t c0 = 0;
    for (std::size_t bj = 0; bj < grid[bi].size(); ++bj) {
      const auto& b = grid[bi][bj];
      require(b.rows() == heights[bi] && b.cols() == widths[bj], "block (" + std::to_string(bi) + "," +
                                                                     std::to_string(bj) + ") is " + dims(b));
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) out(r0 + i, c0 + j) = b(i, j);
      c0 += widths[bj];
    }
    r0 += heights[bi];
  }
  return out;
}

TransferMatrix& TransferMatrix::set_partition(Partition row_blocks, Partition col_blocks) {
  require(row_blocks.empty() || partition_size(row_blocks) == rows_, "row partition does not cover the rows");
  require(col_blocks.empty() || partition_size(col_blocks) == cols_, "column partition does not cover the columns");
  row_blocks_ = std::move(row_blocks);
  col_blocks_ = std::move(col_blocks);
  return *this;
}

TransferMatrix TransferMatrix::with_partition(Partition row_blocks, Partition col_blocks) const {
  TransferMatrix out(*this);
  out.set_partition(std::move(row_blocks), std::move(col_blocks));
  return out;
}

TransferMatrix TransferMatrix::without_partition() const {
  TransferMatrix out(*this);
  out.row_blocks_.clear();
  out.col_blocks_.clear();
  return out;
}

TransferMatrix TransferMatrix::slice(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const {
  require(r0 + nrows <= rows_ && c0 + ncols <= cols_, "slice out of range of " + dims(*this));
  TransferMatrix out(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
  return out;
}

TransferMatrix TransferMatrix::block(std::size_t bi, std::size_t bj) const {
  require(bi < row_blocks_.size() && bj < col_blocks_.size(), "block index out of range");
  auto ro = block_offsets(row_blocks_);
  auto co = block_offsets(col_blocks_);
  return slice(ro[bi], co[bj], row_blocks_[bi].size, col_blocks_[bj].size);
}

TransferMatrix TransferMatrix::with_slice(std::size_t r0, std::size_t c0, const TransferMatrix& sub) const {
  require(r0 + sub.rows() <= rows_ && c0 + sub.cols() <= cols_, "slice out of range of " + dims(*this));
  TransferMatrix out(*this);
  for (std::size_t i = 0; i < sub.rows(); ++i)
    for (std::size_t j = 0; j < sub.cols(); ++j) out(r0 + i, c0 + j) = sub(i, j);
  return out;
}

TransferMatrix TransferMatrix::transpose() const {
  TransferMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  out.row_blocks_ = col_blocks_;
  out.col_blocks_ = row_blocks_;
  return out;
}

TransferMatrix TransferMatrix::scaled(const RationalFunction& f) const {
  TransferMatrix out(*this);
  for (auto& e : out.entries_) e = e * f;
  return out;
}

TransferMatrix TransferMatrix::operator-() const {
  TransferMatrix out(*this);
  for (auto& e : out.entries_) e = -e;
  return out;
}

bool TransferMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.is_zero(); });
}

bool TransferMatrix::is_identity() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != RationalFunction(i == j ? 1 : 0)) return false;
  return true;
}

bool TransferMatrix::is_proper() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.is_proper(); });
}

bool TransferMatrix::is_strictly_proper() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.is_strictly_proper(); });
}

bool TransferMatrix::is_constant() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.is_constant(); });
}

int TransferMatrix::max_den_degree() const {
  int d = 0;
  for (const auto& e : entries_) d = std::max(d, e.den().degree());
  return d;
}

std::string TransferMatrix::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? "; " : "") << "[";
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).str();
    os << "]";
  }
  os << "]";
  return os.str();
}

std::vector<std::size_t> block_offsets(const Partition& p) {
  std::vector<std::size_t> out;
  std::size_t acc = 0;
  for (const auto& b : p) {
    out.push_back(acc);
    acc += b.size;
  }
  return out;
}

std::size_t partition_size(const Partition& p) {
  std::size_t n = 0;
  for (const auto& b : p) n += b.size;
  return n;
}

std::optional<std::size_t> find_block(const Partition& p, const std::string& label) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i].label == label) return i;
  return std::nullopt;
}

TransferMatrix mat_add(const TransferMatrix& x, const TransferMatrix& y) {
  require(x.rows() == y.rows() && x.cols() == y.cols(), "cannot add " + dims(x) + " and " + dims(y));
  TransferMatrix out(x.rows(), x.cols());
  for (std::size_t k = 0; k < x.entries().size(); ++k) out(k / x.cols(), k % x.cols()) = x.entries()[k] + y.entries()[k];
  const auto& src = x.has_partition() ? x : y;
  out.set_partition(src.row_blocks(), src.col_blocks());
  return out;
}

TransferMatrix mat_sub(const TransferMatrix& x, const TransferMatrix& y) { return mat_add(x, -y); }

TransferMatrix mat_mul(const TransferMatrix& x, const TransferMatrix& y) {
  require(x.cols() == y.rows(), "cannot multiply " + dims(x) + " by " + dims(y));
  // Over common row/column denominators each entry is one polynomial sum and
  // a single reduction.
  auto [px, lx] = clear_row_denominators(x);
  auto [py, ly] = clear_row_denominators(y.transpose());
  TransferMatrix out(x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < y.cols(); ++j) {
      Polynomial acc;
      bool any = false;
      for (std::size_t k = 0; k < x.cols(); ++k) {
        if (x(i, k).is_zero() || y(k, j).is_zero()) continue;
        acc += px[i][k] * py[j][k];
        any = true;
      }
      if (!any || acc.is_zero()) continue;
      out(i, j) = RationalFunction(acc, lx[i] * ly[j]);
    }
  }
  out.set_partition(x.row_blocks(), y.col_blocks());
  return out;
}

TransferMatrix mat_inverse(const TransferMatrix& x) {
  require(x.is_square(), "cannot invert non-square " + dims(x));
  const std::size_t n = x.rows();
  std::vector<std::vector<RationalFunction>> a(n, std::vector<RationalFunction>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = x(i, j);
    a[i][n + i] = RationalFunction(1);
  }
  auto weight = [](const RationalFunction& f) { return f.num().degree() + f.den().degree(); };

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = n;
    for (std::size_t r = k; r < n; ++r)
      if (!a[r][k].is_zero() && (best == n || weight(a[r][k]) < weight(a[best][k]))) best = r;
    if (best == n) throw SingularMatrix("matrix is singular (determinant is identically zero)");
    std::swap(a[best], a[k]);
    if (!a[k][k].is_one()) {
      const RationalFunction inv = a[k][k].reciprocal();
      for (auto& e : a[k])
        if (!e.is_zero()) e = e * inv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a[i][k].is_zero()) continue;
      const RationalFunction f = a[i][k];
      for (std::size_t j = 0; j < 2 * n; ++j)
        if (!a[k][j].is_zero()) a[i][j] = a[i][j] - f * a[k][j];
    }
  }

  TransferMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = std::move(a[i][n + j]);
  out.set_partition(x.col_blocks(), x.row_blocks());
  return out;
}

RationalFunction determinant(const TransferMatrix& x) {
  require(x.is_square(), "determinant of non-square " + dims(x));
  const std::size_t n = x.rows();
  if (n == 0) return 1;
  auto [m, scale] = clear_row_denominators(x);
  Polynomial prev = Polynomial::constant(1);
  bool negate = false;
  for (std::size_t k = 0; k < n; ++k) {
    auto piv = pick_pivot(m, k, n);
    if (!piv) return {};
    if (*piv != k) {
      std::swap(m[*piv], m[k]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      Polynomial lead = m[i][k];
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = bareiss_step(m[k][k], m[i][j], lead, m[k][j], prev);
      m[i][k] = Polynomial();
    }
    prev = m[k][k];
  }
  Polynomial den = Polynomial::constant(1);
  for (const auto& s : scale) den = den * s;
  Polynomial num = negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
  return {num, den};
}

TransferMatrix hstack(const TransferMatrix& x, const TransferMatrix& y) {
  return TransferMatrix::from_blocks({{x, y}});
}

TransferMatrix vstack(const TransferMatrix& x, const TransferMatrix& y) {
  return TransferMatrix::from_blocks({{x}, {y}});
}

}  // namespace realstab
