#include "realstab/realization.hpp"

#include <algorithm>

#include "realstab/errors.hpp"

namespace realstab {

namespace {

void require_square(const TransferMatrix& m, const char* what) {
  if (!m.is_square()) throw DimensionMismatch(std::string(what) + " must be square");
}

TransferMatrix zeros(std::size_t r, std::size_t c) { return TransferMatrix::zero(r, c); }

TransferMatrix times_z(const TransferMatrix& m) { return m.scaled(RationalFunction::z()); }

}  // namespace

RealizationSystem::RealizationSystem(TransferMatrix r, Partition signals) : r_(std::move(r)) {
  require_square(r_, "realization matrix");
  for (std::size_t a = 0; a < signals.size(); ++a)
    for (std::size_t b = a + 1; b < signals.size(); ++b)
      if (signals[a].label == signals[b].label) throw InvalidArgument("duplicate signal label '" + signals[a].label + "'");
  r_.set_partition(signals, signals);
  const auto& blocks = r_.row_blocks();
  for (std::size_t a = 0; a < blocks.size(); ++a)
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if (a != b && !r_.block(a, b).is_proper())
        throw ImproperBlock("off-diagonal block R[" + blocks[a].label + "," + blocks[b].label + "] is improper");
}

std::vector<std::string> RealizationSystem::signals() const {
  std::vector<std::string> out;
  for (const auto& b : blocks()) out.push_back(b.label);
  return out;
}

std::size_t RealizationSystem::block_index(const std::string& label) const {
  auto idx = find_block(blocks(), label);
  if (!idx) throw InvalidArgument("no signal block '" + label + "'");
  return *idx;
}

TransferMatrix RealizationSystem::i_minus_r() const {
  return (TransferMatrix::identity(size()) - r_).with_partition(blocks(), blocks());
}

Transformation::Transformation(TransferMatrix t) : t_(std::move(t)) {
  require_square(t_, "transformation");
  t_inv_ = mat_inverse(t_);
}

AdditivePerturbation::AdditivePerturbation(TransferMatrix delta, std::vector<BlockIndex> mask)
    : delta_(std::move(delta)), mask_(std::move(mask)) {
  require_square(delta_, "perturbation");
  std::sort(mask_.begin(), mask_.end());
  mask_.erase(std::unique(mask_.begin(), mask_.end()), mask_.end());
  // Without a partition the whole matrix is one block and the mask is moot.
  if (!delta_.has_partition()) return;
  const std::size_t nb = delta_.row_blocks().size();
  for (const auto& [a, b] : mask_)
    if (a >= nb || b >= nb) throw InvalidArgument("block mask index out of range");
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t b = 0; b < nb; ++b) {
      if (std::binary_search(mask_.begin(), mask_.end(), BlockIndex{a, b})) continue;
      if (!delta_.block(a, b).is_zero())
        throw InvalidArgument("perturbation block (" + delta_.row_blocks()[a].label + "," + delta_.row_blocks()[b].label +
                              ") lies outside the mask but is nonzero");
    }
}

AdditivePerturbation AdditivePerturbation::zero(const Partition& blocks) {
  std::size_t n = partition_size(blocks);
  return {TransferMatrix::zero(n, n).with_partition(blocks, blocks), {}};
}

AdditivePerturbation AdditivePerturbation::from_blocks(const Partition& blocks,
                                                       const std::vector<std::pair<BlockIndex, TransferMatrix>>& parts) {
  std::size_t n = partition_size(blocks);
  auto off = block_offsets(blocks);
  TransferMatrix d = TransferMatrix::zero(n, n);
  std::vector<BlockIndex> mask;
  for (const auto& [idx, value] : parts) {
    auto [a, b] = idx;
    if (a >= blocks.size() || b >= blocks.size()) throw InvalidArgument("block index out of range");
    if (value.rows() != blocks[a].size || value.cols() != blocks[b].size)
      throw DimensionMismatch("perturbation block (" + blocks[a].label + "," + blocks[b].label + ") has wrong shape");
    d = d.with_slice(off[a], off[b], value);
    mask.push_back(idx);
  }
  return {d.with_partition(blocks, blocks), std::move(mask)};
}

RealizationSystem build_plant_controller(const TransferMatrix& g, const TransferMatrix& k) {
  const std::size_t p = g.rows(), m = g.cols();
  if (k.rows() != m || k.cols() != p) throw DimensionMismatch("controller must be m x p for a p x m plant");
  if (!g.is_proper()) throw ImproperBlock("plant G is improper");
  if (!k.is_proper()) throw ImproperBlock("controller K is improper");
  TransferMatrix r = TransferMatrix::from_blocks({{zeros(p, p), g}, {k, zeros(m, m)}});
  return {r, {{"y", p}, {"u", m}}};
}

RealizationSystem build_state_feedback(const StateSpace& ss, const TransferMatrix& k) {
  const std::size_t n = ss.states(), m = ss.inputs();
  if (k.rows() != m || k.cols() != n) throw DimensionMismatch("state-feedback gain must be m x n");
  TransferMatrix imr = TransferMatrix::from_blocks({{shift_minus(ss.A), -ss.B.to_transfer()},
                                                    {-k, TransferMatrix::identity(m)}});
  return {TransferMatrix::identity(n + m) - imr, {{"x", n}, {"u", m}}};
}

RealizationSystem build_sf_sls(const StateSpace& ss, const TransferMatrix& phi_x, const TransferMatrix& phi_u) {
  const std::size_t n = ss.states(), m = ss.inputs();
  if (phi_x.rows() != n || phi_x.cols() != n) throw DimensionMismatch("Phi_x must be n x n");
  if (phi_u.rows() != m || phi_u.cols() != n) throw DimensionMismatch("Phi_u must be m x n");
  TransferMatrix zx = times_z(phi_x), zu = times_z(phi_u);
  if (!zx.is_proper()) throw NotStrictlyProper("z Phi_x is improper");
  if (!zu.is_proper()) throw NotStrictlyProper("z Phi_u is improper");
  TransferMatrix imr = TransferMatrix::from_blocks({
      {shift_minus(ss.A), -ss.B.to_transfer(), zeros(n, n)},
      {zeros(m, n), TransferMatrix::identity(m), -zu},
      {-TransferMatrix::identity(n), zeros(n, m), zx},
  });
  return {TransferMatrix::identity(2 * n + m) - imr, {{"x", n}, {"u", m}, {"delta", n}}};
}

RealizationSystem build_output_feedback(const StateSpace& ss, const TransferMatrix& k) {
  const std::size_t n = ss.states(), m = ss.inputs(), p = ss.outputs();
  if (k.rows() != m || k.cols() != p) throw DimensionMismatch("output-feedback controller must be m x p");
  TransferMatrix imr = TransferMatrix::from_blocks({
      {shift_minus(ss.A), -ss.B.to_transfer(), zeros(n, p)},
      {zeros(m, n), TransferMatrix::identity(m), -k},
      {-ss.C.to_transfer(), -ss.D.to_transfer(), TransferMatrix::identity(p)},
  });
  return {TransferMatrix::identity(n + m + p) - imr, {{"x", n}, {"u", m}, {"y", p}}};
}

TransferMatrix stability_matrix(const RealizationSystem& sys) {
  try {
    return mat_inverse(sys.i_minus_r());
  } catch (const SingularMatrix&) {
    throw NoStabilityMatrix("I - R is singular; the loop has no stability matrix");
  }
}

bool verify_rs_identity(const RealizationSystem& sys, const TransferMatrix& s) {
  if (s.rows() != sys.size() || s.cols() != sys.size()) return false;
  TransferMatrix imr = sys.i_minus_r();
  return (imr * s).is_identity() && (s * imr).is_identity();
}

std::pair<RealizationSystem, TransferMatrix> apply_transformation(const RealizationSystem& sys, const TransferMatrix& s,
                                                                  const Transformation& t) {
  if (t.T().rows() != sys.size()) throw DimensionMismatch("transformation does not match the realization");
  TransferMatrix r_eq = TransferMatrix::identity(sys.size()) - t.inverse() * sys.i_minus_r();
  TransferMatrix s_eq = (s * t.T()).with_partition(sys.blocks(), sys.blocks());
  return {RealizationSystem(r_eq, sys.blocks()), s_eq};
}

PerturbedStability perturbed_stability_detail(const TransferMatrix& s_hat, const AdditivePerturbation& delta,
                                              const TransferMatrix* r_hat) {
  require_square(s_hat, "stability matrix");
  const TransferMatrix& d = delta.delta();
  if (d.rows() != s_hat.rows()) throw DimensionMismatch("perturbation does not match the stability matrix");
  const std::size_t n = s_hat.rows();
  const TransferMatrix id = TransferMatrix::identity(n);

  PerturbedStability out;
  if (d.is_zero()) {
    out.s = s_hat;
    out.forms_agree = true;
  } else {
    TransferMatrix right, left;
    try {
      right = s_hat * mat_inverse(id - d * s_hat);
      left = mat_inverse(id - s_hat * d) * s_hat;
    } catch (const SingularMatrix&) {
      throw SingularPerturbedLoop("I - Delta S_hat is singular");
    }
    out.forms_agree = right == left;
    out.s = std::move(right);
  }
  if (r_hat) {
    try {
      out.direct_agrees = mat_inverse(id - *r_hat - d) == out.s;
    } catch (const SingularMatrix&) {
      out.direct_agrees = false;
    }
  }
  if (s_hat.has_partition()) out.s.set_partition(s_hat.row_blocks(), s_hat.col_blocks());
  return out;
}

TransferMatrix perturbed_stability(const TransferMatrix& s_hat, const AdditivePerturbation& delta,
                                   const TransferMatrix* r_hat) {
  PerturbedStability p = perturbed_stability_detail(s_hat, delta, r_hat);
  if (!p.forms_agree) throw IdentityCheckFailed("closed forms of S(Delta) disagree");
  if (p.direct_agrees && !*p.direct_agrees) throw IdentityCheckFailed("S(Delta) disagrees with (I - R - Delta)^-1");
  return std::move(p.s);
}

bool check_offdiagonal_properness(const RealizationSystem& sys, const AdditivePerturbation& delta) {
  if (delta.delta().rows() != sys.size() || delta.delta().cols() != sys.size()) return false;
  TransferMatrix r = (sys.R() + delta.delta()).with_partition(sys.blocks(), sys.blocks());
  const std::size_t nb = sys.blocks().size();
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t b = 0; b < nb; ++b)
      if (a != b && !r.block(a, b).is_proper()) return false;
  return true;
}

}  // namespace realstab
