#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "realstab/state_space.hpp"
#include "realstab/transfer_matrix.hpp"

namespace realstab {

/// A closed loop described by eta = R eta + d. R is square and carries the
/// same signal partition on rows and columns. Off-diagonal signal blocks are
/// proper; diagonal blocks may be improper (zI - A).
class RealizationSystem {
 public:
  /// Validates shape, partition and off-diagonal properness (ImproperBlock).
  RealizationSystem(TransferMatrix r, Partition signals);

  const TransferMatrix& R() const { return r_; }
  const Partition& blocks() const { return r_.row_blocks(); }
  std::vector<std::string> signals() const;
  std::size_t size() const { return r_.rows(); }
  /// Index of the block with this label; throws InvalidArgument.
  std::size_t block_index(const std::string& label) const;
  /// First row of block b.
  std::size_t offset(std::size_t b) const { return block_offsets(blocks())[b]; }

  TransferMatrix i_minus_r() const;

 private:
  TransferMatrix r_;
};

/// Change of disturbance basis d = T w. T must be square and invertible.
class Transformation {
 public:
  explicit Transformation(TransferMatrix t);
  const TransferMatrix& T() const { return t_; }
  const TransferMatrix& inverse() const { return t_inv_; }

 private:
  TransferMatrix t_;
  TransferMatrix t_inv_;
};

/// Structured additive perturbation R(Delta) = R_hat + Delta. Only blocks in
/// the mask may be nonzero.
class AdditivePerturbation {
 public:
  using BlockIndex = std::pair<std::size_t, std::size_t>;

  /// delta must be square. When it carries a partition, entries outside the
  /// mask must be zero (InvalidArgument).
  AdditivePerturbation(TransferMatrix delta, std::vector<BlockIndex> mask);

  static AdditivePerturbation zero(const Partition& blocks);
  /// Places each (block, value) pair into an otherwise zero matrix.
  static AdditivePerturbation from_blocks(const Partition& blocks,
                                          const std::vector<std::pair<BlockIndex, TransferMatrix>>& parts);

  const TransferMatrix& delta() const { return delta_; }
  const std::vector<BlockIndex>& mask() const { return mask_; }

 private:
  TransferMatrix delta_;
  std::vector<BlockIndex> mask_;
};

/// R = [[0, G], [K, 0]] over signals (y, u).
RealizationSystem build_plant_controller(const TransferMatrix& g, const TransferMatrix& k);

/// I - R = [[zI - A, -B], [-K, I]] over signals (x, u).
RealizationSystem build_state_feedback(const StateSpace& ss, const TransferMatrix& k);

/// I - R = [[zI - A, -B, 0], [0, I, -z Phi_u], [-I, 0, z Phi_x]] over
/// signals (x, u, delta). Throws NotStrictlyProper unless z Phi_x and z Phi_u
/// are proper.
RealizationSystem build_sf_sls(const StateSpace& ss, const TransferMatrix& phi_x, const TransferMatrix& phi_u);

/// I - R = [[zI - A, -B, 0], [0, I, -K], [-C, -D, I]] over signals (x, u, y).
RealizationSystem build_output_feedback(const StateSpace& ss, const TransferMatrix& k);

/// S = (I - R)^-1. Throws NoStabilityMatrix when I - R is singular.
TransferMatrix stability_matrix(const RealizationSystem& sys);

/// (I - R) S == I and S (I - R) == I, exactly.
bool verify_rs_identity(const RealizationSystem& sys, const TransferMatrix& s);

/// R_eq = I - T^-1 (I - R), S_eq = S T.
std::pair<RealizationSystem, TransferMatrix> apply_transformation(const RealizationSystem& sys, const TransferMatrix& s,
                                                                  const Transformation& t);

struct PerturbedStability {
  TransferMatrix s;                    ///< S_hat (I - Delta S_hat)^-1
  bool forms_agree = false;            ///< equals (I - S_hat Delta)^-1 S_hat
  std::optional<bool> direct_agrees;   ///< equals (I - R_hat - Delta)^-1, when R_hat given
};

/// Stability under additive perturbation, computed by both closed forms and,
/// when r_hat is supplied, by direct inversion. Throws SingularPerturbedLoop
/// if I - Delta S_hat is singular.
PerturbedStability perturbed_stability_detail(const TransferMatrix& s_hat, const AdditivePerturbation& delta,
                                              const TransferMatrix* r_hat = nullptr);

/// As perturbed_stability_detail, returning S(Delta); throws
/// IdentityCheckFailed if the routes disagree.
TransferMatrix perturbed_stability(const TransferMatrix& s_hat, const AdditivePerturbation& delta,
                                   const TransferMatrix* r_hat = nullptr);

/// Every off-diagonal signal block of R_hat + Delta is proper.
bool check_offdiagonal_properness(const RealizationSystem& sys, const AdditivePerturbation& delta);

}  // namespace realstab
