#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "realstab/analysis.hpp"
#include "realstab/parameterizations.hpp"
#include "realstab/realization.hpp"
#include "realstab/transfer_matrix.hpp"

namespace realstab {

using BlockIndex = AdditivePerturbation::BlockIndex;

/// FIR norm ball {Delta : ||Delta||inf < radius} supported on the masked
/// blocks of a host partition.
struct UncertaintySpec {
  std::vector<BlockIndex> block_mask;
  double radius = 1.0;
  unsigned sample_order = 0;
  std::uint64_t seed = 0;
};

/// Coefficient grid of sampled FIR taps: multiples of 2^-20 in [-1, 1].
inline constexpr int kSampleCoeffBits = 20;
/// Grid the norm scale factor is truncated to.
inline constexpr int kSampleScaleBits = 30;
/// The ball fraction u is drawn from (0, 1 - kSampleMaxFraction].
inline constexpr double kSampleMaxFraction = 1e-6;

/// One sample from the ball. Masked blocks get FIR taps of order
/// sample_order, uniform on the coefficient grid, then the whole matrix is
/// scaled to H-infinity norm u * radius (u uniform, truncated toward zero).
/// Uses mt19937_64 seeded with spec.seed, so equal specs give equal output.
/// Throws EmptyMask, InvalidArgument (bad radius or mask block).
TransferMatrix sample_delta(const UncertaintySpec& spec, const Partition& host);

/// Which robust condition a sampled Delta is run through.
enum class Checker {
  direct,         ///< S_hat (I - Delta S_hat)^-1 on any realization
  iop_loop,       ///< same, on the plant-controller loop with G + Delta_G
  iop_condition,  ///< (I - Delta_G U)^-1
  sls_of,         ///< (I - [[dA, dB], [dC, dD]] Phi)^-1
};

std::string to_string(Checker c);
/// Throws InvalidArgument for an unknown name.
Checker checker_from_string(const std::string& s);

/// A nominal system plus the rule that turns a sampled host-sized Delta into
/// a verdict.
class RobustProblem {
 public:
  using Evaluate = std::function<StabilityVerdict(const TransferMatrix&)>;

  /// Margin 1 / ||S_hat||inf (a sufficient small-gain bound) when S_hat is
  /// stable. Throws NoStabilityMatrix.
  static RobustProblem direct(const RealizationSystem& sys, std::vector<BlockIndex> mask);
  /// Host (y, u), Delta_G in block (y, u). K = U Y^-1.
  static RobustProblem iop_loop(const TransferMatrix& g, const IopQuadruple& quad);
  static RobustProblem iop_condition(const IopQuadruple& quad);
  /// Host (x, u, y), perturbation in blocks (x,x), (x,u), (y,x), (y,u).
  static RobustProblem sls_of(const StateSpace& ss, const SlsOutputFeedback& p);

  Checker checker() const { return checker_; }
  const Partition& host() const { return host_; }
  const std::vector<BlockIndex>& default_mask() const { return mask_; }
  /// Analytic small-gain margin; nullopt when none applies.
  std::optional<double> margin() const { return margin_; }

  /// Throws SingularPerturbedLoop when the perturbed loop is singular.
  StabilityVerdict evaluate(const TransferMatrix& delta) const { return eval_(delta); }

 private:
  RobustProblem(Checker c, Partition host, std::vector<BlockIndex> mask, std::optional<double> margin, Evaluate eval)
      : checker_(c), host_(std::move(host)), mask_(std::move(mask)), margin_(margin), eval_(std::move(eval)) {}

  Checker checker_;
  Partition host_;
  std::vector<BlockIndex> mask_;
  std::optional<double> margin_;
  Evaluate eval_;
};

enum class CertificateKind { small_gain_iop, small_gain_sls_of, pointwise, monte_carlo };

std::string to_string(CertificateKind k);
CertificateKind certificate_kind_from_string(const std::string& s);

struct SampleStats {
  std::size_t n_samples = 0;
  std::size_t n_stable = 0;
  std::size_t n_marginal = 0;
  /// Includes singular loops and improper results.
  std::size_t n_unstable = 0;
  std::size_t n_singular = 0;
  double worst_sample_norm = 0.0;
  std::optional<double> min_nonstable_norm;
  /// Non-stable samples strictly inside the analytic margin. Always 0 for a
  /// sound margin.
  std::size_t soundness_violations = 0;
  friend bool operator==(const SampleStats&, const SampleStats&) = default;
};

struct Certificate {
  CertificateKind kind = CertificateKind::pointwise;
  /// Infinity when no perturbation size can destabilize; empty when no
  /// margin applies.
  std::optional<double> margin;
  StabilityVerdict verdict;
  std::optional<SampleStats> sample_stats;
  std::string condition_ref;
  std::optional<std::uint64_t> seed;
  friend bool operator==(const Certificate&, const Certificate&) = default;
};

/// epsilon = 1 / ||U||inf, verdict of the stacked quadruple.
Certificate small_gain_certificate(const IopQuadruple& quad);
/// epsilon = 1 / ||Phi||inf, verdict of the Phi block matrix.
Certificate small_gain_certificate(const SlsOutputFeedback& p);
/// One fixed Delta through the problem's condition. A singular loop yields an
/// unstable verdict with a singular witness.
Certificate pointwise_certificate(const RobustProblem& problem, const TransferMatrix& delta);

/// Runs n samples; sample 0 is Delta = 0 and sample i >= 1 uses seed + i.
/// An empty spec mask means the problem's default mask. Samples may run in
/// parallel (REALSTAB_THREADS caps the worker count); results are reduced in
/// index order so the certificate does not depend on scheduling. The verdict
/// is the worst sample verdict, taken from the lowest such index.
Certificate monte_carlo_certify(const RobustProblem& problem, const UncertaintySpec& spec, std::size_t n);

/// Constant Delta* of norm epsilon aligned with the peak singular vectors of
/// U, so that det(I - Delta* U) vanishes on the unit circle. Only conclusive
/// when the peak sits at omega = 0 or pi (within 1e-6), where U is real.
struct TightnessProbe {
  bool conclusive = false;
  double peak_omega = 0.0;
  double epsilon = 0.0;
  TransferMatrix delta;
  RationalFunction det;
  /// Determinant root closest to the unit circle.
  std::optional<std::complex<double>> root;
  double root_modulus = 0.0;
  std::string note;
};

/// Throws NotStable (U unstable) and InfiniteMargin (U = 0).
TightnessProbe worst_case_delta(const TransferMatrix& u_hat);

}  // namespace realstab
