#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "realstab/transfer_matrix.hpp"

namespace realstab {

/// Pole-modulus band treated as "on the unit circle".
inline constexpr double kStabilityTol = 1e-9;
/// Number of uniformly spaced frequencies in [0, pi] for the H-infinity grid.
inline constexpr std::size_t kHinfGridPoints = 4096;

enum class StabilityStatus { stable, marginal, unstable, improper };

std::string to_string(StabilityStatus s);
StabilityStatus status_from_string(const std::string& s);

/// Why a witness was recorded. det_root and singular come from determinant
/// tests (row/col are then 0).
enum class WitnessKind { pole, improper, det_root, singular };

std::string to_string(WitnessKind k);
WitnessKind witness_kind_from_string(const std::string& s);

/// One reason a matrix is not in RH-infinity: a pole of entry (row, col), an
/// improper entry, a root of a loop determinant, or an identically singular
/// loop.
struct Witness {
  std::size_t row = 0;
  std::size_t col = 0;
  std::optional<std::complex<double>> pole;
  double modulus = 0.0;
  WitnessKind kind = WitnessKind::pole;
  friend bool operator==(const Witness&, const Witness&) = default;
};

struct StabilityVerdict {
  StabilityStatus status = StabilityStatus::stable;
  std::vector<Witness> witnesses;

  bool stable() const { return status == StabilityStatus::stable; }
  friend bool operator==(const StabilityVerdict&, const StabilityVerdict&) = default;
};

/// Roots of a polynomial with multiplicity, via exact square-free
/// factorization, companion-matrix eigenvalues and Newton polishing.
std::vector<std::complex<double>> roots(const Polynomial& p);

/// Poles of f (roots of its canonical denominator), multiplicities kept.
std::vector<std::complex<double>> poles(const RationalFunction& f);

/// Classifies a single pole modulus.
StabilityStatus classify_modulus(double modulus, double tol = kStabilityTol);

/// improper > unstable > marginal > stable.
StabilityStatus worst(StabilityStatus a, StabilityStatus b);

/// RH-infinity membership test for every entry.
StabilityVerdict stability_verdict(const TransferMatrix& x);

/// Largest singular value of x(e^{i omega}).
double max_singular_value(const TransferMatrix& x, double omega);

/// H-infinity norm of a stable matrix: 4096-point grid on [0, pi] with
/// golden-section refinement around the largest grid values. Throws NotStable.
double hinf_norm(const TransferMatrix& x);

struct HinfPeak {
  double norm = 0.0;
  double omega = 0.0;
};
/// Like hinf_norm, also reporting the maximizing frequency.
HinfPeak hinf_peak(const TransferMatrix& x);

struct FrequencyPoint {
  double omega = 0.0;
  std::vector<double> singular_values;  // descending
};

/// Singular values at omega_k = pi*k/(n-1), k = 0..n-1 (omega = 0 when n = 1).
/// Throws PoleOnGrid if an entry has a pole within 1e-12 of a sample point.
std::vector<FrequencyPoint> freq_response(const TransferMatrix& x, std::size_t n_points);

}  // namespace realstab
