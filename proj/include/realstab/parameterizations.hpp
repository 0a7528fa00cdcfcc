#pragma once

#include <limits>

#include "realstab/analysis.hpp"
#include "realstab/realization.hpp"
#include "realstab/state_space.hpp"
#include "realstab/transfer_matrix.hpp"

namespace realstab {

inline constexpr double kInfiniteMargin = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Doubly coprime factorization and primal-dual Youla parameters.

/// [[Ml, -Nl], [-Vl, Ul]] * [[Ur, Nr], [Vr, Mr]] = I with G = Nr Mr^-1 =
/// Ml^-1 Nl and K = Vr Ur^-1 = Ul^-1 Vl (positive feedback u = K y).
struct CoprimeFactorization {
  TransferMatrix Ml, Nl, Vl, Ul;
  TransferMatrix Ur, Nr, Vr, Mr;

  TransferMatrix left() const;
  TransferMatrix right() const;
  /// left() * right() == I, exactly.
  bool verify() const;
};

/// State-space construction from gains F (m x n) and L (n x p) with A + BF
/// and A + LC Schur stable. The identity is checked before returning.
/// Throws NotStabilizing or IdentityCheckFailed.
CoprimeFactorization coprime_from_gains(const StateSpace& ss, const RationalMatrix& f, const RationalMatrix& l);

/// G = (Nr - Ur P)(Mr - Vr P)^-1. Throws SingularFactor.
TransferMatrix youla_plant(const CoprimeFactorization& cf, const TransferMatrix& p);
/// K = (Vr - Mr Q)(Ur - Nr Q)^-1. Throws SingularFactor.
TransferMatrix youla_controller(const CoprimeFactorization& cf, const TransferMatrix& q);

struct YoulaPair {
  TransferMatrix P;  ///< dual parameter, p x m
  TransferMatrix Q;  ///< primal parameter, m x p
  /// Throws NotStable unless both are in RH-infinity; DimensionMismatch.
  YoulaPair(TransferMatrix p, TransferMatrix q);
};

/// Verdict of [[I, P], [Q, I]]^-1. Throws SingularMatrix.
StabilityVerdict youla_pq_stability(const YoulaPair& pair);

/// Verdict of (I - Q P(Delta))^-1. Throws NotStable for unstable inputs and
/// SingularMatrix.
StabilityVerdict youla_robust_check(const TransferMatrix& q, const TransferMatrix& p_delta);

// ---------------------------------------------------------------------------
// Input-output parameterization.

/// The four closed-loop maps of the plant-controller loop:
/// [[Y, W], [U, Z]] = [[I, -G], [-K, I]]^-1.
struct IopQuadruple {
  TransferMatrix Y, W, U, Z;
  TransferMatrix G;  ///< plant the quadruple was built for

  /// Reads the quadruple off the stability matrix of the (G, K) loop.
  /// Throws NoStabilityMatrix.
  static IopQuadruple from_loop(const TransferMatrix& g, const TransferMatrix& k);
  /// [[Y, W], [U, Z]] partitioned (y, u).
  TransferMatrix stacked() const;
};

/// [I, -G] [[Y, W], [U, Z]] = [I, 0], [[Y, W], [U, Z]] [-G; I] = [0; I], and
/// all four blocks stable.
bool iop_verify(const TransferMatrix& g, const IopQuadruple& quad);

/// K = U Y^-1. Throws SingularMatrix.
TransferMatrix iop_controller(const IopQuadruple& quad);

/// 1 / ||U||inf, or infinity when U = 0.
double iop_margin(const IopQuadruple& quad);

/// Verdict of (I - Delta_G U)^-1. Throws NotStable and SingularMatrix.
StabilityVerdict iop_robust_check(const TransferMatrix& u_hat, const TransferMatrix& delta_g);

// ---------------------------------------------------------------------------
// State-feedback system level parameterization.

struct SlsStateFeedback {
  TransferMatrix phi_x;   ///< n x n
  TransferMatrix phi_u;   ///< m x n
  TransferMatrix defect;  ///< [zI - A, -B] [phi_x; phi_u] - I
};

/// Attaches the defect for this plant.
SlsStateFeedback sls_sf_make(const StateSpace& ss, TransferMatrix phi_x, TransferMatrix phi_u);

/// Phi_x = (zI - (A + BK))^-1, Phi_u = K Phi_x. Throws NotStabilizing.
SlsStateFeedback sls_sf_from_gain(const StateSpace& ss, const RationalMatrix& k);

/// Zero defect, both responses strictly proper and stable.
bool sls_sf_verify(const StateSpace& ss, const SlsStateFeedback& p);

/// K = Phi_u Phi_x^-1. Throws SingularMatrix.
TransferMatrix sls_sf_controller(const SlsStateFeedback& p);

struct SlsSfRobust {
  TransferMatrix defect;     ///< against the true plant
  StabilityVerdict verdict;  ///< of [responses; (I + defect)^-1]
  TransferMatrix responses;  ///< [phi_x; phi_u] (I + defect)^-1
};

/// Throws SingularPerturbedLoop if I + defect is singular.
SlsSfRobust sls_sf_robust(const StateSpace& ss_true, const TransferMatrix& phi_x, const TransferMatrix& phi_u);

// ---------------------------------------------------------------------------
// Output-feedback system level parameterization.

struct SlsOutputFeedback {
  TransferMatrix phi_xx, phi_xy, phi_ux, phi_uy;
  /// [[Phi_xx, Phi_xy], [Phi_ux, Phi_uy]] [zI - A; -C] = [I + defect1; defect2].
  TransferMatrix defect1, defect2;

  /// [[Phi_xx, Phi_xy], [Phi_ux, Phi_uy]].
  TransferMatrix block() const;
};

/// Attaches both defects for this plant.
SlsOutputFeedback sls_of_make(const StateSpace& ss, TransferMatrix phi_xx, TransferMatrix phi_xy, TransferMatrix phi_ux,
                              TransferMatrix phi_uy);

/// Reads the responses off the stability matrix of the output-feedback loop.
/// Throws NoStabilityMatrix.
SlsOutputFeedback sls_of_from_controller(const StateSpace& ss, const TransferMatrix& k);

/// Both affine constraints hold exactly; Phi_xx, Phi_xy, Phi_ux strictly
/// proper and stable; Phi_uy proper and stable.
bool sls_of_verify(const StateSpace& ss, const SlsOutputFeedback& p);

/// K0 = Phi_uy - Phi_ux Phi_xx^-1 Phi_xy, K = K0 (I + D K0)^-1.
/// Throws SingularMatrix.
TransferMatrix sls_of_controller(const SlsOutputFeedback& p, const RationalMatrix& d);

/// [[(I + D1)^-1, 0], [-D2 (I + D1)^-1, I]] * block(). Throws
/// SingularPerturbedLoop.
TransferMatrix sls_of_perturbed_response(const SlsOutputFeedback& p);

struct SlsOfRobust {
  TransferMatrix psi;         ///< (I - [[dA, dB], [dC, dD]] block())^-1
  StabilityVerdict verdict;   ///< of psi
  StabilityVerdict direct;    ///< of the perturbed output-feedback loop
  bool agree = false;         ///< verdict.status == direct.status
};

/// Throws NotStable (unstable perturbation), SingularPerturbedLoop.
SlsOfRobust sls_of_robust_check(const StateSpace& ss, const SlsOutputFeedback& p, const TransferMatrix& da,
                                const TransferMatrix& db, const TransferMatrix& dc, const TransferMatrix& dd);

/// 1 / ||block()||inf over the whole matrix, or infinity when it is zero.
double sls_of_margin(const SlsOutputFeedback& p);

// ---------------------------------------------------------------------------
// M-matrix destabilization test.

/// M = F_z S_hat T. Throws NotStable and DimensionMismatch.
TransferMatrix mu_m_matrix(const TransferMatrix& s_hat, const Transformation& t, const TransferMatrix& f_z);

struct MuTest {
  RationalFunction det;      ///< det(I - M Delta)
  StabilityVerdict verdict;  ///< of M (I - M Delta)^-1 plus determinant roots
  bool singular = false;     ///< det identically zero
  bool destabilizing = false;
};

/// Determinant roots with modulus >= 1 - tol are destabilizing witnesses.
MuTest mu_destab_test(const TransferMatrix& m, const TransferMatrix& delta);

}  // namespace realstab
