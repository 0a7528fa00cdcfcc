#include "realstab/robust.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "realstab/errors.hpp"

namespace realstab {

namespace {

TransferMatrix random_fir_block(std::mt19937_64& rng, std::size_t rows, std::size_t cols, unsigned order) {
  const std::int64_t scale = std::int64_t{1} << kSampleCoeffBits;
  std::uniform_int_distribution<std::int64_t> tap(-scale, scale);
  const Polynomial den = Polynomial::monomial(static_cast<int>(order));
  TransferMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      // sum_k c_k z^-k over z^order: tap k multiplies z^(order - k).
      std::vector<Rational> num(order + 1);
      for (unsigned k = 0; k <= order; ++k) num[order - k] = Rational(tap(rng), scale);
      out(i, j) = RationalFunction(Polynomial(std::move(num)), den);
    }
  return out;
}

StabilityVerdict singular_verdict() {
  StabilityVerdict v;
  v.status = StabilityStatus::unstable;
  v.witnesses.push_back({0, 0, std::nullopt, 0.0, WitnessKind::singular});
  return v;
}

StabilityVerdict verdict_or_singular(const RobustProblem& problem, const TransferMatrix& delta) {
  try {
    return problem.evaluate(delta);
  } catch (const SingularPerturbedLoop&) {
    return singular_verdict();
  }
}

// S_hat (I - Delta S_hat)^-1 restricted to the mask, without the cross-checks
// of perturbed_stability (those are exercised elsewhere; sampling wants speed).
StabilityVerdict perturbed_verdict(const TransferMatrix& s_hat, const TransferMatrix& delta) {
  const TransferMatrix d = delta.without_partition();
  if (d.is_zero()) return stability_verdict(s_hat);
  TransferMatrix loop = TransferMatrix::identity(d.rows()) - d * s_hat;
  try {
    return stability_verdict(s_hat * mat_inverse(loop));
  } catch (const SingularMatrix&) {
    throw SingularPerturbedLoop("I - Delta S_hat is singular");
  }
}

std::size_t worker_count(std::size_t n) {
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("REALSTAB_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) workers = std::min(workers, static_cast<std::size_t>(cap));
  }
  return std::min(workers, n);
}

double inverse_norm(const TransferMatrix& x) {
  if (x.is_zero()) return kInfiniteMargin;
  return 1.0 / hinf_norm(x);
}

}  // namespace

// ---------------------------------------------------------------------------

namespace {

struct Sample {
  TransferMatrix delta;
  double norm = 0.0;
};

Sample draw_sample(const UncertaintySpec& spec, const Partition& host) {
  if (spec.block_mask.empty()) throw EmptyMask("uncertainty mask selects no block");
  if (!(spec.radius > 0) || !std::isfinite(spec.radius)) throw InvalidArgument("radius must be positive and finite");
  for (const auto& [bi, bj] : spec.block_mask)
    if (bi >= host.size() || bj >= host.size())
      throw InvalidArgument("mask block (" + std::to_string(bi) + ", " + std::to_string(bj) + ") outside the host");

  std::vector<BlockIndex> mask = spec.block_mask;
  std::sort(mask.begin(), mask.end());
  mask.erase(std::unique(mask.begin(), mask.end()), mask.end());

  std::mt19937_64 rng(spec.seed);
  const std::vector<std::size_t> off = block_offsets(host);
  TransferMatrix delta(partition_size(host), partition_size(host));
  for (const auto& [bi, bj] : mask)
    delta = delta.with_slice(off[bi], off[bj], random_fir_block(rng, host[bi].size, host[bj].size, spec.sample_order));
  delta.set_partition(host, host);

  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const double target = std::min(u, 1.0 - kSampleMaxFraction) * spec.radius;
  const double norm = hinf_norm(delta);
  if (norm == 0.0) return {delta, 0.0};
  const Rational factor = quantize_toward_zero(target / norm, kSampleScaleBits);
  return {delta.scaled(RationalFunction(factor)), to_double(factor) * norm};
}

}  // namespace

TransferMatrix sample_delta(const UncertaintySpec& spec, const Partition& host) { return draw_sample(spec, host).delta; }

// ---------------------------------------------------------------------------

std::string to_string(Checker c) {
  switch (c) {
    case Checker::direct: return "direct";
    case Checker::iop_loop: return "iop-loop";
    case Checker::iop_condition: return "iop-condition";
    case Checker::sls_of: return "sls-of";
  }
  return "?";
}

Checker checker_from_string(const std::string& s) {
  if (s == "direct") return Checker::direct;
  if (s == "iop-loop") return Checker::iop_loop;
  if (s == "iop-condition") return Checker::iop_condition;
  if (s == "sls-of") return Checker::sls_of;
  throw InvalidArgument("unknown condition '" + s + "'");
}

RobustProblem RobustProblem::direct(const RealizationSystem& sys, std::vector<BlockIndex> mask) {
  TransferMatrix s_hat = stability_matrix(sys).without_partition();
  std::optional<double> margin;
  if (stability_verdict(s_hat).stable()) margin = inverse_norm(s_hat);
  return {Checker::direct, sys.blocks(), std::move(mask), margin,
          [s_hat](const TransferMatrix& d) { return perturbed_verdict(s_hat, d); }};
}

RobustProblem RobustProblem::iop_loop(const TransferMatrix& g, const IopQuadruple& quad) {
  TransferMatrix s_hat =
      stability_matrix(build_plant_controller(g, iop_controller(quad))).without_partition();
  Partition host{{"y", g.rows()}, {"u", g.cols()}};
  return {Checker::iop_loop, host, {{0, 1}}, iop_margin(quad),
          [s_hat](const TransferMatrix& d) { return perturbed_verdict(s_hat, d); }};
}

RobustProblem RobustProblem::iop_condition(const IopQuadruple& quad) {
  Partition host{{"y", quad.U.cols()}, {"u", quad.U.rows()}};
  TransferMatrix u = quad.U;
  return {Checker::iop_condition, host, {{0, 1}}, iop_margin(quad), [u](const TransferMatrix& d) {
            try {
              return iop_robust_check(u, d.slice(0, u.cols(), u.cols(), u.rows()));
            } catch (const SingularMatrix&) {
              throw SingularPerturbedLoop("I - Delta_G U is singular");
            }
          }};
}

RobustProblem RobustProblem::sls_of(const StateSpace& ss, const SlsOutputFeedback& p) {
  const std::size_t n = ss.states(), m = ss.inputs(), q = ss.outputs();
  Partition host{{"x", n}, {"u", m}, {"y", q}};
  TransferMatrix phi = p.block();
  return {Checker::sls_of, host, {{0, 0}, {0, 1}, {2, 0}, {2, 1}}, sls_of_margin(p),
          [phi, n, m, q](const TransferMatrix& d) {
            // Rows (x, y), columns (x, u) of the host Delta.
            TransferMatrix compact =
                vstack(d.slice(0, 0, n, n + m), d.slice(n + m, 0, q, n + m));
            if (compact.is_zero()) return stability_verdict(TransferMatrix::identity(n + q));
            try {
              return stability_verdict(mat_inverse(TransferMatrix::identity(n + q) - compact * phi));
            } catch (const SingularMatrix&) {
              throw SingularPerturbedLoop("I - Delta Phi is singular");
            }
          }};
}

// ---------------------------------------------------------------------------

std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::small_gain_iop: return "small-gain-IOP";
    case CertificateKind::small_gain_sls_of: return "small-gain-SLS-OF";
    case CertificateKind::pointwise: return "pointwise";
    case CertificateKind::monte_carlo: return "monte-carlo";
  }
  return "?";
}

CertificateKind certificate_kind_from_string(const std::string& s) {
  for (auto k : {CertificateKind::small_gain_iop, CertificateKind::small_gain_sls_of, CertificateKind::pointwise,
                 CertificateKind::monte_carlo})
    if (to_string(k) == s) return k;
  throw ParseError("unknown certificate kind '" + s + "'");
}

Certificate small_gain_certificate(const IopQuadruple& quad) {
  Certificate c;
  c.kind = CertificateKind::small_gain_iop;
  c.verdict = stability_verdict(quad.stacked());
  if (c.verdict.stable()) c.margin = iop_margin(quad);
  c.condition_ref = "iop-small-gain";
  return c;
}

Certificate small_gain_certificate(const SlsOutputFeedback& p) {
  Certificate c;
  c.kind = CertificateKind::small_gain_sls_of;
  c.verdict = stability_verdict(p.block());
  if (c.verdict.stable()) c.margin = sls_of_margin(p);
  c.condition_ref = "sls-of-small-gain";
  return c;
}

Certificate pointwise_certificate(const RobustProblem& problem, const TransferMatrix& delta) {
  Certificate c;
  c.kind = CertificateKind::pointwise;
  c.margin = problem.margin();
  c.verdict = verdict_or_singular(problem, delta);
  c.condition_ref = to_string(problem.checker());
  return c;
}

Certificate monte_carlo_certify(const RobustProblem& problem, const UncertaintySpec& spec, std::size_t n) {
  if (n == 0) throw InvalidArgument("monte_carlo_certify needs at least one sample");
  UncertaintySpec base = spec;
  if (base.block_mask.empty()) base.block_mask = problem.default_mask();
  // Validate once up front so a bad spec throws instead of filling the stats.
  UncertaintySpec probe = base;
  (void)sample_delta(probe, problem.host());

  struct Outcome {
    StabilityVerdict verdict;
    double norm = 0.0;
    bool singular = false;
  };
  std::vector<Outcome> results(n);
  auto run = [&](std::size_t i) {
    Outcome& out = results[i];
    TransferMatrix delta;
    if (i == 0) {
      const std::size_t size = partition_size(problem.host());
      delta = TransferMatrix(size, size).with_partition(problem.host(), problem.host());
    } else {
      UncertaintySpec s = base;
      s.seed = base.seed + i;
      Sample drawn = draw_sample(s, problem.host());
      delta = std::move(drawn.delta);
      out.norm = drawn.norm;
    }
    try {
      out.verdict = problem.evaluate(delta);
    } catch (const SingularPerturbedLoop&) {
      out.verdict = singular_verdict();
      out.singular = true;
    }
  };

  const std::size_t workers = worker_count(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) run(i);
      });
    for (auto& t : pool) t.join();
  }

  Certificate c;
  c.kind = CertificateKind::monte_carlo;
  c.margin = problem.margin();
  c.condition_ref = to_string(problem.checker());
  c.seed = spec.seed;
  SampleStats st;
  st.n_samples = n;
  for (std::size_t i = 0; i < n; ++i) {
    const Outcome& o = results[i];
    switch (o.verdict.status) {
      case StabilityStatus::stable: ++st.n_stable; break;
      case StabilityStatus::marginal: ++st.n_marginal; break;
      default: ++st.n_unstable; break;
    }
    if (o.singular) ++st.n_singular;
    st.worst_sample_norm = std::max(st.worst_sample_norm, o.norm);
    if (!o.verdict.stable()) {
      st.min_nonstable_norm = std::min(st.min_nonstable_norm.value_or(o.norm), o.norm);
      if (problem.margin() && o.norm < *problem.margin()) ++st.soundness_violations;
    }
    if (i == 0 || worst(c.verdict.status, o.verdict.status) != c.verdict.status) c.verdict = o.verdict;
  }
  c.sample_stats = st;
  return c;
}

// ---------------------------------------------------------------------------

TightnessProbe worst_case_delta(const TransferMatrix& u_hat) {
  const TransferMatrix u = u_hat.without_partition();
  HinfPeak peak = hinf_peak(u);  // throws NotStable
  if (peak.norm == 0.0) throw InfiniteMargin("U = 0: every perturbation size is covered");

  TightnessProbe out;
  out.epsilon = 1.0 / peak.norm;
  out.peak_omega = peak.omega;
  constexpr double kSnap = 1e-6;
  int side = 0;
  if (std::abs(peak.omega) <= kSnap) side = 1;
  else if (std::abs(peak.omega - std::numbers::pi) <= kSnap) side = -1;
  if (side == 0) {
    out.note = "complex-peak: tightness probe inconclusive";
    return out;
  }
  out.peak_omega = side == 1 ? 0.0 : std::numbers::pi;

  // At z = +-1 the response is real; evaluate it exactly.
  Eigen::MatrixXd at(u.rows(), u.cols());
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t j = 0; j < u.cols(); ++j)
      at(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(u(i, j).eval(Rational(side)));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(at, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sigma = svd.singularValues()(0);
  Eigen::MatrixXd d = svd.matrixV().col(0) * svd.matrixU().col(0).transpose() / sigma;

  out.delta = TransferMatrix(u.cols(), u.rows());
  for (std::size_t i = 0; i < u.cols(); ++i)
    for (std::size_t j = 0; j < u.rows(); ++j)
      out.delta(i, j) = RationalFunction(from_double(d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
  out.det = determinant(TransferMatrix::identity(u.cols()) - out.delta * u);
  if (out.det.is_zero()) {
    out.conclusive = true;
    out.root_modulus = 1.0;
    out.note = "determinant vanishes identically";
    return out;
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : roots(out.det.num())) {
    if (std::abs(std::abs(r) - 1.0) < best) {
      best = std::abs(std::abs(r) - 1.0);
      out.root = r;
      out.root_modulus = std::abs(r);
    }
  }
  out.conclusive = out.root && best <= kSnap;
  out.note = out.conclusive ? "boundary root on the unit circle" : "no determinant root within 1e-6 of the unit circle";
  return out;
}

}  // namespace realstab
