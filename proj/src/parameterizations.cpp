#include "realstab/parameterizations.hpp"

#include "realstab/errors.hpp"

namespace realstab {

namespace {

TransferMatrix eye(std::size_t n) { return TransferMatrix::identity(n); }

void require_stable(const TransferMatrix& x, const std::string& what) {
  StabilityVerdict v = stability_verdict(x);
  if (!v.stable()) throw NotStable(what + " is not in RH-infinity (" + to_string(v.status) + ")");
}

void require_shape(const TransferMatrix& x, std::size_t r, std::size_t c, const std::string& what) {
  if (x.rows() != r || x.cols() != c)
    throw DimensionMismatch(what + " must be " + std::to_string(r) + "x" + std::to_string(c) + ", got " +
                            std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
}

TransferMatrix inverse_or(const TransferMatrix& x, auto&& make_error) {
  try {
    return mat_inverse(x);
  } catch (const SingularMatrix&) {
    throw make_error();
  }
}

bool strictly_proper_stable(const TransferMatrix& x) { return x.is_strictly_proper() && stability_verdict(x).stable(); }

}  // namespace

// ---------------------------------------------------------------------------

TransferMatrix CoprimeFactorization::left() const { return TransferMatrix::from_blocks({{Ml, -Nl}, {-Vl, Ul}}); }

TransferMatrix CoprimeFactorization::right() const { return TransferMatrix::from_blocks({{Ur, Nr}, {Vr, Mr}}); }

bool CoprimeFactorization::verify() const { return (left() * right()).is_identity(); }

CoprimeFactorization coprime_from_gains(const StateSpace& ss, const RationalMatrix& f, const RationalMatrix& l) {
  const std::size_t n = ss.states(), m = ss.inputs(), p = ss.outputs();
  if (f.rows() != m || f.cols() != n) throw DimensionMismatch("state gain F must be m x n");
  if (l.rows() != n || l.cols() != p) throw DimensionMismatch("observer gain L must be n x p");
  const RationalMatrix af = ss.A + ss.B * f;
  const RationalMatrix al = ss.A + l * ss.C;
  if (!is_schur_stable(af)) throw NotStabilizing("A + BF is not Schur stable (F does not stabilize)");
  if (!is_schur_stable(al)) throw NotStabilizing("A + LC is not Schur stable (L does not stabilize)");

  const TransferMatrix rf = resolvent(af), rl = resolvent(al);
  const TransferMatrix B = ss.B.to_transfer(), C = ss.C.to_transfer(), D = ss.D.to_transfer();
  const TransferMatrix F = f.to_transfer(), L = l.to_transfer();
  const TransferMatrix cf = (ss.C + ss.D * f).to_transfer();
  const TransferMatrix bl = (ss.B + l * ss.D).to_transfer();

  CoprimeFactorization out;
  out.Ur = eye(p) - cf * rf * L;
  out.Nr = cf * rf * B + D;
  out.Vr = -(F * rf * L);
  out.Mr = eye(m) + F * rf * B;
  out.Ml = eye(p) + C * rl * L;
  out.Nl = C * rl * bl + D;
  out.Vl = -(F * rl * L);
  out.Ul = eye(m) - F * rl * bl;
  if (!out.verify()) throw IdentityCheckFailed("coprime factors do not satisfy the Bezout identity");
  return out;
}

TransferMatrix youla_plant(const CoprimeFactorization& cf, const TransferMatrix& p) {
  require_shape(p, cf.Ur.cols(), cf.Mr.rows(), "dual parameter P");
  TransferMatrix den = cf.Mr - cf.Vr * p;
  return (cf.Nr - cf.Ur * p) * inverse_or(den, [] { return SingularFactor("Mr - Vr P is singular"); });
}

TransferMatrix youla_controller(const CoprimeFactorization& cf, const TransferMatrix& q) {
  require_shape(q, cf.Mr.cols(), cf.Ur.rows(), "primal parameter Q");
  TransferMatrix den = cf.Ur - cf.Nr * q;
  return (cf.Vr - cf.Mr * q) * inverse_or(den, [] { return SingularFactor("Ur - Nr Q is singular"); });
}

YoulaPair::YoulaPair(TransferMatrix p, TransferMatrix q) : P(std::move(p)), Q(std::move(q)) {
  if (Q.rows() != P.cols() || Q.cols() != P.rows()) throw DimensionMismatch("Q must be m x p for a p x m P");
  require_stable(P, "dual parameter P");
  require_stable(Q, "primal parameter Q");
}

StabilityVerdict youla_pq_stability(const YoulaPair& pair) {
  TransferMatrix m = TransferMatrix::from_blocks({{eye(pair.P.rows()), pair.P}, {pair.Q, eye(pair.Q.rows())}});
  return stability_verdict(mat_inverse(m));
}

StabilityVerdict youla_robust_check(const TransferMatrix& q, const TransferMatrix& p_delta) {
  require_shape(p_delta, q.cols(), q.rows(), "perturbed dual parameter");
  require_stable(q, "primal parameter Q");
  require_stable(p_delta, "perturbed dual parameter P(Delta)");
  return stability_verdict(mat_inverse(eye(q.rows()) - q * p_delta));
}

// ---------------------------------------------------------------------------

IopQuadruple IopQuadruple::from_loop(const TransferMatrix& g, const TransferMatrix& k) {
  TransferMatrix s = stability_matrix(build_plant_controller(g, k));
  return {s.block(0, 0), s.block(0, 1), s.block(1, 0), s.block(1, 1), g};
}

TransferMatrix IopQuadruple::stacked() const {
  Partition b{{"y", Y.rows()}, {"u", U.rows()}};
  return TransferMatrix::from_blocks({{Y, W}, {U, Z}}).with_partition(b, b);
}

bool iop_verify(const TransferMatrix& g, const IopQuadruple& quad) {
  const std::size_t p = g.rows(), m = g.cols();
  auto shaped = [](const TransferMatrix& x, std::size_t r, std::size_t c) { return x.rows() == r && x.cols() == c; };
  if (!shaped(quad.Y, p, p) || !shaped(quad.W, p, m) || !shaped(quad.U, m, p) || !shaped(quad.Z, m, m)) return false;
  if (!(quad.Y - g * quad.U).is_identity()) return false;
  if (!(quad.W - g * quad.Z).is_zero()) return false;
  if (!(quad.W - quad.Y * g).is_zero()) return false;
  if (!(quad.Z - quad.U * g).is_identity()) return false;
  for (const auto* x : {&quad.Y, &quad.W, &quad.U, &quad.Z})
    if (!stability_verdict(*x).stable()) return false;
  return true;
}

TransferMatrix iop_controller(const IopQuadruple& quad) {
  if (quad.U.cols() != quad.Y.rows()) throw DimensionMismatch("U and Y do not conform");
  return quad.U * mat_inverse(quad.Y);
}

double iop_margin(const IopQuadruple& quad) {
  if (quad.U.is_zero()) return kInfiniteMargin;
  return 1.0 / hinf_norm(quad.U);
}

StabilityVerdict iop_robust_check(const TransferMatrix& u_hat, const TransferMatrix& delta_g) {
  require_shape(delta_g, u_hat.cols(), u_hat.rows(), "plant perturbation Delta_G");
  require_stable(delta_g, "plant perturbation Delta_G");
  return stability_verdict(mat_inverse(eye(delta_g.rows()) - delta_g * u_hat));
}

// ---------------------------------------------------------------------------

SlsStateFeedback sls_sf_make(const StateSpace& ss, TransferMatrix phi_x, TransferMatrix phi_u) {
  const std::size_t n = ss.states(), m = ss.inputs();
  require_shape(phi_x, n, n, "Phi_x");
  require_shape(phi_u, m, n, "Phi_u");
  TransferMatrix defect = shift_minus(ss.A) * phi_x - ss.B.to_transfer() * phi_u - eye(n);
  return {std::move(phi_x), std::move(phi_u), std::move(defect)};
}

SlsStateFeedback sls_sf_from_gain(const StateSpace& ss, const RationalMatrix& k) {
  if (k.rows() != ss.inputs() || k.cols() != ss.states()) throw DimensionMismatch("state-feedback gain must be m x n");
  const RationalMatrix ak = ss.A + ss.B * k;
  if (!is_schur_stable(ak)) throw NotStabilizing("A + BK is not Schur stable");
  TransferMatrix phi_x = resolvent(ak);
  TransferMatrix phi_u = k.to_transfer() * phi_x;
  return sls_sf_make(ss, std::move(phi_x), std::move(phi_u));
}

bool sls_sf_verify(const StateSpace& ss, const SlsStateFeedback& p) {
  if (p.phi_x.rows() != ss.states() || p.phi_x.cols() != ss.states()) return false;
  if (p.phi_u.rows() != ss.inputs() || p.phi_u.cols() != ss.states()) return false;
  return sls_sf_make(ss, p.phi_x, p.phi_u).defect.is_zero() && strictly_proper_stable(p.phi_x) &&
         strictly_proper_stable(p.phi_u);
}

TransferMatrix sls_sf_controller(const SlsStateFeedback& p) { return p.phi_u * mat_inverse(p.phi_x); }

SlsSfRobust sls_sf_robust(const StateSpace& ss_true, const TransferMatrix& phi_x, const TransferMatrix& phi_u) {
  SlsStateFeedback p = sls_sf_make(ss_true, phi_x, phi_u);
  const std::size_t n = ss_true.states();
  TransferMatrix inv = inverse_or(eye(n) + p.defect, [] { return SingularPerturbedLoop("I + Delta_SLS is singular"); });
  SlsSfRobust out;
  out.responses = vstack(phi_x, phi_u) * inv;
  out.verdict = stability_verdict(vstack(out.responses, inv));
  out.defect = std::move(p.defect);
  return out;
}

// ---------------------------------------------------------------------------

TransferMatrix SlsOutputFeedback::block() const {
  return TransferMatrix::from_blocks({{phi_xx, phi_xy}, {phi_ux, phi_uy}});
}

SlsOutputFeedback sls_of_make(const StateSpace& ss, TransferMatrix phi_xx, TransferMatrix phi_xy, TransferMatrix phi_ux,
                              TransferMatrix phi_uy) {
  const std::size_t n = ss.states(), m = ss.inputs(), p = ss.outputs();
  require_shape(phi_xx, n, n, "Phi_xx");
  require_shape(phi_xy, n, p, "Phi_xy");
  require_shape(phi_ux, m, n, "Phi_ux");
  require_shape(phi_uy, m, p, "Phi_uy");
  const TransferMatrix zia = shift_minus(ss.A), c = ss.C.to_transfer();
  SlsOutputFeedback out{std::move(phi_xx), std::move(phi_xy), std::move(phi_ux), std::move(phi_uy), {}, {}};
  out.defect1 = out.phi_xx * zia - out.phi_xy * c - eye(n);
  out.defect2 = out.phi_ux * zia - out.phi_uy * c;
  return out;
}

SlsOutputFeedback sls_of_from_controller(const StateSpace& ss, const TransferMatrix& k) {
  TransferMatrix s = stability_matrix(build_output_feedback(ss, k));
  return sls_of_make(ss, s.block(0, 0), s.block(0, 2), s.block(1, 0), s.block(1, 2));
}

bool sls_of_verify(const StateSpace& ss, const SlsOutputFeedback& p) {
  const std::size_t n = ss.states(), m = ss.inputs(), q = ss.outputs();
  auto shaped = [](const TransferMatrix& x, std::size_t r, std::size_t c) { return x.rows() == r && x.cols() == c; };
  if (!shaped(p.phi_xx, n, n) || !shaped(p.phi_xy, n, q) || !shaped(p.phi_ux, m, n) || !shaped(p.phi_uy, m, q))
    return false;
  const TransferMatrix zia = shift_minus(ss.A), b = ss.B.to_transfer();
  // [zI - A, -B] Phi = [I, 0]
  if (!(zia * p.phi_xx - b * p.phi_ux).is_identity()) return false;
  if (!(zia * p.phi_xy - b * p.phi_uy).is_zero()) return false;
  // Phi [zI - A; -C] = [I; 0]
  SlsOutputFeedback fresh = sls_of_make(ss, p.phi_xx, p.phi_xy, p.phi_ux, p.phi_uy);
  if (!fresh.defect1.is_zero() || !fresh.defect2.is_zero()) return false;
  return strictly_proper_stable(p.phi_xx) && strictly_proper_stable(p.phi_xy) && strictly_proper_stable(p.phi_ux) &&
         p.phi_uy.is_proper() && stability_verdict(p.phi_uy).stable();
}

TransferMatrix sls_of_controller(const SlsOutputFeedback& p, const RationalMatrix& d) {
  TransferMatrix k0 = p.phi_uy - p.phi_ux * mat_inverse(p.phi_xx) * p.phi_xy;
  if (d.rows() != k0.cols() || d.cols() != k0.rows()) throw DimensionMismatch("D must be p x m");
  if (d.is_zero()) return k0;
  return k0 * mat_inverse(eye(k0.cols()) + d.to_transfer() * k0);
}

TransferMatrix sls_of_perturbed_response(const SlsOutputFeedback& p) {
  const std::size_t n = p.phi_xx.rows(), m = p.phi_ux.rows();
  TransferMatrix inv =
      inverse_or(eye(n) + p.defect1, [] { return SingularPerturbedLoop("I + Delta_1 is singular"); });
  TransferMatrix left = TransferMatrix::from_blocks({{inv, TransferMatrix(n, m)}, {-(p.defect2 * inv), eye(m)}});
  return left * p.block();
}

SlsOfRobust sls_of_robust_check(const StateSpace& ss, const SlsOutputFeedback& p, const TransferMatrix& da,
                                const TransferMatrix& db, const TransferMatrix& dc, const TransferMatrix& dd) {
  const std::size_t n = ss.states(), m = ss.inputs(), q = ss.outputs();
  require_shape(da, n, n, "Delta_A");
  require_shape(db, n, m, "Delta_B");
  require_shape(dc, q, n, "Delta_C");
  require_shape(dd, q, m, "Delta_D");
  for (const auto& [x, name] : {std::pair{&da, "Delta_A"}, {&db, "Delta_B"}, {&dc, "Delta_C"}, {&dd, "Delta_D"}})
    require_stable(*x, name);

  SlsOfRobust out;
  TransferMatrix delta = TransferMatrix::from_blocks({{da, db}, {dc, dd}});
  out.psi = inverse_or(eye(n + q) - delta * p.block(),
                       [] { return SingularPerturbedLoop("I - Delta Phi is singular"); });
  out.verdict = stability_verdict(out.psi);

  // Same question asked of the perturbed output-feedback realization.
  RealizationSystem sys = build_output_feedback(ss, sls_of_controller(p, ss.D));
  TransferMatrix s_hat = stability_matrix(sys);
  auto pert = AdditivePerturbation::from_blocks(sys.blocks(), {{{0, 0}, da}, {{0, 1}, db}, {{2, 0}, dc}, {{2, 1}, dd}});
  out.direct = stability_verdict(perturbed_stability(s_hat, pert));
  out.agree = out.verdict.status == out.direct.status;
  return out;
}

double sls_of_margin(const SlsOutputFeedback& p) {
  TransferMatrix b = p.block();
  if (b.is_zero()) return kInfiniteMargin;
  return 1.0 / hinf_norm(b);
}

// ---------------------------------------------------------------------------

TransferMatrix mu_m_matrix(const TransferMatrix& s_hat, const Transformation& t, const TransferMatrix& f_z) {
  if (f_z.cols() != s_hat.rows() || t.T().rows() != s_hat.cols())
    throw DimensionMismatch("F_z S_hat T does not conform");
  require_stable(s_hat, "nominal stability matrix");
  return f_z * s_hat.without_partition() * t.T();
}

MuTest mu_destab_test(const TransferMatrix& m, const TransferMatrix& delta) {
  require_shape(delta, m.cols(), m.rows(), "Delta");
  const TransferMatrix loop = eye(m.rows()) - m * delta;
  MuTest out;
  out.det = determinant(loop);
  if (out.det.is_zero()) {
    out.singular = true;
    out.destabilizing = true;
    out.verdict.status = StabilityStatus::unstable;
    out.verdict.witnesses.push_back({0, 0, std::nullopt, 0.0, WitnessKind::singular});
    return out;
  }
  out.verdict = stability_verdict(m * mat_inverse(loop));
  for (const auto& r : roots(out.det.num())) {
    const double mod = std::abs(r);
    StabilityStatus s = classify_modulus(mod);
    if (s == StabilityStatus::stable) continue;
    out.verdict.status = worst(out.verdict.status, s);
    out.verdict.witnesses.push_back({0, 0, r, mod, WitnessKind::det_root});
  }
  out.destabilizing = !out.verdict.stable();
  return out;
}

}  // namespace realstab
