#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "realstab/errors.hpp"
#include "realstab/parameterizations.hpp"
#include "test_support.hpp"

using namespace realstab;
using namespace realstab::testing;

namespace {

const RationalFunction z = RationalFunction::z();
const RationalFunction zi = RationalFunction::z_inv();

RationalFunction rf(const Polynomial& n, const Polynomial& d) { return {n, d}; }

bool is_fir(const TransferMatrix& x) {
  for (const auto& e : x.entries())
    if (!e.is_zero() && e.den() != Polynomial::monomial(e.den().degree())) return false;
  return true;
}

StateSpace integrator() { return {RationalMatrix{{q(0)}}, RationalMatrix{{q(1)}}, RationalMatrix{{q(1)}}, RationalMatrix{{q(0)}}}; }
StateSpace half_plant() {
  return {RationalMatrix{{q(1, 2)}}, RationalMatrix{{q(1)}}, RationalMatrix{{q(1)}}, RationalMatrix{{q(0)}}};
}

// Scalar loop with G = 1/z, K = 1/2.
IopQuadruple scalar_quad() { return IopQuadruple::from_loop(TransferMatrix{{zi}}, TransferMatrix{{q(1, 2)}}); }

bool loop_stable(const TransferMatrix& g, const TransferMatrix& k) {
  return stability_verdict(stability_matrix(build_plant_controller(g, k))).stable();
}

}  // namespace

TEST_CASE("coprime_from_gains") {
  SUBCASE("integrator with zero gains") {
    auto cf = coprime_from_gains(integrator(), RationalMatrix{{q(0)}}, RationalMatrix{{q(0)}});
    TransferMatrix one{{1}}, zero{{0}}, inv_z{{zi}};
    CHECK(cf.Mr == one);
    CHECK(cf.Ml == one);
    CHECK(cf.Ur == one);
    CHECK(cf.Ul == one);
    CHECK(cf.Nr == inv_z);
    CHECK(cf.Nl == inv_z);
    CHECK(cf.Vr == zero);
    CHECK(cf.Vl == zero);
  }
  SUBCASE("deadbeat gains give FIR factors") {
    auto cf = coprime_from_gains(half_plant(), RationalMatrix{{q(-1, 2)}}, RationalMatrix{{q(-1, 2)}});
    CHECK(cf.verify());
    for (const auto* x : {&cf.Ml, &cf.Nl, &cf.Vl, &cf.Ul, &cf.Ur, &cf.Nr, &cf.Vr, &cf.Mr}) CHECK(is_fir(*x));
  }
  SUBCASE("not stabilizing") {
    CHECK_THROWS_AS(coprime_from_gains(integrator(), RationalMatrix{{q(2)}}, RationalMatrix{{q(0)}}), NotStabilizing);
    CHECK_THROWS_AS(coprime_from_gains(integrator(), RationalMatrix{{q(0)}}, RationalMatrix{{q(-3)}}), NotStabilizing);
    CHECK_THROWS_AS(coprime_from_gains(integrator(), RationalMatrix(1, 2), RationalMatrix{{q(0)}}), DimensionMismatch);
  }
  SUBCASE("property: factors describe the plant and a stabilizing controller") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 12; ++t) {
      auto fx = random_stabilizable(rng, 1 + t % 3, 1 + t % 2, 1 + (t / 2) % 2);
      auto cf = coprime_from_gains(fx.ss, fx.F, fx.L);
      CHECK(cf.verify());
      const TransferMatrix g = fx.ss.transfer();
      CHECK(cf.Nr * mat_inverse(cf.Mr) == g);
      CHECK(mat_inverse(cf.Ml) * cf.Nl == g);
      const TransferMatrix k = cf.Vr * mat_inverse(cf.Ur);
      CHECK(mat_inverse(cf.Ul) * cf.Vl == k);
      CHECK(youla_controller(cf, TransferMatrix(k.rows(), k.cols())) == k);
      CHECK(youla_plant(cf, TransferMatrix(g.rows(), g.cols())) == g);
      CHECK(loop_stable(g, k));
    }
  }
}

TEST_CASE("youla_plant and youla_controller") {
  auto cf = coprime_from_gains(integrator(), RationalMatrix{{q(0)}}, RationalMatrix{{q(0)}});
  CHECK(youla_plant(cf, TransferMatrix{{0}}) == TransferMatrix{{zi}});
  CHECK(youla_controller(cf, TransferMatrix{{0}}).is_zero());
  for (auto qv : {q(1, 3), q(-1, 2), q(2)}) {
    // -q / (1 - q/z) = -q z / (z - q)
    RationalFunction expected(Polynomial{q(0), -qv}, lin(-qv, q(1)));
    CHECK(youla_controller(cf, TransferMatrix{{qv}}) == TransferMatrix{{expected}});
  }
  // Ur - Nr Q = 1 - q/z vanishes identically for Q = z, which is not in RH-inf
  // but exercises the singular-factor guard.
  CHECK_THROWS_AS(youla_controller(cf, TransferMatrix{{z}}), SingularFactor);
}

TEST_CASE("youla_pq_stability") {
  CHECK(youla_pq_stability(YoulaPair(TransferMatrix{{0}}, TransferMatrix{{zi.scaled(q(5))}})).stable());
  CHECK(youla_pq_stability(YoulaPair(TransferMatrix{{zi.scaled(q(5))}}, TransferMatrix{{0}})).stable());

  auto unstable = youla_pq_stability(YoulaPair(TransferMatrix{{zi.scaled(q(3, 2))}}, TransferMatrix{{zi.scaled(q(3, 2))}}));
  CHECK(unstable.status == StabilityStatus::unstable);
  for (const auto& w : unstable.witnesses) CHECK(w.modulus == doctest::Approx(1.5));

  auto stable = youla_pq_stability(YoulaPair(TransferMatrix{{zi.scaled(q(1, 2))}}, TransferMatrix{{zi.scaled(q(1, 2))}}));
  CHECK(stable.stable());

  CHECK_THROWS_AS(YoulaPair(TransferMatrix{{rf(Polynomial::constant(1), lin(q(-2), q(1)))}}, TransferMatrix{{0}}), NotStable);

  SUBCASE("property: matches the full loop verdict") {
    std::vector<TransferMatrix> params;
    for (auto c : {q(1, 2), q(3, 2), q(-1, 4), q(2), q(-3, 2), q(1, 5)}) params.push_back(TransferMatrix{{zi.scaled(c)}});
    params.push_back(TransferMatrix{{rf(Polynomial::constant(q(3, 2)), lin(q(-1, 2), q(1)))}});
    int stable_count = 0, unstable_count = 0;
    for (const auto& cf : {coprime_from_gains(integrator(), RationalMatrix{{q(0)}}, RationalMatrix{{q(0)}}),
                           coprime_from_gains(half_plant(), RationalMatrix{{q(-1, 2)}}, RationalMatrix{{q(-1, 2)}})}) {
      for (const auto& p : params)
        for (const auto& qq : params) {
          bool pq = youla_pq_stability(YoulaPair(p, qq)).stable();
          TransferMatrix g = youla_plant(cf, p), k = youla_controller(cf, qq);
          CHECK(loop_stable(g, k) == pq);
          (pq ? stable_count : unstable_count)++;
        }
    }
    CHECK(stable_count >= 3);
    CHECK(unstable_count >= 3);
  }
}

TEST_CASE("youla_robust_check") {
  CHECK(youla_robust_check(TransferMatrix{{0}}, TransferMatrix{{zi.scaled(q(7))}}).stable());
  auto marginal = youla_robust_check(TransferMatrix{{1}}, TransferMatrix{{zi}});
  CHECK(marginal.status == StabilityStatus::marginal);
  CHECK(youla_robust_check(TransferMatrix{{q(1, 2)}}, TransferMatrix{{zi}}).stable());
  CHECK_THROWS_AS(youla_robust_check(TransferMatrix{{1}}, TransferMatrix{{rf(Polynomial::constant(1), lin(q(-3), q(1)))}}),
                  NotStable);
}

TEST_CASE("iop") {
  IopQuadruple quad = scalar_quad();
  const Polynomial d = lin(q(-1), q(2));
  CHECK(quad.Y == TransferMatrix{{rf(Polynomial{q(0), q(2)}, d)}});
  CHECK(quad.W == TransferMatrix{{rf(Polynomial::constant(2), d)}});
  CHECK(quad.U == TransferMatrix{{rf(Polynomial{q(0), q(1)}, d)}});
  CHECK(quad.Z == TransferMatrix{{rf(Polynomial{q(0), q(2)}, d)}});
  CHECK(iop_verify(quad.G, quad));

  SUBCASE("open loop") {
    TransferMatrix g{{rf(Polynomial::constant(1), lin(q(-1, 3), q(1)))}};
    IopQuadruple open{TransferMatrix{{1}}, g, TransferMatrix{{0}}, TransferMatrix{{1}}, g};
    CHECK(iop_verify(g, open));
    CHECK(iop_controller(open).is_zero());
    CHECK(iop_margin(open) == kInfiniteMargin);
  }
  SUBCASE("perturbed quadruple fails") {
    IopQuadruple bad = quad;
    bad.Y = bad.Y + TransferMatrix{{1}};
    CHECK_FALSE(iop_verify(quad.G, bad));
  }
  SUBCASE("controller and margin") {
    CHECK(iop_controller(quad) == TransferMatrix{{q(1, 2)}});
    CHECK(iop_margin(quad) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(iop_margin(quad) - 1.0 / sweep_scalar_peak(quad.U(0, 0))) < 1e-6);
    IopQuadruple c = quad;
    c.U = TransferMatrix{{q(1, 2)}};
    CHECK(iop_margin(c) == doctest::Approx(2.0));
    IopQuadruple wrong = quad;
    wrong.U = TransferMatrix(1, 2);
    CHECK_THROWS_AS(iop_controller(wrong), DimensionMismatch);
  }
  SUBCASE("robust check") {
    CHECK(iop_robust_check(quad.U, TransferMatrix{{0}}).stable());
    auto tight = iop_robust_check(quad.U, TransferMatrix{{1}});
    CHECK_FALSE(tight.stable());
    REQUIRE_FALSE(tight.witnesses.empty());
    CHECK(std::abs(*tight.witnesses[0].pole - std::complex<double>(1.0, 0.0)) < 1e-6);
    CHECK(iop_robust_check(quad.U, TransferMatrix{{q(-9, 10)}}).stable());
  }
  SUBCASE("property: stable loops give valid quadruples that recover K") {
    std::mt19937_64 rng(23);
    int found = 0;
    for (int t = 0; t < 200 && found < 15; ++t) {
      const std::size_t p = 1 + t % 2, m = 1 + (t / 2) % 2;
      TransferMatrix g = random_matrix(rng, p, m, 1), k = random_matrix(rng, m, p, 1);
      IopQuadruple qd;
      try {
        qd = IopQuadruple::from_loop(g, k);
      } catch (const NoStabilityMatrix&) {
        continue;
      }
      if (!stability_verdict(qd.stacked()).stable()) continue;
      ++found;
      CHECK(iop_verify(g, qd));
      CHECK(iop_controller(qd) == k);
    }
    CHECK(found >= 10);
  }
  SUBCASE("property: small-gain soundness") {
    std::mt19937_64 rng(31);
    const double eps = iop_margin(quad);
    for (int t = 0; t < 100; ++t) {
      TransferMatrix dg = random_fir(rng, 1, 1, t % 3);
      const double nrm = hinf_norm(dg);
      if (nrm == 0) continue;
      Rational scale = from_double(0.99 * eps / nrm * std::uniform_real_distribution<double>(0.01, 1.0)(rng));
      CHECK(iop_robust_check(quad.U, dg.scaled(RationalFunction(scale))).stable());
    }
  }
}

TEST_CASE("sls state feedback") {
  StateSpace ss = half_plant();
  SUBCASE("deadbeat gain") {
    auto p = sls_sf_from_gain(ss, RationalMatrix{{q(-1, 2)}});
    CHECK(p.phi_x == TransferMatrix{{zi}});
    CHECK(p.phi_u == TransferMatrix{{zi.scaled(q(-1, 2))}});
    CHECK(p.defect.is_zero());
    CHECK(sls_sf_verify(ss, p));
    CHECK(sls_sf_controller(p) == TransferMatrix{{q(-1, 2)}});
  }
  SUBCASE("open loop") {
    auto p = sls_sf_from_gain(ss, RationalMatrix{{q(0)}});
    CHECK(p.phi_x == TransferMatrix{{rf(Polynomial::constant(1), lin(q(-1, 2), q(1)))}});
    CHECK(p.phi_u.is_zero());
  }
  CHECK_THROWS_AS(sls_sf_from_gain(StateSpace(RationalMatrix{{q(2)}}, RationalMatrix{{q(0)}}), RationalMatrix{{q(5)}}),
                  NotStabilizing);

  SUBCASE("robustness to A = 1/2 + delta") {
    auto nominal = sls_sf_from_gain(ss, RationalMatrix{{q(-1, 2)}});
    for (auto delta : {q(0), q(1, 3), q(-2, 5), q(99, 100), q(1), q(3, 2)}) {
      StateSpace truth(RationalMatrix{{q(1, 2) + delta}}, RationalMatrix{{q(1)}});
      auto r = sls_sf_robust(truth, nominal.phi_x, nominal.phi_u);
      CHECK(r.defect == TransferMatrix{{zi.scaled(-delta)}});
      CHECK(r.responses(0, 0) == rf(Polynomial::constant(1), lin(-delta, q(1))));
      StabilityStatus expected = abs(delta) < 1    ? StabilityStatus::stable
                                 : abs(delta) == 1 ? StabilityStatus::marginal
                                                   : StabilityStatus::unstable;
      CHECK(r.verdict.status == expected);
      if (delta == 0) CHECK(r.responses == vstack(nominal.phi_x, nominal.phi_u));
    }
  }
  SUBCASE("property: zero defect and exact nominal responses") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 10; ++t) {
      auto fx = random_stabilizable(rng, 1 + t % 3, 1 + t % 2, 1);
      auto p = sls_sf_from_gain(fx.ss, fx.F);
      CHECK(p.defect.is_zero());
      CHECK(sls_sf_verify(fx.ss, p));
      auto r = sls_sf_robust(fx.ss, p.phi_x, p.phi_u);
      CHECK(r.responses == vstack(p.phi_x, p.phi_u));
      CHECK(r.verdict.stable());
      // The realization built from these responses is internally stable.
      CHECK(stability_verdict(stability_matrix(build_sf_sls(fx.ss, p.phi_x, p.phi_u))).stable());
    }
  }
}

TEST_CASE("sls output feedback") {
  StateSpace ss = half_plant();
  auto p = sls_of_from_controller(ss, TransferMatrix{{q(-1, 2)}});
  CHECK(sls_of_verify(ss, p));
  CHECK(p.defect1.is_zero());
  CHECK(p.defect2.is_zero());
  CHECK(sls_of_controller(p, ss.D) == TransferMatrix{{q(-1, 2)}});

  SUBCASE("improper Phi_uy fails verification") {
    SlsOutputFeedback bad = p;
    bad.phi_uy = bad.phi_uy + TransferMatrix{{z}};
    CHECK_FALSE(sls_of_verify(ss, bad));
  }
  SUBCASE("open loop on a stable plant") {
    auto open = sls_of_from_controller(ss, TransferMatrix{{0}});
    CHECK(open.phi_xx == resolvent(ss.A));
    CHECK(open.phi_ux.is_zero());
    CHECK(open.phi_uy.is_zero());
    CHECK(open.phi_xy.is_zero());
    CHECK(sls_of_verify(ss, open));
  }
  SUBCASE("singular Phi_xx") {
    SlsOutputFeedback bad = p;
    bad.phi_xx = TransferMatrix{{0}};
    CHECK_THROWS_AS(sls_of_controller(bad, ss.D), SingularMatrix);
  }
  SUBCASE("nonzero D round trip") {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 6; ++t) {
      auto fx = random_stabilizable(rng, 1 + t % 2, 1, 1, true);
      auto cf = coprime_from_gains(fx.ss, fx.F, fx.L);
      TransferMatrix k = youla_controller(cf, TransferMatrix(1, 1));
      auto sp = sls_of_from_controller(fx.ss, k);
      CHECK(sls_of_verify(fx.ss, sp));
      CHECK(sls_of_controller(sp, fx.ss.D) == k);
    }
  }
  SUBCASE("perturbed response") {
    CHECK(sls_of_perturbed_response(p) == p.block());
    // C perturbation: defects follow from the affine constraint.
    const Rational dc = q(1, 5);
    StateSpace pert(ss.A, ss.B, RationalMatrix{{q(1) + dc}}, ss.D);
    auto pp = sls_of_make(pert, p.phi_xx, p.phi_xy, p.phi_ux, p.phi_uy);
    CHECK(pp.defect1 == -(p.phi_xy.scaled(RationalFunction(dc))));
    CHECK(pp.defect2 == -(p.phi_uy.scaled(RationalFunction(dc))));
    TransferMatrix resp = sls_of_perturbed_response(pp);
    // Oracle: the perturbed loop with the nominal controller.
    auto truth = sls_of_from_controller(pert, sls_of_controller(p, ss.D));
    CHECK(resp == truth.block());
    CHECK(sls_of_verify(pert, sls_of_make(pert, resp.slice(0, 0, 1, 1), resp.slice(0, 1, 1, 1), resp.slice(1, 0, 1, 1),
                                          resp.slice(1, 1, 1, 1))));
  }
  SUBCASE("margin") {
    const double eps = sls_of_margin(p);
    // Oracle: dense sweep of the largest singular value of the 2x2 block.
    TransferMatrix b = p.block();
    double peak = 0;
    for (int k = 0; k <= 20000; ++k) {
      double w = std::numbers::pi * k / 20000;
      Eigen::Matrix2cd m;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = eval_entry(b(i, j), std::polar(1.0, w));
      peak = std::max(peak, Eigen::JacobiSVD<Eigen::Matrix2cd>(m).singularValues()(0));
    }
    CHECK(eps == doctest::Approx(1.0 / peak).epsilon(1e-6));
    SlsOutputFeedback twice = p;
    for (auto* x : {&twice.phi_xx, &twice.phi_xy, &twice.phi_ux, &twice.phi_uy}) *x = x->scaled(RationalFunction(2));
    CHECK(sls_of_margin(twice) == doctest::Approx(eps / 2).epsilon(1e-9));
    SlsOutputFeedback tiny = p;
    tiny.phi_xx = tiny.phi_xx.scaled(RationalFunction(q(1, 1000)));
    tiny.phi_xy = tiny.phi_ux = tiny.phi_uy = TransferMatrix{{0}};
    CHECK(sls_of_margin(tiny) == doctest::Approx(1000.0).epsilon(1e-6));
  }
  SUBCASE("robust check") {
    TransferMatrix o{{0}};
    auto none = sls_of_robust_check(ss, p, o, o, o, o);
    CHECK(none.psi.is_identity());
    CHECK(none.verdict.stable());
    CHECK(none.agree);

    for (auto delta : {q(3, 10), q(1), q(-1), q(6, 5)}) {
      auto r = sls_of_robust_check(ss, p, TransferMatrix{{delta}}, o, o, o);
      CHECK(r.agree);
      // The deadbeat loop with A -> A + delta has its closed-loop poles where
      // det(I - delta Phi_xx) vanishes.
      StabilityStatus expected = abs(delta) < 1    ? StabilityStatus::stable
                                 : abs(delta) == 1 ? StabilityStatus::marginal
                                                   : StabilityStatus::unstable;
      CHECK(r.verdict.status == expected);
    }
    CHECK_THROWS_AS(sls_of_robust_check(ss, p, TransferMatrix{{rf(Polynomial::constant(1), lin(q(-2), q(1)))}}, o, o, o),
                    NotStable);
  }
  SUBCASE("property: robust check agrees with the perturbed realization") {
    std::mt19937_64 rng(47);
    int stable = 0, unstable = 0;
    for (int t = 0; t < 10; ++t) {
      auto fx = random_stabilizable(rng, 1 + t % 2, 1, 1, t % 2 == 0);
      auto cf = coprime_from_gains(fx.ss, fx.F, fx.L);
      auto sp = sls_of_from_controller(fx.ss, youla_controller(cf, TransferMatrix(1, 1)));
      const std::size_t n = fx.ss.states();
      const RationalFunction s(t < 5 ? q(1, 20) : q(1));
      auto r = sls_of_robust_check(fx.ss, sp, random_fir(rng, n, n, 1).scaled(s), random_fir(rng, n, 1, 1).scaled(s),
                                   random_fir(rng, 1, n, 1).scaled(s), random_fir(rng, 1, 1, 0).scaled(s));
      CHECK(r.agree);
      (r.verdict.stable() ? stable : unstable)++;
    }
    CHECK(stable >= 1);
    CHECK(unstable >= 1);
  }
}

TEST_CASE("mu") {
  TransferMatrix s_hat = stability_matrix(build_plant_controller(TransferMatrix{{zi}}, TransferMatrix{{q(1, 2)}}));
  Transformation id(TransferMatrix::identity(2));
  CHECK(mu_m_matrix(s_hat, id, TransferMatrix::identity(2)) == s_hat);
  TransferMatrix row = mu_m_matrix(s_hat, id, TransferMatrix{{1, 0}});
  const Polynomial d = lin(q(-1), q(2));
  CHECK(row == TransferMatrix{{rf(Polynomial{q(0), q(2)}, d), rf(Polynomial::constant(2), d)}});
  CHECK(mu_m_matrix(s_hat, Transformation(TransferMatrix::identity(2).scaled(RationalFunction(2))),
                    TransferMatrix::identity(2)) == s_hat.scaled(RationalFunction(2)));
  CHECK_THROWS_AS(mu_m_matrix(TransferMatrix{{rf(Polynomial::constant(1), lin(q(-2), q(1)))}},
                              Transformation(TransferMatrix{{1}}), TransferMatrix{{1}}),
                  NotStable);

  TransferMatrix m{{rf(Polynomial{q(0), q(1)}, d)}};
  auto none = mu_destab_test(m, TransferMatrix{{0}});
  CHECK(none.det == RationalFunction(1));
  CHECK(none.verdict.stable());
  CHECK_FALSE(none.destabilizing);

  auto tight = mu_destab_test(m, TransferMatrix{{1}});
  CHECK(tight.det == rf(lin(q(-1), q(1)), lin(q(-1), q(2))));
  CHECK(tight.destabilizing);
  CHECK(tight.verdict.status == StabilityStatus::marginal);
  bool has_root = false;
  for (const auto& w : tight.verdict.witnesses)
    if (w.kind == WitnessKind::det_root) has_root = std::abs(*w.pole - std::complex<double>(1, 0)) < 1e-9;
  CHECK(has_root);

  auto singular = mu_destab_test(TransferMatrix{{1}}, TransferMatrix{{1}});
  CHECK(singular.singular);
  CHECK(singular.destabilizing);
  CHECK(singular.verdict.status == StabilityStatus::unstable);
  CHECK(singular.verdict.witnesses.at(0).kind == WitnessKind::singular);

  SUBCASE("property: determinant matches numeric evaluation") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
    for (int t = 0; t < 8; ++t) {
      TransferMatrix mm = random_matrix(rng, 2, 2, 1, true), dd = random_fir(rng, 2, 2, 1);
      auto r = mu_destab_test(mm, dd);
      for (int k = 0; k < 16; ++k) {
        std::complex<double> zz = std::polar(1.0, angle(rng));
        Eigen::Matrix2cd a;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            std::complex<double> acc = i == j ? 1.0 : 0.0;
            for (int l = 0; l < 2; ++l) acc -= eval_entry(mm(i, l), zz) * eval_entry(dd(l, j), zz);
            a(i, j) = acc;
          }
        std::complex<double> expected = a.determinant();
        CHECK(std::abs(eval_entry(r.det, zz) - expected) <= 1e-8 * std::max(1.0, std::abs(expected)));
      }
    }
  }
}
