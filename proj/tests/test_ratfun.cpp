#include <random>

#include "doctest.h"
#include "realstab/analysis.hpp"
#include "realstab/errors.hpp"
#include "realstab/state_space.hpp"
#include "test_support.hpp"

using namespace realstab;
using namespace realstab::testing;

namespace {
const RationalFunction z = RationalFunction::z();
}

TEST_CASE("parse_rational") {
  CHECK(parse_rational("3/6") == q(1, 2));
  CHECK(parse_rational("-4") == q(-4));
  CHECK(parse_rational(" 0.25 ") == q(1, 4));
  CHECK(parse_rational("-1.5e-1") == q(-3, 20));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("1/2/3"), ParseError);
}

TEST_CASE("polynomial basics") {
  Polynomial p{q(1), q(0), q(0)};
  CHECK(p.degree() == 0);
  CHECK(Polynomial().degree() == -1);
  CHECK(Polynomial({q(0), q(0)}).is_zero());
  auto [quot, rem] = divmod(Polynomial{q(-1), q(0), q(1)}, lin(q(-1), q(1)));
  CHECK(quot == lin(q(1), q(1)));
  CHECK(rem.is_zero());
  CHECK(gcd(Polynomial{q(-1), q(0), q(1)}, Polynomial{q(2), q(-2)}) == lin(q(-1), q(1)));
  auto sqf = square_free_factors(Polynomial{q(1, 4), q(-1), q(1)});
  REQUIRE(sqf.size() == 1);
  CHECK(sqf[0].first == lin(q(-1, 2), q(1)));
  CHECK(sqf[0].second == 2);
}

TEST_CASE("canonicalize") {
  SUBCASE("common factor z-1 cancels") {
    RationalFunction f(lin(q(-1), q(1)), Polynomial{q(-1), q(0), q(1)});
    CHECK(f.num() == Polynomial::constant(1));
    CHECK(f.den() == lin(q(1), q(1)));
  }
  SUBCASE("2z/(4z-2) becomes (z/2)/(z-1/2)") {
    Polynomial n{q(0), q(2)}, d{q(-2), q(4)};
    RationalFunction f(n, d);
    CHECK(f.num() == Polynomial{q(0), q(1, 2)});
    CHECK(f.den() == lin(q(-1, 2), q(1)));
    CHECK(same_ratio(f.num(), f.den(), n, d));
  }
  SUBCASE("zero function is 0/1") {
    RationalFunction f(Polynomial(), lin(q(3), q(1)));
    CHECK(f.num().is_zero());
    CHECK(f.den() == Polynomial::constant(1));
  }
  SUBCASE("zero denominator") { CHECK_THROWS_AS(RationalFunction(Polynomial::z(), Polynomial()), ZeroDenominator); }
  SUBCASE("idempotent and results canonical") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
      RationalFunction f = random_proper(rng, 3), g = random_proper(rng, 3);
      CHECK(RationalFunction(f.num(), f.den()) == f);
      for (const auto& h : {f + g, f * g, f - g}) {
        CHECK((h.den().leading() == 1));
        CHECK(gcd(h.num(), h.den()).degree() <= 0);
        CHECK(RationalFunction(h.num(), h.den()) == h);
      }
    }
  }
}

TEST_CASE("mat_add and mat_mul") {
  std::mt19937_64 rng(3);
  TransferMatrix x = random_matrix(rng, 3, 3, 2);
  CHECK(TransferMatrix::identity(3) * x == x);
  CHECK(TransferMatrix{{z.reciprocal()}} * TransferMatrix{{z}} == TransferMatrix{{1}});

  // 1/(z-a) + 1/(z-b) against the cross-multiplied closed form.
  Rational a = q(1, 3), b = q(-2, 5);
  TransferMatrix sum = TransferMatrix{{RationalFunction(Polynomial::constant(1), lin(-a, q(1)))}} +
                       TransferMatrix{{RationalFunction(Polynomial::constant(1), lin(-b, q(1)))}};
  Polynomial expect_num = lin(-a - b, q(2));
  Polynomial expect_den = lin(-a, q(1)) * lin(-b, q(1));
  CHECK(same_ratio(sum(0, 0).num(), sum(0, 0).den(), expect_num, expect_den));
  CHECK(sum(0, 0) == RationalFunction(expect_num, expect_den));

  CHECK_THROWS_AS(x * TransferMatrix(2, 2), DimensionMismatch);
  CHECK_THROWS_AS(x + TransferMatrix(3, 2), DimensionMismatch);
}

TEST_CASE("mat_inverse") {
  CHECK(mat_inverse(TransferMatrix::identity(4)) == TransferMatrix::identity(4));

  SUBCASE("plant/controller loop G=1/z, K=1/2") {
    TransferMatrix m{{1, -z.reciprocal()}, {RationalFunction(q(-1, 2)), 1}};
    // Oracle: 2x2 adjugate formula.
    RationalFunction det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    TransferMatrix adj{{m(1, 1) / det, -m(0, 1) / det}, {-m(1, 0) / det, m(0, 0) / det}};
    RationalFunction d2(lin(q(-1), q(2)), Polynomial::constant(1));  // 2z - 1
    TransferMatrix expect{{(2 * z) / d2, RationalFunction(2) / d2}, {z / d2, (2 * z) / d2}};
    CHECK(mat_inverse(m) == adj);
    CHECK(mat_inverse(m) == expect);
  }
  SUBCASE("unipotent") {
    TransferMatrix m{{1, z}, {0, 1}};
    CHECK(mat_inverse(m) == TransferMatrix{{1, -z}, {0, 1}});
  }
  SUBCASE("singular") {
    TransferMatrix m{{1, z}, {z.reciprocal(), 1}};
    CHECK_THROWS_AS(mat_inverse(m), SingularMatrix);
    CHECK(determinant(m).is_zero());
  }
  SUBCASE("random 3x3 degree <= 2: X * X^-1 = I exactly") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 40; ++t) {
      TransferMatrix x = random_matrix(rng, 3, 3, 2);
      if (determinant(x).is_zero()) continue;
      TransferMatrix inv = mat_inverse(x);
      CHECK((x * inv).is_identity());
      CHECK((inv * x).is_identity());
    }
  }
  SUBCASE("determinant agrees with cofactor expansion") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
      TransferMatrix x = random_matrix(rng, 3, 3, 1);
      RationalFunction cof = x(0, 0) * (x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1)) -
                             x(0, 1) * (x(1, 0) * x(2, 2) - x(1, 2) * x(2, 0)) +
                             x(0, 2) * (x(1, 0) * x(2, 1) - x(1, 1) * x(2, 0));
      CHECK(determinant(x) == cof);
    }
  }
}

TEST_CASE("poles") {
  auto p = poles(RationalFunction(Polynomial::constant(1), lin(q(-1, 2), q(1))));
  REQUIRE(p.size() == 1);
  CHECK(p[0].real() == doctest::Approx(0.5));

  // Double root by the quadratic formula: (1 +- sqrt(1 - 1)) / 2.
  auto dbl = poles(RationalFunction(Polynomial::constant(1), Polynomial{q(1, 4), q(-1), q(1)}));
  REQUIRE(dbl.size() == 2);
  for (auto r : dbl) CHECK(std::abs(r - std::complex<double>(0.5, 0)) < 1e-12);

  CHECK(poles(RationalFunction(3)).empty());

  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    RationalFunction f = random_proper(rng, 4);
    CHECK(poles(f).size() == static_cast<std::size_t>(std::max(0, f.den().degree())));
  }
}

TEST_CASE("stability_verdict") {
  RationalFunction d2(lin(q(-1, 2), q(1)), Polynomial::constant(1));
  CHECK(stability_verdict(TransferMatrix{{z / d2}}).status == StabilityStatus::stable);
  CHECK(stability_verdict(TransferMatrix{{z / d2}}).witnesses.empty());

  auto marg = stability_verdict(TransferMatrix{{RationalFunction(lin(q(-1), q(2)), lin(q(-1), q(1)))}});
  CHECK(marg.status == StabilityStatus::marginal);
  REQUIRE(marg.witnesses.size() == 1);
  CHECK(marg.witnesses[0].modulus == doctest::Approx(1.0).epsilon(1e-12));

  auto imp = stability_verdict(TransferMatrix{{z * z / d2}});
  CHECK(imp.status == StabilityStatus::improper);
  CHECK(imp.witnesses.size() == 1);
  CHECK(!imp.witnesses[0].pole);

  auto unst = stability_verdict(TransferMatrix{{1, RationalFunction(Polynomial::constant(1), lin(q(-2), q(1)))}});
  CHECK(unst.status == StabilityStatus::unstable);
  CHECK(unst.witnesses[0].col == 1);

  SUBCASE("RH-infinity is closed under + and *") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 100; ++t) {
      RationalFunction f = random_stable(rng, 2), g = random_stable(rng, 2);
      CHECK(stability_verdict(TransferMatrix{{f + g}}).stable());
      CHECK(stability_verdict(TransferMatrix{{f * g}}).stable());
    }
  }
}

TEST_CASE("hinf_norm") {
  RationalFunction f(Polynomial::z(), lin(q(-1), q(2)));  // z/(2z-1)
  CHECK(std::abs(hinf_norm(TransferMatrix{{f}}) - sweep_scalar_peak(f)) < 1e-6);
  CHECK(std::abs(hinf_norm(TransferMatrix{{f}}) - 1.0) < 1e-6);

  RationalFunction g(Polynomial::constant(1), lin(q(-1, 2), q(1)));  // 1/(z-1/2)
  CHECK(std::abs(hinf_norm(TransferMatrix{{g}}) - sweep_scalar_peak(g)) < 1e-6);
  CHECK(std::abs(hinf_norm(TransferMatrix{{g}}) - 2.0) < 1e-6);

  CHECK(hinf_norm(TransferMatrix{{RationalFunction(q(-3, 2))}}) == doctest::Approx(1.5));
  CHECK_THROWS_AS(hinf_norm(TransferMatrix{{RationalFunction(Polynomial::constant(1), lin(q(-1), q(1)))}}), NotStable);

  SUBCASE("interior resonance: lightly damped pair") {
    // 1/(z^2 - 1.6 cos(1) z + 0.64), peak near omega = 1.
    Rational c = from_double(1.6 * std::cos(1.0));
    RationalFunction h(Polynomial::constant(1), Polynomial{q(16, 25), -c, q(1)});
    CHECK(std::abs(hinf_norm(TransferMatrix{{h}}) - sweep_scalar_peak(h, 2000001)) < 1e-6 * sweep_scalar_peak(h));
  }

  SUBCASE("norm is at least every sampled singular value") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
      TransferMatrix x = random_matrix(rng, 2, 2, 2, true);
      double n = hinf_norm(x);
      for (int k = 0; k < 64; ++k) CHECK(n >= max_singular_value(x, std::numbers::pi * k / 63.0) - 1e-12);
    }
  }
}

TEST_CASE("freq_response") {
  auto c = freq_response(TransferMatrix{{2}}, 5);
  REQUIRE(c.size() == 5);
  for (const auto& pt : c) CHECK(pt.singular_values[0] == doctest::Approx(2.0));

  for (const auto& pt : freq_response(TransferMatrix{{z.reciprocal()}}, 7)) CHECK(pt.singular_values[0] == doctest::Approx(1.0));

  RationalFunction f(Polynomial::z(), lin(q(-1), q(2)));
  auto r = freq_response(TransferMatrix{{f}}, 3);
  CHECK(r[0].omega == 0.0);
  CHECK(r[2].omega == doctest::Approx(std::numbers::pi));
  CHECK(r[0].singular_values[0] == doctest::Approx(1.0));
  CHECK(r[1].singular_values[0] == doctest::Approx(std::abs(eval_entry(f, {0.0, 1.0}))));
  CHECK(r[2].singular_values[0] == doctest::Approx(1.0 / 3.0));

  try {
    freq_response(TransferMatrix{{RationalFunction(Polynomial::constant(1), lin(q(-1), q(1)))}}, 4);
    FAIL("expected PoleOnGrid");
  } catch (const PoleOnGrid& e) {
    CHECK(e.omega() == 0.0);
  }
}

TEST_CASE("state space helpers") {
  RationalMatrix a{{q(1, 2), q(1)}, {q(0), q(-1, 3)}};
  Polynomial cp = characteristic_polynomial(a);
  CHECK(cp == lin(q(-1, 2), q(1)) * lin(q(1, 3), q(1)));
  CHECK((shift_minus(a) * resolvent(a)).is_identity());
  CHECK(resolvent(a) == mat_inverse(shift_minus(a)));

  RationalMatrix b{{q(0)}, {q(1)}};
  RationalMatrix f = deadbeat_state_gain(a, b);
  CHECK(characteristic_polynomial(a + b * f) == Polynomial::monomial(2));
  RationalMatrix c{{q(1), q(0)}};
  RationalMatrix l = deadbeat_observer_gain(a, c);
  CHECK(characteristic_polynomial(a + l * c) == Polynomial::monomial(2));
}
