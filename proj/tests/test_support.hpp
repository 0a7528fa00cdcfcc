#pragma once

// Random generators and independent numeric oracles shared by the suites.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "realstab/rational_function.hpp"
#include "realstab/realization.hpp"
#include "realstab/state_space.hpp"
#include "realstab/transfer_matrix.hpp"

namespace realstab::testing {

inline Rational small_rational(std::mt19937_64& rng, int max_num = 4, int max_den = 4) {
  std::uniform_int_distribution<int> num(-max_num, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline Polynomial random_poly(std::mt19937_64& rng, int degree) {
  std::vector<Rational> c;
  for (int k = 0; k <= degree; ++k) c.push_back(small_rational(rng));
  return Polynomial(std::move(c));
}

/// Monic polynomial with real roots of modulus <= 3/4.
inline Polynomial stable_den(std::mt19937_64& rng, int degree) {
  std::uniform_int_distribution<int> root(-3, 3);
  Polynomial p = Polynomial::constant(1);
  for (int k = 0; k < degree; ++k) p = p * Polynomial{Rational(-root(rng), 4), Rational(1)};
  return p;
}

/// Proper rational function with numerator/denominator degree <= max_degree.
inline RationalFunction random_proper(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  int dd = deg(rng);
  Polynomial den = random_poly(rng, dd);
  while (den.degree() != dd) den = random_poly(rng, dd);
  std::uniform_int_distribution<int> ndeg(0, dd);
  return {random_poly(rng, ndeg(rng)), den};
}

inline RationalFunction random_stable(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  int dd = deg(rng);
  std::uniform_int_distribution<int> ndeg(0, dd);
  return {random_poly(rng, ndeg(rng)), stable_den(rng, dd)};
}

inline TransferMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int max_degree,
                                    bool stable = false) {
  TransferMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = stable ? random_stable(rng, max_degree) : random_proper(rng, max_degree);
  return m;
}

inline RationalMatrix random_constant(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int max_num = 3,
                                      int max_den = 4) {
  RationalMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = small_rational(rng, max_num, max_den);
  return m;
}

inline StateSpace random_state_space(std::mt19937_64& rng, std::size_t n, std::size_t m, std::size_t p) {
  return {random_constant(rng, n, n), random_constant(rng, n, m), random_constant(rng, p, n), random_constant(rng, p, m)};
}

/// Entries of the form z^-1 * proper.
inline TransferMatrix random_strictly_proper(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int max_degree,
                                             bool stable = false) {
  return random_matrix(rng, rows, cols, max_degree, stable).scaled(RationalFunction::z_inv());
}

/// FIR entries sum_{k=first..order} c_k z^-k with small rational c_k.
inline TransferMatrix random_fir(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int order, int first = 0) {
  TransferMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<Rational> c(order + 1, Rational(0));
      for (int k = first; k <= order; ++k) c[order - k] = small_rational(rng);
      m(i, j) = RationalFunction(Polynomial(std::move(c)), Polynomial::monomial(order));
    }
  return m;
}

/// Numeric value of a matrix entry at a complex point (oracle side: plain
/// double Horner on the stored coefficients).
inline std::complex<double> eval_entry(const RationalFunction& f, std::complex<double> z) {
  auto horner = [&](const Polynomial& p) {
    std::complex<double> acc = 0;
    const auto& c = p.coeffs();
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k].get_d();
    return acc;
  };
  return horner(f.num()) / horner(f.den());
}

/// Dense brute-force sweep of |f(e^{iw})| for scalar f (oracle for H-inf).
inline double sweep_scalar_peak(const RationalFunction& f, int points = 200001) {
  double best = 0.0;
  for (int k = 0; k < points; ++k) {
    double w = std::numbers::pi * k / (points - 1);
    best = std::max(best, std::abs(eval_entry(f, std::polar(1.0, w))));
  }
  return best;
}

/// Cross-multiplication equality of two ratios (independent of canonical form).
inline bool same_ratio(const Polynomial& n1, const Polynomial& d1, const Polynomial& n2, const Polynomial& d2) {
  return n1 * d2 == n2 * d1;
}

/// One random system from each realization builder, chosen by `kind` (0..3).
inline RealizationSystem random_realization(std::mt19937_64& rng, int kind) {
  std::uniform_int_distribution<int> dim(1, 4), io(1, 2);
  const std::size_t n = dim(rng), m = io(rng), p = io(rng);
  switch (kind % 4) {
    case 0: return build_plant_controller(random_matrix(rng, p, m, 2), random_matrix(rng, m, p, 2));
    case 1: return build_state_feedback(random_state_space(rng, n, m, p), random_matrix(rng, m, n, 2));
    case 2: {
      StateSpace ss = random_state_space(rng, n, m, p);
      return build_sf_sls(ss, random_fir(rng, n, n, 2, 1), random_fir(rng, m, n, 2, 1));
    }
    default: return build_output_feedback(random_state_space(rng, n, m, p), random_matrix(rng, m, p, 2));
  }
}

struct StabilizableFixture {
  StateSpace ss;
  RationalMatrix F;  ///< A + BF Schur stable
  RationalMatrix L;  ///< A + LC Schur stable
};

/// Random plant with randomly drawn stabilizing gains (rejection sampling).
inline StabilizableFixture random_stabilizable(std::mt19937_64& rng, std::size_t n, std::size_t m, std::size_t p,
                                               bool with_d = true) {
  for (;;) {
    StateSpace ss(random_constant(rng, n, n, 3, 4), random_constant(rng, n, m, 2, 2), random_constant(rng, p, n, 2, 2),
                  with_d ? random_constant(rng, p, m, 1, 2) : RationalMatrix(p, m));
    std::optional<RationalMatrix> f, l;
    for (int t = 0; t < 200 && !(f && l); ++t) {
      if (!f) {
        RationalMatrix cand = random_constant(rng, m, n, 2, 2);
        if (is_schur_stable(ss.A + ss.B * cand, 1e-3)) f = cand;
      }
      if (!l) {
        RationalMatrix cand = random_constant(rng, n, p, 2, 2);
        if (is_schur_stable(ss.A + cand * ss.C, 1e-3)) l = cand;
      }
    }
    if (f && l) return {ss, *f, *l};
  }
}

inline Polynomial lin(const Rational& c0, const Rational& c1) { return Polynomial{c0, c1}; }

inline Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace realstab::testing
