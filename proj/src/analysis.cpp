#include "realstab/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "realstab/errors.hpp"

namespace realstab {

namespace {

using cld = std::complex<long double>;

cld eval_ld(const std::vector<long double>& c, cld x) {
  cld acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Newton iterations on a square-free factor; keeps the best iterate.
std::complex<double> polish(const Polynomial& f, std::complex<double> guess) {
  std::vector<long double> c, dc;
  for (const auto& q : f.coeffs()) c.push_back(static_cast<long double>(q.get_d()));
  for (std::size_t k = 1; k < c.size(); ++k) dc.push_back(c[k] * static_cast<long double>(k));
  cld x(guess.real(), guess.imag());
  long double best_res = std::abs(eval_ld(c, x));
  cld best = x;
  for (int it = 0; it < 8 && best_res > 0; ++it) {
    cld d = eval_ld(dc, x);
    if (std::abs(d) == 0) break;
    x -= eval_ld(c, x) / d;
    long double res = std::abs(eval_ld(c, x));
    if (!(res < best_res)) break;
    best_res = res;
    best = x;
  }
  return {static_cast<double>(best.real()), static_cast<double>(best.imag())};
}

std::vector<std::complex<double>> square_free_roots(const Polynomial& f) {
  const int n = f.degree();
  if (n == 1) return {std::complex<double>(Rational(-f.coeff(0) / f.leading()).get_d(), 0.0)};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  Rational inv_lead = 1 / f.leading();
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -Rational(f.coeff(i) * inv_lead).get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<std::complex<double>> out;
  for (int i = 0; i < n; ++i) out.push_back(polish(f, solver.eigenvalues()[i]));
  return out;
}

struct EntryEval {
  std::vector<double> num;
  std::vector<double> den;
};

std::complex<double> horner(const std::vector<double>& c, std::complex<double> z) {
  std::complex<double> acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

// Floating-point image of a matrix for repeated evaluation on the unit circle.
class UnitCircleEvaluator {
 public:
  explicit UnitCircleEvaluator(const TransferMatrix& x) : rows_(x.rows()), cols_(x.cols()) {
    entries_.reserve(x.entries().size());
    for (const auto& e : x.entries()) entries_.push_back({e.num().to_double(), e.den().to_double()});
  }

  Eigen::MatrixXcd at(double omega) const {
    const std::complex<double> z = std::polar(1.0, omega);
    Eigen::MatrixXcd m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        const auto& e = entries_[i * cols_ + j];
        m(i, j) = e.num.size() == 1 && e.num[0] == 0.0 ? std::complex<double>(0) : horner(e.num, z) / horner(e.den, z);
      }
    return m;
  }

  double sigma_max(double omega) const {
    Eigen::MatrixXcd m = at(omega);
    if (m.size() == 0) return 0.0;
    if (m.rows() == 1 || m.cols() == 1) return m.norm();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
  }

 private:
  std::size_t rows_, cols_;
  std::vector<EntryEval> entries_;
};

double golden_max(const UnitCircleEvaluator& ev, double lo, double hi, double& arg) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = ev.sigma_max(c), fd = ev.sigma_max(d);
  for (int it = 0; it < 100 && (b - a) > 1e-15; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = ev.sigma_max(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = ev.sigma_max(d);
    }
  }
  double best = fc;
  arg = c;
  if (fd > best) {
    best = fd;
    arg = d;
  }
  for (double x : {lo, hi}) {
    double v = ev.sigma_max(x);
    if (v > best) {
      best = v;
      arg = x;
    }
  }
  return best;
}

}  // namespace

std::string to_string(StabilityStatus s) {
  switch (s) {
    case StabilityStatus::stable: return "stable";
    case StabilityStatus::marginal: return "marginal";
    case StabilityStatus::unstable: return "unstable";
    case StabilityStatus::improper: return "improper";
  }
  return "unknown";
}

std::string to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::pole: return "pole";
    case WitnessKind::improper: return "improper";
    case WitnessKind::det_root: return "det-root";
    case WitnessKind::singular: return "singular";
  }
  return "unknown";
}

WitnessKind witness_kind_from_string(const std::string& s) {
  if (s == "pole") return WitnessKind::pole;
  if (s == "improper") return WitnessKind::improper;
  if (s == "det-root") return WitnessKind::det_root;
  if (s == "singular") return WitnessKind::singular;
  throw ParseError("unknown witness kind '" + s + "'");
}

StabilityStatus status_from_string(const std::string& s) {
  if (s == "stable") return StabilityStatus::stable;
  if (s == "marginal") return StabilityStatus::marginal;
  if (s == "unstable") return StabilityStatus::unstable;
  if (s == "improper") return StabilityStatus::improper;
  throw ParseError("unknown stability status '" + s + "'");
}

std::vector<std::complex<double>> roots(const Polynomial& p) {
  std::vector<std::complex<double>> out;
  if (p.degree() <= 0) return out;
  for (const auto& [factor, multiplicity] : square_free_factors(p)) {
    for (const auto& r : square_free_roots(factor))
      for (int k = 0; k < multiplicity; ++k) out.push_back(r);
  }
  return out;
}

std::vector<std::complex<double>> poles(const RationalFunction& f) { return roots(f.den()); }

StabilityStatus classify_modulus(double modulus, double tol) {
  if (modulus > 1.0 + tol) return StabilityStatus::unstable;
  if (modulus >= 1.0 - tol) return StabilityStatus::marginal;
  return StabilityStatus::stable;
}

StabilityStatus worst(StabilityStatus a, StabilityStatus b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

StabilityVerdict stability_verdict(const TransferMatrix& x) {
  StabilityVerdict v;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      if (!x(i, j).is_proper()) v.witnesses.push_back({i, j, std::nullopt, 0.0, WitnessKind::improper});
  if (!v.witnesses.empty()) {
    v.status = StabilityStatus::improper;
    return v;
  }

  // Entries of closed-loop matrices share denominators; root each once.
  std::vector<std::pair<const Polynomial*, std::vector<std::complex<double>>>> cache;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const Polynomial& den = x(i, j).den();
      if (den.is_constant()) continue;
      auto hit = std::find_if(cache.begin(), cache.end(), [&](const auto& c) { return *c.first == den; });
      if (hit == cache.end()) {
        cache.emplace_back(&den, roots(den));
        hit = cache.end() - 1;
      }
      for (const auto& p : hit->second) {
        double mod = std::abs(p);
        StabilityStatus s = classify_modulus(mod);
        if (s == StabilityStatus::stable) continue;
        v.status = worst(v.status, s);
        v.witnesses.push_back({i, j, p, mod});
      }
    }
  }
  return v;
}

double max_singular_value(const TransferMatrix& x, double omega) { return UnitCircleEvaluator(x).sigma_max(omega); }

HinfPeak hinf_peak(const TransferMatrix& x) {
  StabilityVerdict v = stability_verdict(x);
  if (!v.stable()) throw NotStable("H-infinity norm requires a stable matrix (verdict: " + to_string(v.status) + ")");
  if (x.empty()) return {};
  // Zero rows and columns do not change singular values; dropping them keeps
  // masked perturbations cheap.
  std::vector<std::size_t> keep_r, keep_c;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      if (!x(i, j).is_zero()) {
        keep_r.push_back(i);
        break;
      }
  for (std::size_t j = 0; j < x.cols(); ++j)
    for (std::size_t i = 0; i < x.rows(); ++i)
      if (!x(i, j).is_zero()) {
        keep_c.push_back(j);
        break;
      }
  if (keep_r.empty()) return {};
  TransferMatrix core(keep_r.size(), keep_c.size());
  for (std::size_t i = 0; i < keep_r.size(); ++i)
    for (std::size_t j = 0; j < keep_c.size(); ++j) core(i, j) = x(keep_r[i], keep_c[j]);
  UnitCircleEvaluator ev(core);
  if (core.is_constant()) return {ev.sigma_max(0.0), 0.0};

  const std::size_t n = kHinfGridPoints;
  std::vector<double> grid(n), values(n);
  for (std::size_t k = 0; k < n; ++k) {
    grid[k] = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1);
    values[k] = ev.sigma_max(grid[k]);
  }
  std::vector<std::size_t> maxima;
  for (std::size_t k = 0; k < n; ++k) {
    bool left = k == 0 || values[k] >= values[k - 1];
    bool right = k == n - 1 || values[k] >= values[k + 1];
    if (left && right) maxima.push_back(k);
  }
  std::sort(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  if (maxima.size() > 4) maxima.resize(4);

  HinfPeak best{values[maxima.front()], grid[maxima.front()]};
  for (std::size_t k : maxima) {
    double lo = grid[k == 0 ? 0 : k - 1];
    double hi = grid[k == n - 1 ? n - 1 : k + 1];
    double arg = grid[k];
    double v2 = golden_max(ev, lo, hi, arg);
    if (v2 > best.norm) best = {v2, arg};
  }
  return best;
}

double hinf_norm(const TransferMatrix& x) { return hinf_peak(x).norm; }

std::vector<FrequencyPoint> freq_response(const TransferMatrix& x, std::size_t n_points) {
  if (n_points == 0) throw DimensionMismatch("freq_response needs at least one point");
  std::vector<double> omegas(n_points, 0.0);
  for (std::size_t k = 0; k < n_points && n_points > 1; ++k)
    omegas[k] = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_points - 1);

  // Reject sample points that sit on a pole: exactly at z = +-1, numerically elsewhere.
  std::vector<std::complex<double>> all_poles;
  std::vector<const Polynomial*> seen;
  for (const auto& e : x.entries()) {
    if (e.den().is_constant()) continue;
    if (std::any_of(seen.begin(), seen.end(), [&](const Polynomial* p) { return *p == e.den(); })) continue;
    seen.push_back(&e.den());
    for (double omega : omegas) {
      bool at_plus_one = omega == 0.0;
      bool at_minus_one = omega == std::numbers::pi;
      if ((at_plus_one && e.den().eval(Rational(1)) == 0) || (at_minus_one && e.den().eval(Rational(-1)) == 0)) {
        throw PoleOnGrid(omega, "pole on the unit circle at omega = " + std::to_string(omega));
      }
    }
    auto r = roots(e.den());
    all_poles.insert(all_poles.end(), r.begin(), r.end());
  }

  UnitCircleEvaluator ev(x);
  std::vector<FrequencyPoint> out;
  out.reserve(n_points);
  for (double omega : omegas) {
    const std::complex<double> z = std::polar(1.0, omega);
    for (const auto& p : all_poles) {
      if (std::abs(p - z) <= 1e-12) throw PoleOnGrid(omega, "pole on the unit circle at omega = " + std::to_string(omega));
    }
    Eigen::MatrixXcd m = ev.at(omega);
    if (!m.allFinite()) throw PoleOnGrid(omega, "non-finite response at omega = " + std::to_string(omega));
    FrequencyPoint pt{omega, {}};
    if (m.size() > 0) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
      const auto& s = svd.singularValues();
      pt.singular_values.assign(s.data(), s.data() + s.size());
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace realstab
