#include "realstab/polynomial.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

#include "realstab/errors.hpp"

namespace realstab {

Polynomial::Polynomial() : coeffs_{Rational(0)} {}

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { strip(); }

Polynomial::Polynomial(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { strip(); }

Polynomial Polynomial::constant(const Rational& c) { return Polynomial(std::vector<Rational>{c}); }

Polynomial Polynomial::monomial(std::size_t power, const Rational& c) {
  std::vector<Rational> coeffs(power + 1, Rational(0));
  coeffs[power] = c;
  return Polynomial(std::move(coeffs));
}

void Polynomial::strip() {
  for (auto& c : coeffs_) c.canonicalize();
  while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.emplace_back(0);
}

int Polynomial::degree() const { return is_zero() ? -1 : static_cast<int>(coeffs_.size()) - 1; }

Rational Polynomial::coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }

Polynomial Polynomial::monic() const {
  if (is_zero() || leading() == 1) return *this;
  return scaled(1 / leading());
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() == 1) return Polynomial();
  std::vector<Rational> out(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) out[k - 1] = coeffs_[k] * static_cast<long>(k);
  return Polynomial(std::move(out));
}

Polynomial Polynomial::scaled(const Rational& c) const {
  if (c == 0) return Polynomial();
  std::vector<Rational> out(coeffs_);
  for (auto& x : out) x *= c;
  return Polynomial(std::move(out));
}

Polynomial Polynomial::shifted(std::size_t k) const {
  if (is_zero() || k == 0) return *this;
  std::vector<Rational> out(k, Rational(0));
  out.insert(out.end(), coeffs_.begin(), coeffs_.end());
  return Polynomial(std::move(out));
}

Rational Polynomial::eval(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::complex<double> Polynomial::eval(std::complex<double> x) const {
  std::complex<double> acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

std::vector<double> Polynomial::to_double() const {
  std::vector<double> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c.get_d());
  return out;
}

Polynomial Polynomial::operator-() const {
  std::vector<Rational> out(coeffs_);
  for (auto& c : out) c = -c;
  return Polynomial(std::move(out));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  strip();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  strip();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Polynomial(std::move(out));
}

std::string Polynomial::str(const char* var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    const Rational& c = coeffs_[k];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    bool show_coeff = k == 0 || mag != 1;
    if (show_coeff) os << to_string(mag);
    if (k > 0) {
      if (show_coeff) os << "*";
      os << var;
      if (k > 1) os << "^" << k;
    }
    first = false;
  }
  return os.str();
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw ZeroDenominator("polynomial division by zero");
  if (a.degree() < b.degree()) return {Polynomial(), a};
  if (b.is_constant()) return {a.scaled(1 / b.leading()), Polynomial()};
  std::vector<Rational> rem(a.coeffs());
  const auto& d = b.coeffs();
  const std::size_t db = d.size() - 1;
  std::vector<Rational> quot(rem.size() - db, Rational(0));
  Rational inv_lead = 1 / b.leading();
  for (std::size_t k = rem.size(); k-- > db;) {
    if (rem[k] == 0) continue;
    Rational q = rem[k] * inv_lead;
    quot[k - db] = q;
    for (std::size_t j = 0; j <= db; ++j) rem[k - db + j] -= q * d[j];
  }
  rem.resize(db);
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial exact_div(const Polynomial& a, const Polynomial& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw IdentityCheckFailed("inexact polynomial division");
  return q;
}

namespace {

using ZPoly = std::vector<mpz_class>;

// Integer multiple of p with coprime coefficients and positive leading term.
ZPoly primitive_integer(const Polynomial& p) {
  mpz_class den = 1;
  for (const auto& c : p.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  ZPoly out;
  out.reserve(p.coeffs().size());
  mpz_class content = 0;
  for (const auto& c : p.coeffs()) {
    out.push_back(c.get_num() * (den / c.get_den()));
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), out.back().get_mpz_t());
  }
  if (out.back() < 0) content = -content;
  if (content != 0 && content != 1)
    for (auto& c : out) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content.get_mpz_t());
  return out;
}

void make_primitive(ZPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
  mpz_class content = 0;
  for (const auto& c : p) {
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
    if (content == 1) break;
  }
  if (p.back() < 0) content = -content;
  if (content != 0 && content != 1)
    for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content.get_mpz_t());
}

// Pseudo-remainder of a by b (lc(b)^k * a mod b) over the integers.
ZPoly pseudo_remainder(ZPoly a, const ZPoly& b) {
  const std::size_t db = b.size() - 1;
  const mpz_class& lb = b.back();
  while (a.size() - 1 >= db && !(a.size() == 1 && a[0] == 0)) {
    mpz_class la = a.back();
    const std::size_t shift = a.size() - 1 - db;
    for (auto& c : a) c *= lb;
    for (std::size_t k = 0; k <= db; ++k) a[shift + k] -= la * b[k];
    a.pop_back();
    while (a.size() > 1 && a.back() == 0) a.pop_back();
    if (a.empty()) a.push_back(0);
    if (db == 0) break;
  }
  return a;
}

constexpr std::uint64_t kProbePrime = (std::uint64_t{1} << 62) - 57;

std::uint64_t mulmod(std::uint64_t x, std::uint64_t y) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % kProbePrime);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, b = mulmod(b, b))
    if (e & 1) r = mulmod(r, b);
  return r;
}

std::vector<std::uint64_t> reduce_mod(const ZPoly& p) {
  std::vector<std::uint64_t> out;
  out.reserve(p.size());
  mpz_class r;
  const mpz_class m(std::to_string(kProbePrime));
  for (const auto& c : p) {
    mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    out.push_back(std::stoull(r.get_str()));
  }
  return out;
}

// Degree of gcd(a, b) modulo the probe prime; an upper bound on the degree
// over Q when neither leading coefficient vanishes.
int modular_gcd_degree(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
  auto trim = [](std::vector<std::uint64_t>& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
  };
  while (!(b.size() == 1 && b[0] == 0)) {
    const std::uint64_t inv = powmod(b.back(), kProbePrime - 2);
    const std::size_t db = b.size() - 1;
    while (a.size() - 1 >= db && !(a.size() == 1 && a[0] == 0)) {
      const std::uint64_t f = mulmod(a.back(), inv);
      const std::size_t shift = a.size() - 1 - db;
      for (std::size_t k = 0; k <= db; ++k) a[shift + k] = (a[shift + k] + kProbePrime - mulmod(f, b[k])) % kProbePrime;
      a.pop_back();
      if (a.empty()) a.push_back(0);
      trim(a);
      if (db == 0) break;
    }
    std::swap(a, b);
  }
  return static_cast<int>(a.size()) - 1;
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.is_zero() ? Polynomial() : b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Polynomial::constant(1);

  ZPoly x = primitive_integer(a), y = primitive_integer(b);
  auto xm = reduce_mod(x), ym = reduce_mod(y);
  if (xm.back() != 0 && ym.back() != 0 && modular_gcd_degree(xm, ym) == 0) return Polynomial::constant(1);

  // Primitive remainder sequence over Z.
  if (x.size() < y.size()) std::swap(x, y);
  while (!(y.size() == 1 && y[0] == 0)) {
    if (y.size() == 1) return Polynomial::constant(1);
    ZPoly r = pseudo_remainder(std::move(x), y);
    make_primitive(r);
    x = std::move(y);
    y = std::move(r);
  }
  std::vector<Rational> c;
  c.reserve(x.size());
  for (auto& v : x) c.emplace_back(v);
  return Polynomial(std::move(c)).monic();
}

Polynomial lcm(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  if (a.is_constant()) return b.monic();
  if (b.is_constant()) return a.monic();
  Polynomial g = gcd(a, b);
  return (exact_div(a, g) * b).monic();
}

std::vector<std::pair<Polynomial, int>> square_free_factors(const Polynomial& p) {
  std::vector<std::pair<Polynomial, int>> out;
  if (p.degree() <= 0) return out;
  Polynomial f = p.monic();
  Polynomial df = f.derivative();
  Polynomial a = gcd(f, df);
  Polynomial b = exact_div(f, a);
  Polynomial c = exact_div(df, a);
  Polynomial d = c - b.derivative();
  int multiplicity = 1;
  while (b.degree() > 0) {
    Polynomial g = gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g.monic(), multiplicity);
    b = exact_div(b, g);
    c = exact_div(d, g);
    d = c - b.derivative();
    ++multiplicity;
  }
  return out;
}

}  // namespace realstab
