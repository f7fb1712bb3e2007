#include "beltrami/exact_poly.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace beltrami {

// ---------------------------------------------------------------- ExactScalar

ExactScalar::ExactScalar(const Rational& c, int pi_power) { add_term(pi_power, c); }

void ExactScalar::add_term(int k, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Rational ExactScalar::coefficient(int k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Rational(0) : it->second;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) {
  ExactScalar r;
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_) r.add_term(ka + kb, ca * cb);
  return *this = r;
}

ExactScalar ExactScalar::operator-() const {
  ExactScalar r;
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

ExactScalar ExactScalar::divided_by(const ExactScalar& d) const {
  if (!d.is_monomial()) throw std::domain_error("ExactScalar division needs a single-term divisor");
  const auto& [kd, cd] = *d.terms_.begin();
  ExactScalar r;
  for (const auto& [k, c] : terms_) r.terms_.emplace(k - kd, c / cd);
  return r;
}

double ExactScalar::to_double() const {
  double s = 0.0;
  for (const auto& [k, c] : terms_) s += c.get_d() * std::pow(std::numbers::pi, k);
  return s;
}

std::string ExactScalar::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << it->second.get_num().get_str() << "/" << it->second.get_den().get_str() << " * pi^" << it->first;
  }
  return os.str();
}

// ---------------------------------------------------------------- monomials

std::vector<monomial::Key> monomial::of_degree(int d) {
  std::vector<Key> out;
  for (int a1 = d; a1 >= 0; --a1)
    for (int a2 = d - a1; a2 >= 0; --a2)
      for (int a3 = d - a1 - a2; a3 >= 0; --a3) out.push_back(pack(a1, a2, a3, d - a1 - a2 - a3));
  std::sort(out.begin(), out.end());
  return out;
}

RealPoly to_real(const RationalPoly& p) {
  RealPoly r;
  for (const auto& [k, c] : p.terms()) r.add_term(k, c.get_d());
  return r;
}

namespace {

template <class C>
C from_rational(const Rational& q) {
  if constexpr (std::is_same_v<C, Rational>) {
    return q;
  } else {
    return q.get_d();
  }
}

// d/dx_i of a single monomial, as (coefficient, key); coefficient 0 when absent.
std::pair<int, monomial::Key> partial(monomial::Key k, int i) {
  const int e = monomial::exponent(k, i);
  if (e == 0) return {0, 0};
  return {e, k - monomial::unit(i)};
}

Rational factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(f);
}

// (x1^2+x2^2+x3^2)^j or (x1^2+...+x4^2)^j by the multinomial theorem.
RationalPoly power_of_square_sum(int j, int nvars) {
  RationalPoly out;
  const Rational jf = factorial(j);
  for (int i1 = 0; i1 <= j; ++i1)
    for (int i2 = 0; i1 + i2 <= j; ++i2)
      for (int i3 = 0; i1 + i2 + i3 <= j; ++i3) {
        const int i4 = j - i1 - i2 - i3;
        if (nvars == 3 && i4 != 0) continue;
        Rational c = jf / (factorial(i1) * factorial(i2) * factorial(i3) * factorial(i4));
        out.add_term(monomial::pack(2 * i1, 2 * i2, 2 * i3, 2 * i4), c);
      }
  return out;
}

const RationalPoly& cached_power(int j, int nvars) {
  thread_local std::map<std::pair<int, int>, RationalPoly> cache;
  auto key = std::make_pair(j, nvars);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, power_of_square_sum(j, nvars)).first;
  return it->second;
}

// (1 - x1^2 - x2^2 - x3^2)^m
const RationalPoly& cached_sphere_rewrite(int m) {
  thread_local std::map<int, RationalPoly> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  RationalPoly out;
  for (int j = 0; j <= m; ++j) {
    Rational binom = factorial(m) / (factorial(j) * factorial(m - j));
    if (j % 2) binom = -binom;
    out += cached_power(j, 3) * binom;
  }
  return cache.emplace(m, std::move(out)).first->second;
}

}  // namespace

template <class C>
Poly4<C> linear_field_derivative(const Poly4<C>& p, const Matrix4Q& L) {
  Poly4<C> r;
  for (const auto& [k, c] : p.terms()) {
    for (int j = 0; j < 4; ++j) {
      auto [e, kd] = partial(k, j);
      if (e == 0) continue;
      // (Lx)_j = sum_l L_jl x_l
      for (int l = 0; l < 4; ++l) {
        if (sgn(L[j][l]) == 0) continue;
        r.add_term(monomial::multiply(kd, monomial::unit(l)), c * from_rational<C>(L[j][l]) * C(e));
      }
    }
  }
  return r;
}

template <class C>
Poly4<C> euclidean_laplacian(const Poly4<C>& p) {
  Poly4<C> r;
  for (const auto& [k, c] : p.terms()) {
    for (int i = 0; i < 4; ++i) {
      const int e = monomial::exponent(k, i);
      if (e < 2) continue;
      r.add_term(k - 2 * monomial::unit(i), c * C(e * (e - 1)));
    }
  }
  return r;
}

template <class C>
Poly4<C> sphere_laplacian_raw(const Poly4<C>& p) {
  Poly4<C> r;
  const int dmax = p.degree();
  for (int d = 0; d <= dmax; ++d) {
    Poly4<C> pd = p.homogeneous_part(d);
    if (pd.is_zero()) continue;
    r += pd * C(d * (d + 2));
    r -= euclidean_laplacian(pd);
  }
  return r;
}

template <class C>
Poly4<C> linear_substitution(const Poly4<C>& p, const Matrix4Q& M) {
  std::array<Poly4<C>, 4> images;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (sgn(M[i][j]) != 0) images[i] += Poly4<C>::variable(j) * from_rational<C>(M[i][j]);
  Poly4<C> r;
  for (const auto& [k, c] : p.terms()) {
    Poly4<C> t(c);
    for (int i = 0; i < 4; ++i) {
      const int e = monomial::exponent(k, i);
      if (e) t = t * images[i].pow(e);
    }
    r += t;
  }
  return r;
}

template RationalPoly linear_field_derivative(const RationalPoly&, const Matrix4Q&);
template RealPoly linear_field_derivative(const RealPoly&, const Matrix4Q&);
template RationalPoly euclidean_laplacian(const RationalPoly&);
template RealPoly euclidean_laplacian(const RealPoly&);
template RationalPoly sphere_laplacian_raw(const RationalPoly&);
template RealPoly sphere_laplacian_raw(const RealPoly&);
template RationalPoly linear_substitution(const RationalPoly&, const Matrix4Q&);
template RealPoly linear_substitution(const RealPoly&, const Matrix4Q&);

// ---------------------------------------------------------------- integration

Rational sphere_moment(const Exponents& a) {
  int total = 0;
  Rational prod(2);
  for (int e : a) {
    if (e < 0) throw std::invalid_argument("negative exponent");
    if (e % 2) return Rational(0);
    const int b = e / 2;
    // Gamma(b + 1/2) / sqrt(pi) = (2b)! / (4^b b!)
    Rational g = factorial(2 * b) / factorial(b);
    mpz_class four_b;
    mpz_ui_pow_ui(four_b.get_mpz_t(), 4, static_cast<unsigned long>(b));
    prod *= g / Rational(four_b);
    total += b;
  }
  prod /= factorial(total + 1);
  prod.canonicalize();
  return prod;
}

double sphere_moment_real(const Exponents& a) {
  int total = 0;
  double prod = 2.0 * std::numbers::pi * std::numbers::pi;
  for (int e : a) {
    if (e % 2) return 0.0;
    const int b = e / 2;
    // (2b-1)!! / 2^b
    for (int j = 1; j <= b; ++j) prod *= (2.0 * j - 1.0) / 2.0;
    total += b;
  }
  for (int j = 2; j <= total + 1; ++j) prod /= j;
  return prod;
}

ExactScalar integrate_monomial(const Exponents& a) { return ExactScalar(sphere_moment(a), 2); }

ExactScalar integrate_poly(const RationalPoly& p) {
  Rational s(0);
  for (const auto& [k, c] : p.terms()) {
    const Exponents a = monomial::unpack(k);
    if ((a[0] | a[1] | a[2] | a[3]) & 1) continue;
    s += c * sphere_moment(a);
  }
  return ExactScalar(s, 2);
}

double integrate_poly(const RealPoly& p) {
  // Moments are cached per call since products of fields repeat exponent tuples rarely.
  double s = 0.0, comp = 0.0;
  for (const auto& [k, c] : p.terms()) {
    const Exponents a = monomial::unpack(k);
    if ((a[0] | a[1] | a[2] | a[3]) & 1) continue;
    // Neumaier summation keeps long alternating sums reproducible.
    const double v = c * sphere_moment_real(a);
    const double t = s + v;
    comp += std::fabs(s) >= std::fabs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  return s + comp;
}

RationalPoly homogenize(const RationalPoly& p, int k) {
  RationalPoly out;
  for (const auto& [key, c] : p.terms()) {
    const int d = monomial::degree(key);
    if (d > k || (k - d) % 2) throw std::invalid_argument("homogenize: degree or parity mismatch");
    RationalPoly t = RationalPoly::term(monomial::unpack(key), c);
    if (k > d) t = t * cached_power((k - d) / 2, 4);
    out += t;
  }
  return out;
}

// ---------------------------------------------------------------- SphereScalar

SphereScalar canonicalize(const RationalPoly& p) { return SphereScalar(p); }

SphereScalar::SphereScalar(const RationalPoly& p) {
  for (const auto& [k, c] : p.terms()) {
    const int a4 = monomial::exponent(k, 3);
    if (a4 < 2) {
      p_.add_term(k, c);
      continue;
    }
    const int m = a4 / 2;
    const monomial::Key rest = k - static_cast<monomial::Key>(2 * m);
    for (const auto& [kr, cr] : cached_sphere_rewrite(m).terms()) p_.add_term(monomial::multiply(rest, kr), c * cr);
  }
}

SphereScalar operator*(const SphereScalar& a, const SphereScalar& b) { return SphereScalar(a.p_ * b.p_); }

ExactScalar integrate_poly(const SphereScalar& s) { return integrate_poly(s.poly()); }

SphereScalar directional_derivative(const SphereScalar& s, const Matrix4Q& L) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (L[i][j] != -L[j][i]) throw std::invalid_argument("directional_derivative: L is not antisymmetric");
  return SphereScalar(linear_field_derivative(s.poly(), L));
}

SphereScalar laplace_beltrami(const SphereScalar& s) { return SphereScalar(sphere_laplacian_raw(s.poly())); }

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  RationalPoly parse() {
    RationalPoly p = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const char* what) const {
    throw std::invalid_argument(std::string("parse_poly: ") + what + " at offset " + std::to_string(pos_) +
                                " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  RationalPoly expr() {
    RationalPoly p = product();
    for (;;) {
      if (accept('+')) {
        p += product();
      } else if (accept('-')) {
        p -= product();
      } else {
        return p;
      }
    }
  }
  RationalPoly product() {
    RationalPoly p = unary();
    for (;;) {
      skip();
      if (accept('*')) {
        p = p * unary();
      } else if (accept('/')) {
        RationalPoly d = unary();
        if (d.degree() != 0) fail("division by a non-constant");
        p *= Rational(1) / d.terms().begin()->second;
      } else if (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '(')) {
        p = p * unary();  // implicit product
      } else {
        return p;
      }
    }
  }
  RationalPoly unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    RationalPoly b = atom();
    if (accept('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      b = b.pow(std::stoi(std::string(s_.substr(start, pos_ - start))));
    }
    return b;
  }
  RationalPoly atom() {
    skip();
    if (accept('(')) {
      RationalPoly p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return RationalPoly(Rational(mpz_class(std::string(s_.substr(start, pos_ - start)))));
    }
    if (c == 'x' && pos_ + 1 < s_.size() && s_[pos_ + 1] >= '1' && s_[pos_ + 1] <= '4') {
      pos_ += 2;
      return RationalPoly::variable(s_[pos_ - 1] - '1');
    }
    const std::string_view names = "xyzw";
    const auto idx = names.find(c);
    if (idx != std::string_view::npos) {
      ++pos_;
      return RationalPoly::variable(static_cast<int>(idx));
    }
    fail("unexpected character");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

RationalPoly parse_poly(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const RationalPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [k, c] = *it;
    Rational a = abs(c);
    os << (sgn(c) < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    first = false;
    const bool constant = monomial::degree(k) == 0;
    if (a != 1 || constant) os << a.get_str() << (constant ? "" : "*");
    bool firstvar = true;
    for (int i = 0; i < 4; ++i) {
      const int e = monomial::exponent(k, i);
      if (!e) continue;
      if (!firstvar) os << "*";
      firstvar = false;
      os << "x" << (i + 1);
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

}  // namespace beltrami
