#pragma once

// Exact polynomial arithmetic on R^4 and exact integration over the unit 3-sphere.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace beltrami {

using Rational = mpq_class;
using Exponents = std::array<int, 4>;

// Finite Laurent combination sum_k c_k pi^k with rational c_k.
class ExactScalar {
 public:
  ExactScalar() = default;
  ExactScalar(const Rational& c, int pi_power = 0);  // NOLINT(google-explicit-constructor)
  ExactScalar(long c) : ExactScalar(Rational(c)) {}   // NOLINT(google-explicit-constructor)

  static ExactScalar pi(int power = 1) { return ExactScalar(Rational(1), power); }

  const std::map<int, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Coefficient of pi^k.
  Rational coefficient(int k) const;
  // True when exactly one power of pi carries a nonzero coefficient.
  bool is_monomial() const { return terms_.size() == 1; }

  ExactScalar& operator+=(const ExactScalar& o);
  ExactScalar& operator-=(const ExactScalar& o);
  ExactScalar& operator*=(const ExactScalar& o);
  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
  ExactScalar operator-() const;
  friend bool operator==(const ExactScalar& a, const ExactScalar& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

  // Division by a single-term scalar; throws std::domain_error otherwise.
  ExactScalar divided_by(const ExactScalar& d) const;

  double to_double() const;
  // "p/q * pi^k" terms joined by " + ", or "0".
  std::string to_string() const;

 private:
  void add_term(int k, const Rational& c);
  std::map<int, Rational> terms_;
};

// Packed monomial exponent: 8 bits per variable, x1 in the high byte.
namespace monomial {
using Key = std::uint32_t;
inline Key pack(int a1, int a2, int a3, int a4) {
  return (static_cast<Key>(a1) << 24) | (static_cast<Key>(a2) << 16) | (static_cast<Key>(a3) << 8) |
         static_cast<Key>(a4);
}
inline Key pack(const Exponents& a) { return pack(a[0], a[1], a[2], a[3]); }
inline int exponent(Key k, int i) { return static_cast<int>((k >> (8 * (3 - i))) & 0xFFu); }
inline Exponents unpack(Key k) { return {exponent(k, 0), exponent(k, 1), exponent(k, 2), exponent(k, 3)}; }
inline int degree(Key k) { return exponent(k, 0) + exponent(k, 1) + exponent(k, 2) + exponent(k, 3); }
// Product of monomials. Exponents stay below 256 for every degree used here.
inline Key multiply(Key a, Key b) { return a + b; }
inline Key unit(int i) { return static_cast<Key>(1) << (8 * (3 - i)); }
// All exponent tuples of total degree d, in increasing packed order.
std::vector<Key> of_degree(int d);
}  // namespace monomial

namespace detail {
inline bool coefficient_is_zero(const Rational& c) { return sgn(c) == 0; }
inline bool coefficient_is_zero(double c) { return c == 0.0; }
}  // namespace detail

// Sparse polynomial in x1..x4 with coefficients in C (Rational or double).
template <class C>
class Poly4 {
 public:
  using Coefficient = C;
  using Terms = std::map<monomial::Key, C>;

  Poly4() = default;
  Poly4(const C& c) { add_term(monomial::pack(0, 0, 0, 0), c); }  // NOLINT(google-explicit-constructor)
  template <class I, std::enable_if_t<std::is_integral_v<I>, int> = 0>
  Poly4(I c) : Poly4(C(static_cast<long>(c))) {}  // NOLINT(google-explicit-constructor)

  static Poly4 variable(int i) {
    Poly4 p;
    p.add_term(monomial::unit(i), C(1));
    return p;
  }
  static Poly4 term(const Exponents& a, const C& c) {
    Poly4 p;
    p.add_term(monomial::pack(a), c);
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  int degree() const {
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, monomial::degree(k));
    return d;
  }
  C coefficient(const Exponents& a) const {
    auto it = terms_.find(monomial::pack(a));
    return it == terms_.end() ? C(0) : it->second;
  }

  void add_term(monomial::Key k, const C& c) {
    if (detail::coefficient_is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (detail::coefficient_is_zero(it->second)) terms_.erase(it);
    }
  }

  Poly4& operator+=(const Poly4& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  Poly4& operator-=(const Poly4& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  Poly4& operator*=(const C& s) {
    if (detail::coefficient_is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }
  friend Poly4 operator+(Poly4 a, const Poly4& b) { return a += b; }
  friend Poly4 operator-(Poly4 a, const Poly4& b) { return a -= b; }
  friend Poly4 operator*(Poly4 a, const C& s) { return a *= s; }
  friend Poly4 operator*(const C& s, Poly4 a) { return a *= s; }
  Poly4 operator-() const {
    Poly4 r(*this);
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
  }
  friend Poly4 operator*(const Poly4& a, const Poly4& b) {
    Poly4 r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) r.add_term(monomial::multiply(ka, kb), ca * cb);
    return r;
  }
  Poly4& operator*=(const Poly4& o) { return *this = *this * o; }
  friend bool operator==(const Poly4& a, const Poly4& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Poly4& a, const Poly4& b) { return !(a == b); }

  Poly4 pow(int n) const {
    Poly4 r(C(1)), base(*this);
    while (n > 0) {
      if (n & 1) r = r * base;
      n >>= 1;
      if (n) base = base * base;
    }
    return r;
  }

  // Part of total degree d.
  Poly4 homogeneous_part(int d) const {
    Poly4 r;
    for (const auto& [k, c] : terms_)
      if (monomial::degree(k) == d) r.terms_.emplace(k, c);
    return r;
  }
  Poly4 parity_part(int parity) const {
    Poly4 r;
    for (const auto& [k, c] : terms_)
      if (monomial::degree(k) % 2 == parity) r.terms_.emplace(k, c);
    return r;
  }

  double evaluate(const std::array<double, 4>& x) const;

 private:
  Terms terms_;
};

using RationalPoly = Poly4<Rational>;
using RealPoly = Poly4<double>;

template <class C>
double Poly4<C>::evaluate(const std::array<double, 4>& x) const {
  double sum = 0.0;
  for (const auto& [k, c] : terms_) {
    double v;
    if constexpr (std::is_same_v<C, Rational>) {
      v = c.get_d();
    } else {
      v = c;
    }
    for (int i = 0; i < 4; ++i) {
      const int e = monomial::exponent(k, i);
      for (int j = 0; j < e; ++j) v *= x[i];
    }
    sum += v;
  }
  return sum;
}

RealPoly to_real(const RationalPoly& p);

using Matrix4Q = std::array<std::array<Rational, 4>, 4>;

// Derivative of p along the linear field x -> Lx (no sphere reduction).
template <class C>
Poly4<C> linear_field_derivative(const Poly4<C>& p, const Matrix4Q& L);
// Euclidean Laplacian on R^4.
template <class C>
Poly4<C> euclidean_laplacian(const Poly4<C>& p);
// Nonnegative Laplace-Beltrami operator of the restriction of p to S^3.
template <class C>
Poly4<C> sphere_laplacian_raw(const Poly4<C>& p);
// Substitution x_i -> sum_j M_ij y_j.
template <class C>
Poly4<C> linear_substitution(const Poly4<C>& p, const Matrix4Q& M);

// Coefficient r of the moment  int_{S^3} x^a dV = r * pi^2.
Rational sphere_moment(const Exponents& a);
// Same moment in floating point, including the factor pi^2.
double sphere_moment_real(const Exponents& a);

ExactScalar integrate_monomial(const Exponents& a);
ExactScalar integrate_poly(const RationalPoly& p);
double integrate_poly(const RealPoly& p);

// Polynomial equal to p on S^3 and homogeneous of degree k (k >= deg p, same parity
// as every monomial of p). Throws std::invalid_argument on a parity clash.
RationalPoly homogenize(const RationalPoly& p, int k);

// Parses expressions such as "3*x1^2 - x2*x4 + 1/2" (variables x1..x4 or x,y,z,w).
RationalPoly parse_poly(std::string_view text);
std::string to_string(const RationalPoly& p);

// Polynomial restricted to S^3, kept in the normal form with x4-degree at most one.
class SphereScalar {
 public:
  SphereScalar() = default;
  SphereScalar(const RationalPoly& p);  // NOLINT(google-explicit-constructor)
  SphereScalar(long c) : SphereScalar(RationalPoly(Rational(c))) {}  // NOLINT(google-explicit-constructor)
  SphereScalar(const Rational& c) : SphereScalar(RationalPoly(c)) {}  // NOLINT(google-explicit-constructor)

  const RationalPoly& poly() const { return p_; }
  RationalPoly even_part() const { return p_.parity_part(0); }
  RationalPoly odd_part() const { return p_.parity_part(1); }
  bool is_zero() const { return p_.is_zero(); }
  int degree() const { return p_.degree(); }

  SphereScalar& operator+=(const SphereScalar& o) {
    p_ += o.p_;
    return *this;
  }
  SphereScalar& operator-=(const SphereScalar& o) {
    p_ -= o.p_;
    return *this;
  }
  SphereScalar& operator*=(const Rational& s) {
    p_ *= s;
    return *this;
  }
  friend SphereScalar operator+(SphereScalar a, const SphereScalar& b) { return a += b; }
  friend SphereScalar operator-(SphereScalar a, const SphereScalar& b) { return a -= b; }
  friend SphereScalar operator*(SphereScalar a, const Rational& s) { return a *= s; }
  friend SphereScalar operator*(const Rational& s, SphereScalar a) { return a *= s; }
  friend SphereScalar operator*(const SphereScalar& a, const SphereScalar& b);
  SphereScalar operator-() const {
    SphereScalar r;
    r.p_ = -p_;
    return r;
  }
  friend bool operator==(const SphereScalar& a, const SphereScalar& b) { return a.p_ == b.p_; }
  friend bool operator!=(const SphereScalar& a, const SphereScalar& b) { return !(a == b); }

  double evaluate(const std::array<double, 4>& x) const { return p_.evaluate(x); }

 private:
  struct Reduced {};
  SphereScalar(RationalPoly p, Reduced) : p_(std::move(p)) {}
  RationalPoly p_;
};

SphereScalar canonicalize(const RationalPoly& p);
ExactScalar integrate_poly(const SphereScalar& s);
// Rejects a non-antisymmetric L with std::invalid_argument.
SphereScalar directional_derivative(const SphereScalar& s, const Matrix4Q& L);
SphereScalar laplace_beltrami(const SphereScalar& s);

}  // namespace beltrami
