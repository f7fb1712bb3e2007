#include "beltrami/annulus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace beltrami {

namespace {

bool same(const TrigInT& x, const TrigInT& y) { return x.a == y.a && x.b == y.b; }

TrigInT derivative(const TrigInT& f, int c) { return {-c * f.b, c * f.a}; }

TrigInT scaled(const TrigInT& f, const Rational& s) { return {f.a * s, f.b * s}; }

bool is_zero(const TrigInT& f) { return sgn(f.a) == 0 && sgn(f.b) == 0; }

}  // namespace

AnnulusMetric annulus_metric(int n) {
  if (n < 1) throw std::invalid_argument("annulus_metric: n must be positive");
  AnnulusMetric g;
  g.n = n;
  g.g_phi = Rational(1, n);
  g.g_phi.canonicalize();
  g.g_t = Rational(n * n);
  g.determinant = g.g_phi * g.g_phi * g.g_t;
  if (g.determinant != 1) throw std::logic_error("annulus_metric: determinant is not 1");
  g.volume = ExactScalar(Rational(8), 3);
  return g;
}

std::vector<AnnulusMode> spectrum_candidates(int n, double cutoff) {
  if (n < 1) throw std::invalid_argument("spectrum_candidates: n must be positive");
  if (!(cutoff > 0)) throw std::invalid_argument("spectrum_candidates: cutoff must be positive");
  const double c2 = cutoff * cutoff;
  const int m1_max = static_cast<int>(std::floor(std::sqrt(c2 / n))) + 1;
  const int m_max = static_cast<int>(std::floor(2.0 * n * cutoff)) + 1;
  std::vector<AnnulusMode> out;
  for (int m1 = 0; m1 <= m1_max; ++m1)
    for (int m2 = 0; m2 <= m1_max; ++m2)
      for (int m = 0; m <= m_max; ++m) {
        const bool t_only = m1 == 0 && m2 == 0;
        if (t_only && (m == 0 || m % 2 != 0)) continue;
        Rational q(m * m, 4 * n * n);
        q.canonicalize();
        const Rational l2 = Rational(n * (m1 * m1 + m2 * m2)) + q;
        const double l = std::sqrt(l2.get_d());
        if (l > cutoff * (1 + 1e-15)) continue;
        for (int branch : {1, -1})
          out.push_back({n, m1, m2, m, branch, l2, branch * l, t_only ? "confirmed" : "candidate"});
      }
  std::sort(out.begin(), out.end(), [](const AnnulusMode& x, const AnnulusMode& y) {
    if (x.lambda_squared != y.lambda_squared) return x.lambda_squared < y.lambda_squared;
    return std::tie(x.m1, x.m2, x.m, y.branch) < std::tie(y.m1, y.m2, y.m, x.branch);
  });
  return out;
}

Rational annulus_mu1(int n) {
  // Every mode with m1^2 + m2^2 > 0 has lambda^2 >= n, so cutoff 1 always contains mu1.
  const auto modes = spectrum_candidates(n, 1.0);
  for (const auto& md : modes) {
    if (md.branch < 0) continue;
    // lambda^2 = (m / 2n)^2 on the confirmed family.
    if (md.m1 == 0 && md.m2 == 0) {
      Rational r(md.m, 2 * n);
      r.canonicalize();
      return r;
    }
    throw std::logic_error("annulus_mu1: lowest mode is not in the t-only family");
  }
  throw std::logic_error("annulus_mu1: no positive mode below cutoff");
}

AnnulusField annulus_curl(const AnnulusField& v, int n) {
  // curl v = -(v2'/n) d_phi1 + (v1'/n) d_phi2 for fields depending on t only.
  Rational inv(1, n);
  inv.canonicalize();
  AnnulusField r;
  r.frequency = v.frequency;
  r.v[0] = scaled(derivative(v.v[1], v.frequency), -inv);
  r.v[1] = scaled(derivative(v.v[0], v.frequency), inv);
  r.v[2] = {Rational(0), Rational(0)};
  return r;
}

FirstEigenfieldCheck first_eigenfields(int n) {
  if (n < 1) throw std::invalid_argument("first_eigenfields: n must be positive");
  FirstEigenfieldCheck c;
  c.lambda = Rational(1, n);
  c.lambda.canonicalize();
  c.v1.frequency = c.v2.frequency = 1;
  c.v1.v = {TrigInT{1, 0}, TrigInT{0, 1}, TrigInT{0, 0}};
  c.v2.v = {TrigInT{0, 1}, TrigInT{-1, 0}, TrigInT{0, 0}};
  c.eigen_equation = c.first_order_system = c.boundary_tangent = c.mean_zero = true;
  const Rational nl = Rational(n) * c.lambda;
  for (const AnnulusField* f : {&c.v1, &c.v2}) {
    const AnnulusField cv = annulus_curl(*f, n);
    for (int i = 0; i < 3; ++i)
      c.eigen_equation = c.eigen_equation && same(cv.v[static_cast<std::size_t>(i)], scaled(f->v[static_cast<std::size_t>(i)], c.lambda));
    // d_t v1 = n lambda v2, d_t v2 = -n lambda v1, n lambda v3 = 0 (no phi dependence).
    c.first_order_system = c.first_order_system && same(derivative(f->v[0], f->frequency), scaled(f->v[1], nl)) &&
                           same(derivative(f->v[1], f->frequency), scaled(f->v[0], -nl)) && is_zero(f->v[2]);
    // v3(0) = b, v3(2 pi) = b for an integer frequency.
    c.boundary_tangent = c.boundary_tangent && sgn(f->v[2].b) == 0;
    // Full periods of sin and cos integrate to zero when the frequency is a nonzero integer.
    c.mean_zero = c.mean_zero && f->frequency != 0;
  }
  return c;
}

std::vector<ChainRow> mu1_chain(int n_max) {
  std::vector<ChainRow> out;
  for (int n = 1; n <= n_max; ++n) {
    ChainRow r;
    r.n = n;
    r.mu1 = annulus_mu1(n);
    r.volume = annulus_metric(n).volume;
    r.normalized = r.mu1.get_d() * std::cbrt(r.volume.to_double());
    out.push_back(r);
  }
  return out;
}

BoundConstants bound_constants() {
  BoundConstants b;
  b.improved = {"improved-domain-bound", "2 * (2 pi^2)^(1/3)", ExactScalar(Rational(16), 2), 0.0};
  b.previous = {"previous-domain-bound", "(4 pi / 3)^(1/3)", ExactScalar(Rational(4, 3), 1), 0.0};
  b.sphere_class = {"sphere-conformal-class-bound", "(16 / pi)^(1/3)", ExactScalar(Rational(16), -1), 0.0};
  for (BoundConstant* c : {&b.improved, &b.previous, &b.sphere_class}) c->value = std::cbrt(c->cube.to_double());
  b.improved_exceeds_previous = b.improved.value > b.previous.value;
  return b;
}

}  // namespace beltrami
