#include "beltrami/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>

namespace beltrami {

namespace {

constexpr double kPi = 3.14159265358979323846;

RealFrameField combination(const std::vector<RealFrameField>& basis, const double* c, std::size_t n,
                           std::size_t offset = 0) {
  RealFrameField out;
  for (std::size_t i = 0; i < n; ++i)
    if (c[i] != 0.0) out += c[i] * basis.at(offset + i);
  return out;
}

RealPoly pointwise_norm_sq(const RealFrameField& F) { return pointwise_dot(F, F); }

bool is_p2_index(std::size_t i) {
  const auto& p = HopfPerturbation::kP2Indices;
  return std::find(p.begin(), p.end(), static_cast<int>(i) + 1) != p.end();
}

}  // namespace

const std::vector<RealFrameField>& unit_basis(int eigenvalue) {
  static std::mutex mutex;
  static std::map<int, std::vector<RealFrameField>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(eigenvalue);
  if (it == cache.end()) {
    const AtlasEntry& e = atlas_entry(eigenvalue);
    std::vector<RealFrameField> v;
    for (std::size_t i = 0; i < e.dimension(); ++i) v.push_back(e.unit_field(i));
    it = cache.emplace(eigenvalue, std::move(v)).first;
  }
  return it->second;
}

// ---------------------------------------------------------------- HopfPerturbation

RealFrameField HopfPerturbation::W_minus1() const { return combination(unit_basis(-2), beta.data(), 3); }
RealFrameField HopfPerturbation::Z1() const { return combination(unit_basis(3), a.data(), 4); }
RealFrameField HopfPerturbation::Z2() const { return combination(unit_basis(3), a.data() + 4, 4, 4); }
RealFrameField HopfPerturbation::W3() const { return combination(unit_basis(4), b.data(), 15); }

RealFrameField HopfPerturbation::P1() const {
  auto c = b;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (is_p2_index(i)) c[i] = 0.0;
  return combination(unit_basis(4), c.data(), 15);
}

RealFrameField HopfPerturbation::P2() const {
  auto c = b;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!is_p2_index(i)) c[i] = 0.0;
  return combination(unit_basis(4), c.data(), 15);
}

RealFrameField HopfPerturbation::W_hat0() const {
  RealFrameField out;
  for (const auto& [mu, f] : extra) out += f;
  return out;
}

RealFrameField HopfPerturbation::assemble() const { return W_minus1() + Z1() + Z2() + W3() + W_hat0(); }

double HopfPerturbation::norm_sq() const {
  double s = 0.0;
  for (double x : beta) s += x * x;
  for (double x : a) s += x * x;
  for (double x : b) s += x * x;
  for (const auto& [mu, f] : extra) s += beltrami::norm_sq(f);
  return s;
}

double HopfPerturbation::helicity() const {
  double sb = 0.0, sa = 0.0, sv = 0.0;
  for (double x : beta) sb += x * x;
  for (double x : a) sa += x * x;
  for (double x : b) sv += x * x;
  double h = -sb / 2.0 + sa / 3.0 + sv / 4.0;
  for (const auto& [mu, f] : extra) h += beltrami::norm_sq(f) / mu;
  return h;
}

void HopfPerturbation::validate(double tol) const {
  for (const auto& [mu, f] : extra) {
    if (std::find(kExtraEigenvalues.begin(), kExtraEigenvalues.end(), mu) == kExtraEigenvalues.end())
      throw std::invalid_argument("HopfPerturbation: extra key " + std::to_string(mu) + " is not one of -4,-3,5,6,7");
    const double n = beltrami::norm_sq(f);
    const double r = beltrami::norm_sq(f - project_eigen(f, mu));
    if (r > tol * tol * std::max(n, 1e-300))
      throw std::invalid_argument("HopfPerturbation: extra for " + std::to_string(mu) + " is not an eigenfield");
  }
}

// ---------------------------------------------------------------- functionals

double l32_energy(const RealFrameField& F, const HopfGrid& grid) {
  const auto s = sample(F, grid);
  std::vector<double> v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double q = s[i][0] * s[i][0] + s[i][1] * s[i][1] + s[i][2] * s[i][2];
    v[i] = std::pow(q, 0.75);
  }
  return weighted_sum(grid.weights(), v);
}

double l32_energy(const RealFrameField& F, const QuadratureSpec& q) { return l32_energy(F, HopfGrid(q)); }
double l32_energy(const FrameField& F, const QuadratureSpec& q) { return l32_energy(to_real(F), q); }

double d_energy(const RealFrameField& F, const RealFrameField& Y, const HopfGrid& grid) {
  const auto f = sample(F, grid);
  const auto y = sample(Y, grid);
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double q = f[i][0] * f[i][0] + f[i][1] * f[i][1] + f[i][2] * f[i][2];
    const double dot = f[i][0] * y[i][0] + f[i][1] * y[i][1] + f[i][2] * y[i][2];
    v[i] = q > 0.0 ? 1.5 * dot / std::pow(q, 0.25) : 0.0;
  }
  return weighted_sum(grid.weights(), v);
}

double d_energy(const RealFrameField& F, const RealFrameField& Y, const QuadratureSpec& q) {
  return d_energy(F, Y, HopfGrid(q));
}

ExactScalar d_helicity(const FrameField& F, const FrameField& Y) {
  return ExactScalar(2) * inner(curl_inverse(F), Y);
}
double d_helicity(const RealFrameField& F, const RealFrameField& Y) { return 2.0 * inner(curl_inverse(F), Y); }
ExactScalar d2_helicity(const FrameField& Y) { return ExactScalar(2) * helicity(Y); }
double d2_helicity(const RealFrameField& Y) { return 2.0 * helicity(Y); }

namespace {

double checked_helicity(const RealFrameField& F) {
  const double h = helicity(F);
  if (std::abs(h) <= 1e-13 * std::max(norm_sq(F), 1e-300))
    throw UndefinedFunctional("functional undefined: zero helicity");
  return h;
}

}  // namespace

double big_F(const RealFrameField& F, const HopfGrid& grid) {
  const double h = checked_helicity(F);
  return std::pow(l32_energy(F, grid), 4.0 / 3.0) / h;
}
double big_F(const RealFrameField& F, const QuadratureSpec& q) { return big_F(F, HopfGrid(q)); }
double rayleigh_R(const RealFrameField& F, const HopfGrid& grid) { return 1.0 / big_F(F, grid); }
double rayleigh_R(const RealFrameField& F, const QuadratureSpec& q) { return rayleigh_R(F, HopfGrid(q)); }

double hopf_energy() { return 2.0 * kPi * kPi; }
double hopf_helicity() { return kPi * kPi; }
double hopf_F() { return std::pow(hopf_energy(), 4.0 / 3.0) / hopf_helicity(); }
double hopf_prefactor() { return std::cbrt(hopf_energy()) / hopf_helicity(); }

// ---------------------------------------------------------------- derivatives at B1

namespace {

// m[i][j] = int a^i b^j for i + 2j <= order, a = B1.W, b = |W|^2.
struct HopfMoments {
  double m[7][4] = {};
};

HopfMoments hopf_moments(const RealFrameField& W, int order) {
  HopfMoments out;
  const RealPoly& a = W[0];
  const RealPoly b = pointwise_norm_sq(W);
  std::vector<RealPoly> ap{RealPoly(1.0)}, bp{RealPoly(1.0)};
  for (int i = 1; i <= order; ++i) ap.push_back(ap.back() * a);
  for (int j = 1; 2 * j <= order; ++j) bp.push_back(bp.back() * b);
  for (int j = 0; 2 * j <= order; ++j)
    for (int i = 0; i + 2 * j <= order; ++i)
      out.m[i][j] = integrate_poly(ap[static_cast<std::size_t>(i)] * bp[static_cast<std::size_t>(j)]);
  return out;
}

double dE_from_moments(int k, const HopfMoments& h) {
  const auto& m = h.m;
  switch (k) {
    case 1:
      return 1.5 * m[1][0];
    case 2:
      return 0.75 * (2.0 * m[0][1] - m[2][0]);
    case 3:
      return 0.375 * (-6.0 * m[1][1] + 5.0 * m[3][0]);
    case 4:
      return 3.0 / 16.0 * (-12.0 * m[0][2] + 60.0 * m[2][1] - 45.0 * m[4][0]);
    case 5:
      return 15.0 / 32.0 * (60.0 * m[1][2] - 180.0 * m[3][1] + 117.0 * m[5][0]);
    case 6:
      // 6! * 64 * binom(3/4, 6) = -(15/64) * 1989
      return 15.0 / 64.0 * (120.0 * m[0][3] - 1620.0 * m[2][2] + 3510.0 * m[4][1] - 1989.0 * m[6][0]);
    default:
      throw std::out_of_range("dE_at_hopf: order must be in 1..6");
  }
}

// Coefficients of f^alpha for a power series f with f[0] > 0.
std::vector<double> series_power(const std::vector<double>& f, double alpha) {
  const std::size_t N = f.size();
  std::vector<double> g(N, 0.0);
  g[0] = std::pow(f[0], alpha);
  for (std::size_t n = 1; n < N; ++n) {
    double s = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
      s += (alpha * static_cast<double>(k) - static_cast<double>(n - k)) * f[k] * g[n - k];
    g[n] = s / (static_cast<double>(n) * f[0]);
  }
  return g;
}

std::vector<double> series_divide(const std::vector<double>& g, const std::vector<double>& h) {
  std::vector<double> q(g.size(), 0.0);
  for (std::size_t n = 0; n < g.size(); ++n) {
    double s = g[n];
    for (std::size_t k = 1; k <= n && k < h.size(); ++k) s -= h[k] * q[n - k];
    q[n] = s / h[0];
  }
  return q;
}

std::array<double, 7> F_derivatives(const HopfMoments& mom, double h1, double h2) {
  std::vector<double> e(7), h{hopf_helicity(), h1, h2};
  e[0] = hopf_energy();
  double fact = 1.0;
  for (int k = 1; k <= 6; ++k) {
    fact *= k;
    e[static_cast<std::size_t>(k)] = dE_from_moments(k, mom) / fact;
  }
  const auto q = series_divide(series_power(e, 4.0 / 3.0), h);
  std::array<double, 7> out{};
  fact = 1.0;
  for (int k = 0; k <= 6; ++k) {
    if (k > 0) fact *= k;
    out[static_cast<std::size_t>(k)] = fact * q[static_cast<std::size_t>(k)];
  }
  return out;
}

void require_order(int k, int lo) {
  if (k < lo || k > 6) throw std::out_of_range("derivative order outside " + std::to_string(lo) + "..6");
}

}  // namespace

double dE_at_hopf(int k, const RealFrameField& W) {
  require_order(k, 1);
  return dE_from_moments(k, hopf_moments(W, k));
}

double dE_at_hopf(int k, const HopfPerturbation& W) { return dE_at_hopf(k, W.assemble()); }

std::array<double, 7> hopf_F_derivatives(const HopfPerturbation& W) {
  // <B1, W> vanishes: every part lies in an eigenspace other than E1.
  return F_derivatives(hopf_moments(W.assemble(), 6), 0.0, W.helicity());
}

std::array<double, 7> hopf_F_derivatives(const RealFrameField& W) {
  const double h1 = integrate_poly(W[0]);  // 2 H(B1, W) = <B1, W>
  return F_derivatives(hopf_moments(W, 6), h1, helicity(W));
}

double dF_at_hopf(int k, const HopfPerturbation& W) {
  require_order(k, 0);
  if (k == 1) return 0.0;  // B1 is critical for F
  return hopf_F_derivatives(W)[static_cast<std::size_t>(k)];
}

double dF_at_hopf(int k, const RealFrameField& W) {
  require_order(k, 0);
  return hopf_F_derivatives(W)[static_cast<std::size_t>(k)];
}

double taylor6_combination(const HopfPerturbation& W) {
  const auto d = hopf_F_derivatives(W);
  return 3.0 * d[2] + d[3] + d[4] / 4.0 + d[5] / 20.0 + d[6] / 120.0;  // d[1] = 0 at B1
}

CurveSeries hopf_curve_series(const std::vector<RealFrameField>& path, int order) {
  if (order < 0) throw std::invalid_argument("hopf_curve_series: negative order");
  const std::size_t N = static_cast<std::size_t>(order) + 1;
  const auto P = [&](std::size_t k) -> const RealFrameField* { return k >= 1 && k <= path.size() ? &path[k - 1] : nullptr; };

  // |B1 + P(t)|^2 = 1 + sum_k t^k s_k
  std::vector<RealPoly> s(N);
  for (std::size_t k = 1; k < N; ++k) {
    if (const auto* pk = P(k)) s[k] += 2.0 * (*pk)[0];
    for (std::size_t i = 1; i < k; ++i)
      if (P(i) && P(k - i)) s[k] += pointwise_dot(*P(i), *P(k - i));
  }
  // (1 + s)^{3/4} with polynomial coefficients
  std::vector<RealPoly> g(N);
  g[0] = RealPoly(1.0);
  for (std::size_t n = 1; n < N; ++n) {
    RealPoly acc;
    for (std::size_t k = 1; k <= n; ++k) {
      if (s[k].is_zero() || g[n - k].is_zero()) continue;
      const double c = (0.75 * static_cast<double>(k) - static_cast<double>(n - k)) / static_cast<double>(n);
      acc += c * (s[k] * g[n - k]);
    }
    g[n] = acc;
  }
  CurveSeries out;
  out.energy.resize(N);
  for (std::size_t n = 0; n < N; ++n) out.energy[n] = integrate_poly(g[n]);

  out.helicity.assign(N, 0.0);
  out.helicity[0] = hopf_helicity();
  std::vector<RealFrameField> inv;
  for (const auto& p : path) inv.push_back(curl_inverse(p));
  for (std::size_t k = 1; k < N; ++k)
    if (P(k)) out.helicity[k] += integrate_poly((*P(k))[0]);
  for (std::size_t i = 1; i <= path.size(); ++i)
    for (std::size_t j = 1; j <= path.size(); ++j)
      if (i + j < N) out.helicity[i + j] += inner(inv[i - 1], path[j - 1]);

  out.F = series_divide(series_power(out.energy, 4.0 / 3.0), out.helicity);
  return out;
}

double second_variation_R(const RealFrameField& Y1, const RealFrameField& W) {
  std::array<double, 3> c{};
  for (int i = 0; i < 3; ++i) {
    if (Y1[i].degree() > 0) throw std::invalid_argument("second_variation_R: Y1 is not a first eigenfield");
    c[static_cast<std::size_t>(i)] = Y1[i].is_zero() ? 0.0 : Y1[i].terms().begin()->second;
  }
  const double c2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
  if (c2 == 0.0) throw std::invalid_argument("second_variation_R: Y1 vanishes");
  const double wn = norm_sq(W);
  for (int i = 0; i < 3; ++i)
    if (std::abs(integrate_poly(W[i])) > 1e-10 * std::sqrt(std::max(wn, 1e-300) * hopf_energy()))
      throw std::invalid_argument("second_variation_R: W is not orthogonal to E1");
  const RealPoly yw = c[0] * W[0] + c[1] * W[1] + c[2] * W[2];
  const double num = 2.0 * 2.0 * helicity(W) - 2.0 * wn + integrate_poly(yw * yw) / c2;
  const double energy = std::pow(c2, 0.75) * hopf_energy();
  return num / (2.0 * std::pow(energy, 4.0 / 3.0));
}

SecondVariationScan rp3_second_variation_scan(int draws, std::uint64_t seed, int dmax) {
  SecondVariationScan out;
  out.draws = draws;
  out.seed = seed;
  std::vector<const RealFrameField*> fields;
  for (int m = 2; m <= dmax + 2; ++m)
    for (int mu : {m, -m}) {
      if (mu == 2) continue;
      const auto& basis = unit_basis(mu);
      // Coefficients are homogeneous; even degree is the antipodal invariance condition.
      bool even = true;
      for (const auto& f : basis)
        for (int i = 0; i < 3; ++i) even = even && (f[i].is_zero() || f[i].degree() % 2 == 0);
      if (!even) continue;
      out.eigenvalues.push_back(mu);
      for (const auto& f : basis) fields.push_back(&f);
    }
  const RealFrameField b1 = to_real(explicit_field("B1"));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  out.max_ratio = -std::numeric_limits<double>::infinity();
  out.min_ratio = std::numeric_limits<double>::infinity();
  for (int s = 0; s < draws; ++s) {
    RealFrameField W;
    double n2 = 0.0;
    for (const RealFrameField* f : fields) {
      const double c = normal(rng);
      W += c * *f;
      n2 += c * c;
    }
    const double r = second_variation_R(b1, W) / n2;
    out.ratios.push_back(r);
    out.max_ratio = std::max(out.max_ratio, r);
    out.min_ratio = std::min(out.min_ratio, r);
  }
  return out;
}

// ---------------------------------------------------------------- remainder and correction

namespace {

void require_span(const RealFrameField& F, int eigenvalue, std::initializer_list<int> indices, const char* what) {
  const auto& basis = unit_basis(eigenvalue);
  RealFrameField r = F;
  for (int i : indices) r -= inner(F, basis.at(static_cast<std::size_t>(i - 1))) * basis.at(static_cast<std::size_t>(i - 1));
  if (norm_sq(r) > 1e-20 * std::max(norm_sq(F), 1.0)) throw std::invalid_argument(std::string("remainder_field: ") + what);
}

RealPoly monomial_term(int e1, int e2, int e3, int e4, double c) { return RealPoly::term({e1, e2, e3, e4}, c); }

}  // namespace

RealFrameField remainder_field(const RealFrameField& P2, const RealFrameField& Z2) {
  require_span(P2, 4, {10, 12, 15}, "P2 outside span{v10, v12, v15}");
  require_span(Z2, 3, {5, 8}, "Z2 outside span{u5, u8}");
  const RealPoly& z1 = Z2[0];
  const RealPoly& p1 = P2[0];
  const RealPoly zz = pointwise_dot(Z2, Z2);
  const RealPoly pz = pointwise_dot(P2, Z2);
  const RealPoly s1 = -6.0 * pz + 15.0 * (p1 * z1) - 11.25 * (z1 * z1 * z1) + 7.5 * (zz * z1);
  const RealPoly s2 = -6.0 * p1 - 3.0 * zz + 7.5 * (z1 * z1);
  RealFrameField R;
  for (int i = 0; i < 3; ++i) R[i] = s2 * Z2[i] - 6.0 * (z1 * P2[i]);
  R[0] += s1;
  return R;
}

std::array<double, 3> critical_p2_coefficients(double a5, double a8) {
  const double s7 = std::sqrt(7.0);
  return {-s7 * a5 * a8 / (3.0 * kPi), s7 * (a5 * a5 - a8 * a8) / (6.0 * kPi),
          (a5 * a5 + a8 * a8) / (2.0 * std::sqrt(3.0) * kPi)};
}

namespace {

// Cubic potential whose gradient removes the divergence of the remainder field.
RealPoly correction_potential(double a5, double a8, double b10, double b12, double b15) {
  const double p = kPi, p3 = kPi * kPi * kPi;
  const double r3 = std::sqrt(3.0), r21 = std::sqrt(21.0);
  const double D = 945.0 * p3;
  const double a5_2 = a5 * a5, a8_2 = a8 * a8;
  const double d1 = -(-177 * r21 * a8 * b10 * p - 259 * a8_2 * a5 * r3 - 112 * a5_2 * a5 * r3 + 87 * r21 * b12 * a5 * p +
                      189 * p * a5 * b15) / D;
  const double d3 = -(267 * r21 * p * a8 * b12 - 182 * r3 * a8 * a5_2 - 189 * p * b15 * a8 + 259 * a8_2 * a8 * r3 -
                      3 * r21 * p * a5 * b10) / D;
  const double d4 = (177 * r21 * p * a8 * b10 + 259 * r3 * a8_2 * a5 - 14 * r3 * a5_2 * a5 + 75 * r21 * p * b12 * a5 +
                     945 * p * a5 * b15) / D;
  const double d5 = -(3 * r21 * p * a8 * b10 + 182 * r3 * a8_2 * a5 - 259 * r3 * a5_2 * a5 + 267 * r21 * p * a5 * b12 +
                      189 * p * a5 * b15) / D;
  const double d7 = -(267 * r21 * p * a8 * b12 - 14 * r3 * a8 * a5_2 - 189 * p * b15 * a8 + 259 * a8_2 * a8 * r3 +
                      15 * r21 * p * a5 * b10) / D;
  const double d10 = -(87 * r21 * p * a8 * b12 + 259 * r3 * a8 * a5_2 - 189 * p * b15 * a8 + 112 * r3 * a8_2 * a8 +
                       177 * r21 * p * a5 * b10) / D;
  const double d12 = -2.0 / (315.0 * p3) * (-57 * r21 * a5 * b10 * p - 91 * r3 * a8 * a5_2 + 27 * r21 * p * a8 * b12 +
                                            189 * p * b15 * a8);
  const double d14 = -(-15 * r21 * p * a8 * b10 + 14 * r3 * a8_2 * a5 - 259 * a5_2 * a5 * r3 + 267 * r21 * p * b12 * a5 +
                       189 * p * a5 * b15) / D;
  const double d17 = -2.0 / (315.0 * p3) * (27 * r21 * p * a5 * b12 + 91 * r3 * a8_2 * a5 - 189 * p * a5 * b15 +
                                            57 * r21 * p * a8 * b10);
  const double d18 = (75 * r21 * p * a8 * b12 - 259 * r3 * a8 * a5_2 - 945 * p * b15 * a8 + 14 * r3 * a8_2 * a8 -
                      177 * r21 * p * a5 * b10) / D;
  RealPoly G;
  G += monomial_term(3, 0, 0, 0, d1);
  G += monomial_term(2, 0, 1, 0, d3);
  G += monomial_term(1, 2, 0, 0, d4);
  G += monomial_term(1, 0, 2, 0, d5);
  G += monomial_term(0, 2, 1, 0, d7);
  G += monomial_term(0, 0, 3, 0, d10);
  G += monomial_term(1, 1, 0, 1, d12);
  G += monomial_term(1, 0, 0, 2, d14);
  G += monomial_term(0, 1, 1, 1, d17);
  G += monomial_term(0, 0, 1, 2, d18);
  return G;
}

}  // namespace

CorrectionField correction_field(double a5, double a8) {
  const auto [b10, b12, b15] = critical_p2_coefficients(a5, a8);
  const auto& v = unit_basis(4);
  const auto& u = unit_basis(3);
  const RealFrameField P2 = b10 * v[9] + b12 * v[11] + b15 * v[14];
  const RealFrameField Z2 = a5 * u[4] + a8 * u[7];
  CorrectionField out;
  out.potential = correction_potential(a5, a8, b10, b12, b15);
  out.C = remainder_field(P2, Z2) - grad(out.potential);
  out.norm_sq = norm_sq(out.C);
  const RealPoly div = divergence(out.C);
  const HopfGrid grid(QuadratureSpec{12, 24});
  for (const auto& x : grid.points()) out.divergence_sup = std::max(out.divergence_sup, std::abs(div.evaluate(x)));
  return out;
}

// ---------------------------------------------------------------- local scan

LocalMaxReport local_max_scan(const LocalMaxConfig& config) {
  if (!(config.radius > 0.0) || config.radius > 0.1)
    throw std::invalid_argument("local_max_scan: radius must lie in (0, 0.1]");
  if (config.samples < 0) throw std::invalid_argument("local_max_scan: negative sample count");

  std::vector<RealFrameField> fields;
  std::vector<int> mus;
  for (int m = 2; m <= config.dmax + 2; ++m)
    for (int mu : {m, -m})
      for (const auto& f : unit_basis(mu)) {
        fields.push_back(f);
        mus.push_back(mu);
      }
  const auto n = static_cast<Eigen::Index>(fields.size());
  const HopfGrid grid(config.quadrature);
  const SampledBasis basis(grid, fields);
  const std::vector<std::array<double, 3>> hopf(grid.size(), {1.0, 0.0, 0.0});
  const std::vector<double> ones(grid.size(), 1.0);

  // B1 = sqrt(2) pi times the first unit field of E1.
  const double b1_coefficient = std::sqrt(2.0) * kPi;
  const auto energy = [&](const Eigen::VectorXd& c) {
    auto q = basis.squared_norms(c, hopf);
    for (double& x : q) x = std::pow(x, 0.75);
    return weighted_sum(grid.weights(), q);
  };
  const auto helicity_of = [&](const Eigen::VectorXd& c) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double x = c(i);
      if (i == 0) x += b1_coefficient;
      h += x * x / mus[static_cast<std::size_t>(i)];
    }
    return h;
  };

  LocalMaxReport report;
  report.config = config;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  report.R_hopf = helicity_of(zero) / std::pow(energy(zero), 4.0 / 3.0);
  report.samples.resize(static_cast<std::size_t>(config.samples));

#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < config.samples; ++s) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform(0.2, 1.0);
    const bool e1_only = config.e1_only_every > 0 && s % config.e1_only_every == config.e1_only_every - 1;
    Eigen::VectorXd c(n);
    for (Eigen::Index i = 0; i < n; ++i) c(i) = normal(rng);
    if (e1_only)
      for (Eigen::Index i = 0; i < n; ++i)
        if (mus[static_cast<std::size_t>(i)] != 2) c(i) = 0.0;
    const auto w2 = basis.squared_norms(c);
    const double sup = std::sqrt(*std::max_element(w2.begin(), w2.end()));
    c *= config.radius * uniform(rng) / sup;

    LocalMaxSample& out = report.samples[static_cast<std::size_t>(s)];
    out.index = s;
    {
      const auto w = basis.squared_norms(c);
      out.sup_norm = std::sqrt(*std::max_element(w.begin(), w.end()));
    }
    double ne = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (mus[static_cast<std::size_t>(i)] != 2) ne += c(i) * c(i);
    out.non_e1_norm = std::sqrt(ne);
    out.delta_R = helicity_of(c) / std::pow(energy(c), 4.0 / 3.0) - report.R_hopf;
    const bool increase = out.delta_R > config.tol;
    const bool flat_outside_e1 = std::abs(out.delta_R) <= config.tol && out.non_e1_norm > config.e1_tol;
    out.violation = increase || flat_outside_e1;
    if (out.violation) out.coefficients.assign(c.data(), c.data() + n);
  }

  report.max_delta_R_non_e1 = -std::numeric_limits<double>::infinity();
  for (const auto& s : report.samples) {
    if (s.violation) ++report.violations;
    if (s.non_e1_norm > config.e1_tol)
      report.max_delta_R_non_e1 = std::max(report.max_delta_R_non_e1, s.delta_R);
    else
      report.max_abs_delta_R_e1 = std::max(report.max_abs_delta_R_e1, std::abs(s.delta_R));
  }
  return report;
}

}  // namespace beltrami
