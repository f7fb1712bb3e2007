#include "beltrami/torus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace beltrami {

namespace {

constexpr double kPi = 3.14159265358979323846;
using cd = std::complex<double>;

Wavevector neg(const Wavevector& k) { return {-k[0], -k[1], -k[2]}; }
Wavevector plus(const Wavevector& a, const Wavevector& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
bool is_zero(const Wavevector& k) { return k[0] == 0 && k[1] == 0 && k[2] == 0; }
int norm2(const Wavevector& k) { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; }

// First nonzero component positive.
bool in_half_space(const Wavevector& k) {
  for (int c : k)
    if (c != 0) return c > 0;
  return false;
}

cd dot(const Amplitude& a, const Amplitude& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

using Vec3 = std::array<double, 3>;
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
Vec3 normalized(Vec3 v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  for (auto& c : v) c /= n;
  return v;
}

// s * (v cos(k.x)) or s * (v sin(k.x)) as Fourier modes.
TorusField trig_field(const Wavevector& k, const Vec3& v, bool sine, double s) {
  TorusField f;
  Amplitude plus_k{}, minus_k{};
  for (int i = 0; i < 3; ++i) {
    if (sine) {
      plus_k[static_cast<std::size_t>(i)] = cd(0.0, -0.5 * s * v[static_cast<std::size_t>(i)]);
      minus_k[static_cast<std::size_t>(i)] = cd(0.0, 0.5 * s * v[static_cast<std::size_t>(i)]);
    } else {
      plus_k[static_cast<std::size_t>(i)] = minus_k[static_cast<std::size_t>(i)] = cd(0.5 * s * v[static_cast<std::size_t>(i)], 0.0);
    }
  }
  f.add(k, plus_k);
  f.add(neg(k), minus_k);
  return f;
}

double min_on_grid(const TrigPoly& p, int n = 32) {
  double mn = std::numeric_limits<double>::infinity();
  const double h = 2 * kPi / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) mn = std::min(mn, p.evaluate({h * i, h * j, h * l}));
  return mn;
}

}  // namespace

// ---------------------------------------------------------------- TrigPoly

TrigPoly TrigPoly::constant(double c) {
  TrigPoly p;
  p.add({0, 0, 0}, c);
  return p;
}

TrigPoly TrigPoly::cos_mode(const Wavevector& k, double c) {
  TrigPoly p;
  p.add(k, 0.5 * c);
  p.add(neg(k), 0.5 * c);
  return p;
}

TrigPoly TrigPoly::sin_mode(const Wavevector& k, double c) {
  TrigPoly p;
  p.add(k, cd(0.0, -0.5 * c));
  p.add(neg(k), cd(0.0, 0.5 * c));
  return p;
}

void TrigPoly::add(const Wavevector& k, cd c) {
  if (c == cd(0.0, 0.0)) return;
  auto [it, inserted] = coeffs.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cd(0.0, 0.0)) coeffs.erase(it);
  }
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
  for (const auto& [k, c] : o.coeffs) add(k, c);
  return *this;
}

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
  TrigPoly r;
  for (const auto& [k, c] : a.coeffs)
    for (const auto& [l, d] : b.coeffs) r.add(plus(k, l), c * d);
  return r;
}

TrigPoly operator*(double s, TrigPoly a) {
  for (auto& [k, c] : a.coeffs) c *= s;
  return a;
}

double TrigPoly::mean() const {
  auto it = coeffs.find({0, 0, 0});
  return it == coeffs.end() ? 0.0 : it->second.real();
}

double TrigPoly::evaluate(const std::array<double, 3>& x) const {
  cd s = 0.0;
  for (const auto& [k, c] : coeffs) s += c * std::exp(cd(0.0, k[0] * x[0] + k[1] * x[1] + k[2] * x[2]));
  return s.real();
}

bool TrigPoly::is_real(double tol) const {
  for (const auto& [k, c] : coeffs) {
    auto it = coeffs.find(neg(k));
    const cd other = it == coeffs.end() ? cd(0.0, 0.0) : it->second;
    if (std::abs(c - std::conj(other)) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------- TorusField

void TorusField::add(const Wavevector& k, const Amplitude& a) {
  auto& slot = modes[k];
  for (std::size_t i = 0; i < 3; ++i) slot[i] += a[i];
  if (slot[0] == cd(0.0, 0.0) && slot[1] == cd(0.0, 0.0) && slot[2] == cd(0.0, 0.0)) modes.erase(k);
}

std::array<double, 3> TorusField::evaluate(const std::array<double, 3>& x) const {
  std::array<cd, 3> s{};
  for (const auto& [k, a] : modes) {
    const cd e = std::exp(cd(0.0, k[0] * x[0] + k[1] * x[1] + k[2] * x[2]));
    for (std::size_t i = 0; i < 3; ++i) s[i] += a[i] * e;
  }
  return {s[0].real(), s[1].real(), s[2].real()};
}

TorusField TorusField::curl() const {
  TorusField r;
  for (const auto& [k, a] : modes) {
    const cd i(0.0, 1.0);
    const Amplitude c{i * (double(k[1]) * a[2] - double(k[2]) * a[1]), i * (double(k[2]) * a[0] - double(k[0]) * a[2]),
                      i * (double(k[0]) * a[1] - double(k[1]) * a[0])};
    r.add(k, c);
  }
  return r;
}

TrigPoly TorusField::squared_norm() const {
  TrigPoly p;
  for (const auto& [k, a] : modes)
    for (const auto& [l, b] : modes) p.add(plus(k, l), dot(a, b));
  return p;
}

bool TorusField::is_real(double tol) const {
  for (const auto& [k, a] : modes) {
    auto it = modes.find(neg(k));
    for (std::size_t i = 0; i < 3; ++i) {
      const cd other = it == modes.end() ? cd(0.0, 0.0) : it->second[i];
      if (std::abs(a[i] - std::conj(other)) > tol) return false;
    }
  }
  return true;
}

bool TorusField::divergence_free(double tol) const {
  for (const auto& [k, a] : modes)
    if (std::abs(double(k[0]) * a[0] + double(k[1]) * a[1] + double(k[2]) * a[2]) > tol) return false;
  return true;
}

double TorusField::max_abs_amplitude() const {
  double m = 0.0;
  for (const auto& [k, a] : modes)
    for (const auto& c : a) m = std::max(m, std::abs(c));
  return m;
}

TorusField operator+(TorusField a, const TorusField& b) {
  for (const auto& [k, v] : b.modes) a.add(k, v);
  return a;
}

TorusField operator-(TorusField a, const TorusField& b) { return a + (-1.0) * b; }

TorusField operator*(double s, TorusField a) {
  for (auto& [k, v] : a.modes)
    for (auto& c : v) c *= s;
  return a;
}

double torus_volume() { return 8 * kPi * kPi * kPi; }

double torus_inner(const TorusField& u, const TorusField& v, const TrigPoly& q) {
  cd s = 0.0;
  for (const auto& [k, a] : u.modes)
    for (const auto& [l, b] : v.modes) {
      auto it = q.coeffs.find(neg(plus(k, l)));
      if (it != q.coeffs.end()) s += it->second * dot(a, b);
    }
  return torus_volume() * s.real();
}

double torus_inner(const TorusField& u, const TorusField& v) { return torus_inner(u, v, TrigPoly::constant(1.0)); }

// ---------------------------------------------------------------- ABC flows and the necessary condition

TorusField abc_field(double A, double B, double C) {
  TorusField f;
  // x-component: A sin z + C cos y
  f = f + trig_field({0, 0, 1}, {1, 0, 0}, true, A) + trig_field({0, 1, 0}, {1, 0, 0}, false, C);
  // y-component: B sin x + A cos z
  f = f + trig_field({1, 0, 0}, {0, 1, 0}, true, B) + trig_field({0, 0, 1}, {0, 1, 0}, false, A);
  // z-component: C sin y + B cos x
  f = f + trig_field({0, 1, 0}, {0, 0, 1}, true, C) + trig_field({1, 0, 0}, {0, 0, 1}, false, B);
  return f;
}

SpeedWitness speed_is_constant(const TorusField& F, double tol) {
  const TrigPoly s = F.squared_norm();
  SpeedWitness w;
  w.constant_part = s.mean();
  const double scale = std::max(1.0, std::abs(w.constant_part));
  double best = 0.0;
  for (const auto& [k, c] : s.coeffs) {
    if (is_zero(k)) continue;
    // Prefer the larger coefficient, then the half-space representative for determinism.
    if (std::abs(c) > best + tol * scale || (std::abs(std::abs(c) - best) <= tol * scale && in_half_space(k) && !in_half_space(w.mode))) {
      best = std::abs(c);
      w.mode = k;
      w.coefficient = c;
    }
  }
  w.constant = best <= tol * scale;
  if (w.constant) {
    w.mode = {0, 0, 0};
    w.coefficient = 0.0;
  }
  return w;
}

double first_variation(const TorusField& u, const TrigPoly& phidot, double tol) {
  if (std::abs(phidot.mean()) > tol) throw std::invalid_argument("first_variation: phidot must have zero mean");
  const TrigPoly s = u.squared_norm();
  cd sum = 0.0;
  for (const auto& [k, c] : phidot.coeffs) {
    auto it = s.coeffs.find(neg(k));
    if (it != s.coeffs.end()) sum += c * it->second;
  }
  return torus_volume() * sum.real();
}

TrigPoly abc_speed_direction() {
  TrigPoly p = abc_field(1, 1, 1).squared_norm();
  p.add({0, 0, 0}, -3.0);
  return p;
}

// ---------------------------------------------------------------- pencil

std::vector<TorusBasisField> torus_basis(int kmax) {
  if (kmax < 1) throw std::invalid_argument("torus_basis: kmax must be at least 1");
  const double unit = 1.0 / std::sqrt(torus_volume());
  std::vector<TorusBasisField> out;
  for (int i = 0; i < 3; ++i) {
    Vec3 e{0, 0, 0};
    e[static_cast<std::size_t>(i)] = 1.0;
    TorusField f;
    f.add({0, 0, 0}, {cd(unit * e[0]), cd(unit * e[1]), cd(unit * e[2])});
    out.push_back({f, 0.0, {0, 0, 0}, "constant"});
  }
  std::vector<Wavevector> ks;
  for (int a = -kmax; a <= kmax; ++a)
    for (int b = -kmax; b <= kmax; ++b)
      for (int c = -kmax; c <= kmax; ++c) {
        const Wavevector k{a, b, c};
        if (in_half_space(k) && norm2(k) <= kmax * kmax) ks.push_back(k);
      }
  std::sort(ks.begin(), ks.end(), [](const Wavevector& x, const Wavevector& y) {
    return norm2(x) != norm2(y) ? norm2(x) < norm2(y) : x > y;
  });
  for (const auto& k : ks) {
    const double len = std::sqrt(double(norm2(k)));
    const Vec3 kh = normalized({double(k[0]), double(k[1]), double(k[2])});
    // Axis least aligned with k to build a, b with (a, b, kh) right-handed.
    std::size_t axis = 0;
    for (std::size_t j = 1; j < 3; ++j)
      if (std::abs(kh[j]) < std::abs(kh[axis])) axis = j;
    Vec3 e{0, 0, 0};
    e[axis] = 1.0;
    const Vec3 a = normalized(cross(kh, e));
    const Vec3 b = cross(kh, a);
    for (int sigma : {1, -1}) {
      // a cos - sigma b sin and a sin + sigma b cos, both with curl eigenvalue sigma |k|.
      const TorusField c = trig_field(k, a, false, unit) + trig_field(k, b, true, -sigma * unit);
      const TorusField s = trig_field(k, a, true, unit) + trig_field(k, b, false, sigma * unit);
      out.push_back({c, sigma * len, k, "helical"});
      out.push_back({s, sigma * len, k, "helical"});
    }
    const double g = std::sqrt(2.0) * unit;
    out.push_back({trig_field(k, kh, false, g), 0.0, k, "gradient"});
    out.push_back({trig_field(k, kh, true, g), 0.0, k, "gradient"});
  }
  return out;
}

TorusPencil torus_pencil(const TrigPoly& q, double t, int kmax) {
  if (!q.is_real()) throw std::invalid_argument("torus_pencil: q must be real");
  TrigPoly phi = TrigPoly::constant(1.0) + t * q;
  if (min_on_grid(phi) <= 0.0) throw NonPositiveFactor("torus_pencil: 1 + t q is not positive");
  const auto basis = torus_basis(kmax);
  const auto n = static_cast<Eigen::Index>(basis.size());
  TorusPencil p;
  p.kmax = kmax;
  p.t = t;
  p.A.resize(n, n);
  Eigen::MatrixXd Q(n, n), G(n, n);
  std::vector<TorusField> curls;
  for (const auto& b : basis) curls.push_back(b.field.curl());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const auto& ei = basis[static_cast<std::size_t>(i)].field;
      const auto& ej = basis[static_cast<std::size_t>(j)].field;
      p.A(i, j) = p.A(j, i) = 0.5 * (torus_inner(curls[static_cast<std::size_t>(i)], ej) + torus_inner(ei, curls[static_cast<std::size_t>(j)]));
      G(i, j) = G(j, i) = torus_inner(ei, ej);
      Q(i, j) = Q(j, i) = q.coeffs.empty() ? 0.0 : torus_inner(ei, ej, q);
    }
  p.B = G + t * Q;

  std::vector<Eigen::Index> group;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(basis[static_cast<std::size_t>(i)].eigenvalue - 1.0) < 1e-12) group.push_back(i);
  Eigen::MatrixXd Qg(static_cast<Eigen::Index>(group.size()), static_cast<Eigen::Index>(group.size()));
  for (std::size_t i = 0; i < group.size(); ++i)
    for (std::size_t j = 0; j < group.size(); ++j) Qg(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Q(group[i], group[j]);
  // Group is orthonormal and mu0 = 1: d mu / dt are the eigenvalues of -Qg.
  const Eigen::VectorXd d = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(-Qg, Eigen::EigenvaluesOnly).eigenvalues();
  p.first_order_derivatives.assign(d.data(), d.data() + d.size());

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(p.A, p.B, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("torus_pencil: B is not positive definite");
  p.mu1 = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = es.eigenvalues()(i);
    if (std::abs(x) < 1e-8)
      ++p.zero_dimension;
    else if (x > 0)
      p.mu1 = std::min(p.mu1, x);
  }
  p.volume = torus_volume() * (phi * phi * phi).mean();
  return p;
}

ScanReport torus_scan(const std::vector<NamedTrig>& qs, const std::vector<double>& t_grid, int kmax,
                      const ScanConfig& config) {
  ScanReport rep;
  rep.manifold = "t3";
  rep.dmax = kmax;
  rep.t_grid = t_grid;
  rep.lower_bound = 0.0;
  rep.all_pass = true;
  for (const auto& nq : qs) {
    ScanRow row;
    row.q_id = nq.id;
    row.grid_min = std::numeric_limits<double>::infinity();
    bool have_zero = false;
    for (double t : t_grid) {
      const TorusPencil a = torus_pencil(nq.q, t, kmax);
      const TorusPencil b = torus_pencil(nq.q, t, kmax + 1);
      ScanPoint pt;
      pt.manifold = "t3";
      pt.q_id = nq.id;
      pt.t = t;
      pt.dmax = kmax;
      pt.mu1 = a.mu1;
      pt.mu1_normalized = a.mu1 * std::cbrt(a.volume);
      pt.refinement_delta = std::abs(b.mu1 * std::cbrt(b.volume) - pt.mu1_normalized);
      pt.pass = pt.refinement_delta < config.refinement_tol;
      rep.all_pass = rep.all_pass && pt.pass;
      rep.points.push_back(pt);
      if (t == 0.0) {
        row.value_at_zero = pt.mu1_normalized;
        have_zero = true;
      }
      if (pt.mu1_normalized < row.grid_min) {
        row.grid_min = pt.mu1_normalized;
        row.t_at_min = t;
      }
    }
    row.minimum_at_zero = have_zero && row.grid_min >= row.value_at_zero - config.minimum_tol;
    // Non-optimality is certified by a strict decrease somewhere on the grid.
    rep.all_pass = rep.all_pass && have_zero && !row.minimum_at_zero;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace beltrami
