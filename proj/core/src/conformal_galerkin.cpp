#include "beltrami/conformal_galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <tuple>

#include "beltrami/functionals.hpp"

namespace beltrami {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Product rule exact for polynomial integrands of total degree <= degree.
QuadratureSpec exact_spec(int degree) {
  QuadratureSpec s;
  s.radial_variable = RadialVariable::sin_squared;
  s.radial_order = degree / 4 + 2;
  s.angular_order = degree + 2;
  return s;
}

bool descends(const RealFrameField& F) {
  for (int a = 0; a < 3; ++a)
    if (!F[a].parity_part(1).is_zero()) return false;
  return true;
}

struct RawBasis {
  std::vector<RealFrameField> eigenfields;
  std::vector<int> labels;
  std::vector<RealFrameField> gradients;
  int max_degree = 0;
};

RawBasis build_raw_basis(Manifold m, int dmax) {
  if (dmax < 0) throw std::invalid_argument("galerkin basis: dmax must be nonnegative");
  RawBasis r;
  for (int k = 2; k <= dmax + 2; ++k) {
    if (m == Manifold::rp3 && k % 2 != 0) continue;
    for (int mu : {k, -k}) {
      for (const auto& f : unit_basis(mu)) {
        if (m == Manifold::rp3 && !descends(f)) throw SpectrumMismatch("galerkin basis: even eigenfield that does not descend");
        r.eigenfields.push_back(f);
        r.labels.push_back(mu);
        for (int a = 0; a < 3; ++a) r.max_degree = std::max(r.max_degree, f[a].degree());
      }
    }
  }
  // Homogeneous potentials of degree L and L - 1 restrict onto every harmonic of degree <= L.
  const int L = dmax + 2;
  for (int d : {L, L - 1}) {
    if (d < 1) continue;
    if (m == Manifold::rp3 && d % 2 != 0) continue;
    for (monomial::Key k : monomial::of_degree(d)) {
      RealPoly p;
      p.add_term(k, 1.0);
      r.gradients.push_back(grad(p));
    }
    r.max_degree = std::max(r.max_degree, d);
  }
  return r;
}

// Sampled trial space on an exact grid: gradient columns already orthonormalized.
struct SampledTrial {
  GalerkinBasisInfo info;
  HopfGrid grid;
  std::array<Eigen::MatrixXd, 3> S;  // field samples, P x n
  std::array<Eigen::MatrixXd, 3> C;  // curl samples
  Eigen::VectorXd w;

  SampledTrial(Manifold m, int dmax, int q_degree) : grid(exact_spec(1)) {
    RawBasis raw = build_raw_basis(m, dmax);
    grid = HopfGrid(exact_spec(2 * raw.max_degree + 2 + q_degree));
    const auto P = static_cast<Eigen::Index>(grid.size());
    w = Eigen::Map<const Eigen::VectorXd>(grid.weights().data(), P);

    std::vector<RealFrameField> all = raw.eigenfields;
    all.insert(all.end(), raw.gradients.begin(), raw.gradients.end());
    std::vector<RealFrameField> curls;
    curls.reserve(all.size());
    for (const auto& f : all) curls.push_back(curl(f));
    const SampledBasis fs(grid, all), cs(grid, curls);

    const auto ne = static_cast<Eigen::Index>(raw.eigenfields.size());
    const auto ng = static_cast<Eigen::Index>(raw.gradients.size());
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(ng, ng);
    for (int a = 0; a < 3; ++a) {
      const auto block = fs.component(a).rightCols(ng);
      G += block.transpose() * w.asDiagonal() * block;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const double top = es.eigenvalues().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < ng; ++i)
      if (es.eigenvalues()(i) > 1e-10 * top) keep.push_back(i);
    Eigen::MatrixXd T(ng, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
      T.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]) / std::sqrt(es.eigenvalues()(keep[j]));

    const auto n = ne + T.cols();
    for (int a = 0; a < 3; ++a) {
      auto& Sa = S[static_cast<std::size_t>(a)];
      auto& Ca = C[static_cast<std::size_t>(a)];
      Sa.resize(P, n);
      Ca.resize(P, n);
      Sa.leftCols(ne) = fs.component(a).leftCols(ne);
      Sa.rightCols(T.cols()) = fs.component(a).rightCols(ng) * T;
      Ca.leftCols(ne) = cs.component(a).leftCols(ne);
      Ca.rightCols(T.cols()) = cs.component(a).rightCols(ng) * T;
    }
    info.manifold = m;
    info.dmax = dmax;
    info.eigenvalues = raw.labels;
    info.eigenfield_dimension = static_cast<int>(ne);
    info.gradient_dimension = static_cast<int>(T.cols());
  }

  Eigen::MatrixXd gram(const Eigen::VectorXd& weight) const {
    const auto n = S[0].cols();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < 3; ++a) out += S[static_cast<std::size_t>(a)].transpose() * weight.asDiagonal() * S[static_cast<std::size_t>(a)];
    return out;
  }
  Eigen::MatrixXd curl_form() const {
    const auto n = S[0].cols();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < 3; ++a) out += C[static_cast<std::size_t>(a)].transpose() * w.asDiagonal() * S[static_cast<std::size_t>(a)];
    return out;
  }
};

const SampledTrial& sampled_trial(Manifold m, int dmax, int q_degree) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<SampledTrial>> cache;
  const int bucket = std::max(2, q_degree);
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{static_cast<int>(m), dmax, bucket}];
  if (!slot) slot = std::make_unique<SampledTrial>(m, dmax, bucket);
  return *slot;
}

// t-independent pieces of the pencil: A, the plain Gram matrix and the q-weighted one.
struct PencilParts {
  GalerkinBasisInfo info;
  Eigen::MatrixXd A, G0, Gq;
  double A_asymmetry = 0.0;
};

PencilParts pencil_parts(Manifold m, const RationalPoly& q, int dmax) {
  if (m == Manifold::rp3 && !q.parity_part(1).is_zero())
    throw ConformalParityError("assemble_pencil: RP^3 requires an antipodally even q");
  const SampledTrial& st = sampled_trial(m, dmax, std::max(0, q.degree()));
  PencilParts p;
  p.info = st.info;
  const RealPoly qr = to_real(q);
  const auto& pts = st.grid.points();
  Eigen::VectorXd wq(st.w.size());
  for (Eigen::Index i = 0; i < wq.size(); ++i) wq(i) = st.w(i) * qr.evaluate(pts[static_cast<std::size_t>(i)]);
  Eigen::MatrixXd A = st.curl_form();
  p.A_asymmetry = (A - A.transpose()).cwiseAbs().maxCoeff();
  p.A = 0.5 * (A + A.transpose());
  p.G0 = st.gram(st.w);
  p.Gq = st.gram(wq);
  p.G0 = 0.5 * (p.G0 + p.G0.transpose());
  p.Gq = 0.5 * (p.Gq + p.Gq.transpose());
  return p;
}

void check_positive(const ConformalFactor& cf) {
  if (cf.t == 0.0) return;
  if (cf.min_sqrt_factor() <= 0.0) throw NonPositiveFactor("conformal factor 1 + t q is not positive");
}

Mu1Result mu1_from_parts(Manifold, const PencilParts& parts, const ConformalFactor& cf, const ConformalVolume& vol) {
  GalerkinPencil p;
  p.basis = parts.info;
  p.A = parts.A;
  p.B = parts.G0 + cf.t * parts.Gq;
  p.A_asymmetry = parts.A_asymmetry;
  const PencilSpectrum s = pencil_spectrum(p);
  Mu1Result r;
  r.zero_count = s.zero_count;
  r.pencil_size = static_cast<int>(p.A.rows());
  auto it = std::find_if(s.eigenvalues.begin(), s.eigenvalues.end(), [](double x) { return x > 0.0; });
  if (it == s.eigenvalues.end()) throw std::runtime_error("mu1_normalized: no positive eigenvalue; enlarge dmax");
  r.mu1 = *it;
  r.volume = vol.at(cf.t);
  r.normalized = r.mu1 * std::cbrt(r.volume);
  return r;
}

}  // namespace

std::string to_string(Manifold m) { return m == Manifold::s3 ? "s3" : "rp3"; }

Manifold parse_manifold(const std::string& s) {
  if (s == "s3") return Manifold::s3;
  if (s == "rp3") return Manifold::rp3;
  throw std::invalid_argument("unknown manifold '" + s + "'");
}

RealPoly ConformalFactor::sqrt_factor_poly() const { return RealPoly(1.0) + t * to_real(q); }

double ConformalFactor::min_sqrt_factor() const {
  const HopfGrid grid(QuadratureSpec{24, 48, RadialVariable::angle});
  double mn = std::numeric_limits<double>::infinity();
  for (const auto& x : grid.points()) mn = std::min(mn, sqrt_factor(x));
  return mn;
}

double ConformalVolume::at(double t) const {
  double v = 0.0, tk = 1.0;
  for (const auto& c : coefficients) {
    v += c.to_double() * tk;
    tk *= t;
  }
  return v;
}

ConformalVolume conformal_volume(Manifold m, const RationalPoly& q) {
  const Rational half = m == Manifold::rp3 ? Rational(1, 2) : Rational(1);
  ConformalVolume v;
  const std::array<long, 4> binom{1, 3, 3, 1};
  RationalPoly qk(Rational(1));
  for (std::size_t k = 0; k < 4; ++k) {
    v.coefficients[k] = integrate_poly(qk) * ExactScalar(half * Rational(binom[k]));
    qk = qk * q;
  }
  return v;
}

GalerkinBasisInfo galerkin_basis_info(Manifold m, int dmax) { return sampled_trial(m, dmax, 2).info; }

GalerkinPencil assemble_pencil(Manifold m, const ConformalFactor& cf, int dmax) {
  check_positive(cf);
  const PencilParts parts = pencil_parts(m, cf.q, dmax);
  GalerkinPencil p;
  p.basis = parts.info;
  p.A = parts.A;
  p.B = parts.G0 + cf.t * parts.Gq;
  p.A_asymmetry = parts.A_asymmetry;
  p.B_min_eigenvalue = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(p.B, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  return p;
}

PencilSpectrum pencil_spectrum(const GalerkinPencil& p, double zero_tol) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(p.A, p.B, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("pencil_spectrum: B is not positive definite");
  PencilSpectrum s;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double x = es.eigenvalues()(i);
    if (std::abs(x) < zero_tol)
      ++s.zero_count;
    else
      s.eigenvalues.push_back(x);
  }
  if (s.zero_count != p.basis.gradient_dimension)
    throw SpectrumMismatch("pencil_spectrum: " + std::to_string(s.zero_count) + " zero modes, expected " +
                           std::to_string(p.basis.gradient_dimension));
  return s;
}

Mu1Result mu1_normalized(Manifold m, const ConformalFactor& cf, int dmax) {
  check_positive(cf);
  return mu1_from_parts(m, pencil_parts(m, cf.q, dmax), cf, conformal_volume(m, cf.q));
}

double round_mu1_normalized(Manifold m) {
  return m == Manifold::s3 ? 2.0 * std::cbrt(2.0 * kPi * kPi) : 2.0 * std::cbrt(kPi * kPi);
}

double conformal_class_lower_bound() { return std::cbrt(16.0 / kPi); }

// ---------------------------------------------------------------- scans

std::vector<NamedPoly> random_quadratics(Manifold m, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-3, 3);
  const HopfGrid grid(QuadratureSpec{16, 32, RadialVariable::angle});
  std::vector<NamedPoly> out;
  for (int i = 0; i < count; ++i) {
    // On S^3 alternate even and mixed-parity draws; RP^3 only admits even ones.
    const bool with_odd = m == Manifold::s3 && i % 2 == 1;
    RationalPoly q;
    for (int d : {1, 2}) {
      if (d == 1 && !with_odd) continue;
      for (monomial::Key k : monomial::of_degree(d)) q.add_term(k, Rational(coef(rng)));
    }
    if (q.is_zero()) q = RationalPoly::variable(0) * RationalPoly::variable(1);
    const RealPoly qr = to_real(q);
    double mx = 0.0;
    for (const auto& x : grid.points()) mx = std::max(mx, std::abs(qr.evaluate(x)));
    q *= Rational(1, static_cast<long>(std::ceil(mx + 1e-9)));
    out.push_back({(with_odd ? "mixed-" : "even-") + std::to_string(i), q});
  }
  return out;
}

ScanReport optimality_scan(Manifold m, const std::vector<NamedPoly>& qs, const std::vector<double>& t_grid, int dmax,
                           const ScanConfig& config) {
  ScanReport rep;
  rep.manifold = to_string(m);
  rep.dmax = dmax;
  rep.t_grid = t_grid;
  rep.lower_bound = conformal_class_lower_bound();
  rep.all_pass = true;
  for (const auto& nq : qs) {
    const PencilParts coarse = pencil_parts(m, nq.q, dmax);
    const PencilParts fine = pencil_parts(m, nq.q, dmax + 1);
    const ConformalVolume vol = conformal_volume(m, nq.q);
    ScanRow row;
    row.q_id = nq.id;
    row.grid_min = std::numeric_limits<double>::infinity();
    std::vector<double> ts, vs;
    bool have_zero = false;
    for (double t : t_grid) {
      const ConformalFactor cf{nq.q, t};
      check_positive(cf);
      const Mu1Result a = mu1_from_parts(m, coarse, cf, vol);
      const Mu1Result b = mu1_from_parts(m, fine, cf, vol);
      ScanPoint pt;
      pt.manifold = rep.manifold;
      pt.q_id = nq.id;
      pt.t = t;
      pt.dmax = dmax;
      pt.mu1 = a.mu1;
      pt.mu1_normalized = a.normalized;
      pt.refinement_delta = std::abs(b.normalized - a.normalized);
      pt.pass = pt.refinement_delta < config.refinement_tol && a.normalized >= rep.lower_bound;
      rep.all_pass = rep.all_pass && pt.pass;
      rep.points.push_back(pt);
      if (t == 0.0) {
        row.value_at_zero = a.normalized;
        have_zero = true;
      }
      if (a.normalized < row.grid_min) {
        row.grid_min = a.normalized;
        row.t_at_min = t;
      }
      ts.push_back(t);
      vs.push_back(a.normalized);
    }
    if (ts.size() >= 3) {
      Eigen::MatrixXd V(static_cast<Eigen::Index>(ts.size()), 3);
      Eigen::VectorXd y(static_cast<Eigen::Index>(ts.size()));
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        V(r, 0) = 1.0;
        V(r, 1) = ts[i];
        V(r, 2) = ts[i] * ts[i];
        y(r) = vs[i];
      }
      const Eigen::Vector3d c = V.colPivHouseholderQr().solve(y);
      row.quadratic_fit = {c(0), c(1), c(2)};
    }
    row.minimum_at_zero = have_zero && row.grid_min >= row.value_at_zero - config.minimum_tol;
    rep.all_pass = rep.all_pass && row.minimum_at_zero;
    rep.rows.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------- transport

std::array<double, 3> WeightedField::evaluate(const std::array<double, 4>& x) const {
  auto v = beltrami::evaluate(u, x);
  const double s = std::pow(cf.sqrt_factor(x), phi_power);
  for (auto& c : v) c *= s;
  return v;
}

WeightedField conformal_pushforward(const RealFrameField& u, const ConformalFactor& cf) { return {u, cf, -3}; }

double energy_in_metric(const WeightedField& X, const HopfGrid& grid) {
  const auto& pts = grid.points();
  std::vector<double> v(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double phi = X.cf.sqrt_factor(pts[i]);
    const auto f = X.evaluate(pts[i]);
    const double norm_g = phi * std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]);
    v[i] = std::pow(norm_g, 1.5) * phi * phi * phi;
  }
  return weighted_sum(grid.weights(), v);
}

double helicity_in_metric(const WeightedField& X) {
  // With V = phi^3 X the g-helicity reduces to int <curl^{-1} V, V> dV0.
  const int k = 3 + X.phi_power;
  if (k < 0) throw std::invalid_argument("helicity_in_metric: phi^3 X is not polynomial");
  const RealPoly phik = X.cf.sqrt_factor_poly().pow(k);
  const RealFrameField V{phik * X.u[0], phik * X.u[1], phik * X.u[2]};
  return helicity(V);
}

MinimizerMetric metric_from_minimizer(const RealFrameField& u, const QuadratureSpec& spec) {
  const HopfGrid grid(spec);
  const auto& pts = grid.points();
  std::vector<double> norm(pts.size());
  double mx = 0.0, mn = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto f = evaluate(u, pts[i]);
    norm[i] = std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]);
    mx = std::max(mx, norm[i]);
    mn = std::min(mn, norm[i]);
  }
  if (!(mn > 1e-10 * std::max(mx, 1.0))) throw std::domain_error("metric_from_minimizer: the field vanishes");

  MinimizerMetric r;
  std::vector<double> e(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) e[i] = std::pow(norm[i], 1.5);
  r.energy = weighted_sum(grid.weights(), e);
  r.volume_reference = 2.0 * kPi * kPi;
  r.kappa = std::pow(r.volume_reference / r.energy, 2.0 / 3.0);

  std::vector<double> vol(pts.size());
  r.weight_min = r.transported_norm_min = std::numeric_limits<double>::infinity();
  r.weight_max = r.transported_norm_max = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double w = r.kappa * norm[i];
    vol[i] = std::pow(w, 1.5);
    // Transport by w^{-3/2}; its norm in the metric w g is sqrt(w) times the round norm.
    const double transported = std::sqrt(w) * std::pow(w, -1.5) * norm[i];
    r.weight_min = std::min(r.weight_min, w);
    r.weight_max = std::max(r.weight_max, w);
    r.transported_norm_min = std::min(r.transported_norm_min, transported);
    r.transported_norm_max = std::max(r.transported_norm_max, transported);
  }
  r.volume_new = weighted_sum(grid.weights(), vol);
  const double kappa = r.kappa;
  r.weight = [u, kappa](const std::array<double, 4>& x) {
    const auto f = evaluate(u, x);
    return kappa * std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]);
  };
  return r;
}

}  // namespace beltrami
