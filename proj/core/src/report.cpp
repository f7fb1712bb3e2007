#include "beltrami/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "beltrami/annulus.hpp"
#include "beltrami/conformal_galerkin.hpp"
#include "beltrami/eigen_atlas.hpp"
#include "beltrami/finite_difference.hpp"
#include "beltrami/functionals.hpp"
#include "beltrami/identities.hpp"
#include "beltrami/torus.hpp"

namespace beltrami {

using ojson = nlohmann::ordered_json;

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------- config serialization

ojson quadrature_json(const QuadratureSpec& q) {
  ojson j;
  j["radial_order"] = q.radial_order;
  j["angular_order"] = q.angular_order;
  j["radial_variable"] = q.radial_variable == RadialVariable::angle ? "angle" : "sin_squared";
  return j;
}

QuadratureSpec quadrature_from(const nlohmann::json& j, const std::string& key) {
  if (!j.is_object()) throw ConfigError(key + ": expected an object");
  QuadratureSpec q;
  for (const auto& [k, v] : j.items()) {
    if (k == "radial_order")
      q.radial_order = v.get<int>();
    else if (k == "angular_order")
      q.angular_order = v.get<int>();
    else if (k == "radial_variable") {
      const auto s = v.get<std::string>();
      if (s == "angle")
        q.radial_variable = RadialVariable::angle;
      else if (s == "sin_squared")
        q.radial_variable = RadialVariable::sin_squared;
      else
        throw ConfigError(key + ".radial_variable: expected angle or sin_squared");
    } else
      throw ConfigError(key + ": unknown key " + k);
  }
  return q;
}

bool same_quadrature(const QuadratureSpec& a, const QuadratureSpec& b) {
  return a.radial_order == b.radial_order && a.angular_order == b.angular_order &&
         a.radial_variable == b.radial_variable;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---------------------------------------------------------------- check recording

class Recorder {
 public:
  explicit Recorder(std::vector<CheckRecord>& out) : out_(out), last_(Clock::now()) {}

  // Two-sided comparison of computed against expected.
  void compare(const std::string& id, const std::string& anchor, const std::string& exact, double expected,
               double computed, double tol, bool relative) {
    CheckRecord c = base(id, anchor, exact, expected, computed);
    c.abs_error = std::abs(computed - expected);
    c.rel_error = expected != 0.0 ? c.abs_error / std::abs(expected) : c.abs_error;
    finish(c, tol, relative);
  }
  // Relative error against a caller-supplied scale (for targets that may vanish).
  void compare_scaled(const std::string& id, const std::string& anchor, const std::string& exact, double expected,
                      double computed, double scale, double tol) {
    CheckRecord c = base(id, anchor, exact, expected, computed);
    c.abs_error = std::abs(computed - expected);
    c.rel_error = c.abs_error / std::max(std::abs(expected), scale);
    finish(c, tol, true);
  }
  // computed <= bound (upper) or computed >= bound (!upper); the error is the excess.
  void bound(const std::string& id, const std::string& anchor, const std::string& exact, double bound_value,
             double computed, bool upper, double tol = 0.0) {
    CheckRecord c = base(id, anchor, exact, bound_value, computed);
    const double excess = upper ? computed - bound_value : bound_value - computed;
    c.abs_error = std::isnan(excess) ? std::numeric_limits<double>::infinity() : std::max(0.0, excess);
    c.rel_error = bound_value != 0.0 ? c.abs_error / std::abs(bound_value) : c.abs_error;
    finish(c, tol, false);
  }
  // Exact predicate; computed is 1 for true.
  void exact(const std::string& id, const std::string& anchor, const std::string& exact_text, bool holds) {
    CheckRecord c = base(id, anchor, exact_text, 1.0, holds ? 1.0 : 0.0);
    c.abs_error = c.rel_error = holds ? 0.0 : 1.0;
    finish(c, 0.0, false);
  }

 private:
  using Clock = std::chrono::steady_clock;

  static CheckRecord base(const std::string& id, const std::string& anchor, const std::string& exact, double expected,
                          double computed) {
    CheckRecord c;
    c.id = id;
    c.anchor = anchor;
    c.expected_exact = exact;
    c.expected = expected;
    c.computed = computed;
    return c;
  }
  void finish(CheckRecord& c, double tol, bool relative) {
    c.tolerance = tol;
    c.relative = relative;
    const double err = relative ? c.rel_error : c.abs_error;
    c.pass = err <= tol;  // NaN fails
    const auto now = Clock::now();
    c.wall_time = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    out_.push_back(std::move(c));
  }

  std::vector<CheckRecord>& out_;
  Clock::time_point last_;
};

std::string cube_root_text(const ExactScalar& cube) { return "(" + cube.to_string() + ")^(1/3)"; }

// ---------------------------------------------------------------- verify-atlas

void verify_atlas(const RunConfig& cfg, Recorder& rec, ojson& details) {
  const std::string anchor_f = "explicit curl eigenfields on S^3";
  const std::string anchor_g = "explicit eigenbasis Gram matrix";
  ojson dims = ojson::object();
  for (int mu : {2, -2, 3, 4, 5}) {
    const AtlasEntry e = explicit_basis(mu);
    dims[std::to_string(mu)] = e.fields.size();
    for (std::size_t i = 0; i < e.fields.size(); ++i) {
      const FrameField r = curl(e.fields[i]) - Rational(mu) * e.fields[i];
      rec.exact("curl-" + e.names[i], anchor_f, "curl e = " + std::to_string(mu) + " e", r.is_zero());
    }
    bool diagonal = true;
    for (std::size_t i = 0; i < e.fields.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        const ExactScalar g = inner(e.fields[i], e.fields[j]);
        diagonal = diagonal && (i == j ? g == e.squared_norms[i] : g.is_zero());
      }
    rec.exact("gram-" + std::to_string(mu), anchor_g, "diagonal with recorded squared norms", diagonal);
  }
  // Multiplicities from the exact solver on the whole truncated span.
  const SolverResult s = eigenspace_solve(cfg.dmax);
  ojson solved = ojson::object();
  std::map<int, int> found;
  for (const auto& e : s.entries) found[e.eigenvalue] = static_cast<int>(e.fields.size());
  for (int m = 2; m <= cfg.dmax + 2; ++m)
    for (int mu : {m, -m}) {
      const int expected = m * m - 1;
      const int got = found.count(mu) ? found[mu] : 0;
      solved[std::to_string(mu)] = got;
      rec.compare("multiplicity-" + std::to_string(mu), "curl eigenspace dimensions", std::to_string(expected), expected,
                  got, 0.0, false);
    }
  rec.exact("projections-resolve-identity", "curl eigenspace dimensions", "sum of projections = identity",
            s.identity_resolved);
  details["explicit_dimensions"] = dims;
  details["solver_dimensions"] = solved;
  details["gradient_dimension"] = s.gradient_dimension;
}

// ---------------------------------------------------------------- verify-identities

void verify_identity_rows(const RunConfig& cfg, Recorder& rec, ojson& details) {
  IdentityOptions o;
  o.seed = cfg.seed;
  o.tol = cfg.tol_exact;
  const auto rows = verify_identities(o);
  ojson draws = ojson::object();
  for (const auto& r : rows) {
    if (r.id == "higher-modes-lower-bound")
      rec.bound(r.id, r.anchor, r.expected_exact, r.expected, r.computed, false, cfg.tol_exact);
    else
      rec.compare(r.id, r.anchor, r.expected_exact, r.expected, r.computed, cfg.tol_exact, true);
    draws[r.id] = r.draws;
  }
  details["draws"] = draws;
}

// ---------------------------------------------------------------- taylor-check

HopfPerturbation random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  HopfPerturbation W;
  for (auto& x : W.beta) x = normal(rng);
  for (auto& x : W.a) x = normal(rng);
  for (auto& x : W.b) x = normal(rng);
  const double s = 1.0 / std::sqrt(W.norm_sq());
  for (auto& x : W.beta) x *= s;
  for (auto& x : W.a) x *= s;
  for (auto& x : W.b) x *= s;
  return W;
}

// Coefficient of eps^6 in p(eps) = taylor6_combination(eps Z2 + eps^2 P2); p has degree
// at most 12, recovered exactly by interpolation on Chebyshev nodes.
double taylor6_eps6(double a5, double a8) {
  const auto b = critical_p2_coefficients(a5, a8);
  constexpr int n = 13;
  Eigen::MatrixXd V(n, n);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double eps = std::cos(kPi * (i + 0.5) / n);
    HopfPerturbation W;
    W.a[4] = eps * a5;
    W.a[7] = eps * a8;
    W.b[9] = eps * eps * b[0];
    W.b[11] = eps * eps * b[1];
    W.b[14] = eps * eps * b[2];
    y(i) = taylor6_combination(W);
    for (int k = 0; k < n; ++k) V(i, k) = std::pow(eps, k);
  }
  return V.colPivHouseholderQr().solve(y)(6);
}

void taylor_check(const RunConfig& cfg, Recorder& rec, ojson& details) {
  std::mt19937_64 rng(cfg.seed);
  const RealFrameField b1 = to_real(explicit_field("B1"));
  const HopfGrid grid(cfg.fd_quadrature);
  const double b1_norm = std::sqrt(hopf_energy());  // |B1|_{L2} = sqrt(2) pi
  const std::string anchor_e = "derivatives of the L^{3/2} energy at the Hopf field";
  const std::string anchor_f = "derivatives of E^{4/3}/H at the Hopf field";
  for (int d = 0; d < cfg.directions; ++d) {
    const HopfPerturbation W = random_direction(rng);
    const RealFrameField Wf = W.assemble();
    const double h1 = integrate_poly(Wf[0]);  // 2 H(B1, W)
    const double h2 = helicity(Wf);
    std::map<double, double> cache;
    const auto E = [&](double t) {
      auto it = cache.find(t);
      if (it != cache.end()) return it->second;
      return cache[t] = l32_energy(b1 + t * Wf, grid);
    };
    const auto F = [&](double t) { return std::pow(E(t), 4.0 / 3.0) / (hopf_helicity() + t * h1 + t * t * h2); };
    for (int k = 1; k <= 6; ++k) {
      const double h = k <= 3 ? 0.05 : 0.12;
      const double tol = k <= 3 ? 1e-5 : 1e-3;
      // |W| = 1, so the k-th derivative is naturally of size value / |B1|^k.
      const double scale = std::pow(b1_norm, -k);
      const std::string tag = "-k" + std::to_string(k) + "-w" + std::to_string(d);
      rec.compare_scaled("fd-dE" + tag, anchor_e, "central difference", central_derivative(E, k, h, 8).value,
                         dE_at_hopf(k, Wf), hopf_energy() * scale, tol);
      rec.compare_scaled("fd-dF" + tag, anchor_f, "central difference", central_derivative(F, k, h, 8).value,
                         dF_at_hopf(k, W), hopf_F() * scale, tol);
    }
  }

  // Sixth-order structure along Z2 and on the critical relations.
  std::normal_distribution<double> normal;
  const double a5 = normal(rng), a8 = normal(rng);
  const double s = a5 * a5 + a8 * a8;
  const double pref = hopf_prefactor();
  HopfPerturbation Z;
  Z.a[4] = a5;
  Z.a[7] = a8;
  const double d6 = dF_at_hopf(6, Z) / (pref * s * s * s);
  const double pi4 = std::pow(kPi, 4);
  const std::string anchor6 = "sixth derivative of F at the Hopf field along Z2";
  rec.compare("d6F-z2-tabulated", anchor6, ExactScalar(Rational(685, 36), -4).to_string(), 685.0 / 36.0 / pi4, d6, 1e-8,
              true);
  rec.compare("d6F-z2-corrected", anchor6, ExactScalar(Rational(-145, 18), -4).to_string(), -145.0 / 18.0 / pi4, d6,
              1e-8, true);
  const double lead = taylor6_eps6(a5, a8) / (pref * s * s * s);
  const std::string anchor_c = "leading coefficient of the sixth-order Taylor combination";
  rec.compare("taylor6-leading-tabulated", anchor_c, ExactScalar(Rational(11, 32), -4).to_string(), 11.0 / 32.0 / pi4,
              lead, 1e-6, true);
  rec.compare("taylor6-leading-corrected", anchor_c, ExactScalar(Rational(17, 144), -4).to_string(),
              17.0 / 144.0 / pi4, lead, 1e-6, true);

  // Correction field: divergence free with norm 151/(90 pi^4) |Z2|^6.
  const std::string anchor_cf = "divergence-free cubic correction field";
  ojson draws = ojson::array();
  for (int d = 0; d < cfg.directions; ++d) {
    const double x = normal(rng), y = normal(rng);
    const double n3 = std::pow(x * x + y * y, 3);
    const CorrectionField C = correction_field(x, y);
    rec.bound("correction-divergence-" + std::to_string(d), anchor_cf, "0", 0.0, C.divergence_sup, true,
              cfg.tol_exact);
    rec.compare("correction-norm-" + std::to_string(d), anchor_cf, ExactScalar(Rational(151, 90), -4).to_string(),
                n3, C.norm_sq * 90.0 * pi4 / 151.0, cfg.tol_float, true);
    draws.push_back({x, y});
  }
  details["correction_draws"] = draws;
  details["z2_direction"] = {a5, a8};
}

// ---------------------------------------------------------------- local-max-scan

void local_max(const RunConfig& cfg, Recorder& rec, ojson& details) {
  LocalMaxConfig lc;
  lc.seed = cfg.seed;
  lc.samples = cfg.samples;
  lc.radius = cfg.radius;
  lc.dmax = cfg.dmax;
  lc.quadrature = cfg.scan_quadrature;
  const LocalMaxReport r = local_max_scan(lc);
  const std::string anchor = "local maximality of R at the Hopf field";
  rec.bound("local-max-no-increase", anchor, "R(B1 + W) - R(B1) <= 1e-9", lc.tol, r.max_delta_R_non_e1, true);
  rec.bound("local-max-e1-flat", anchor, "|R(B1 + W) - R(B1)| <= 1e-9 for W in E1", lc.tol, r.max_abs_delta_R_e1, true);
  rec.compare("local-max-violations", anchor, "0", 0.0, r.violations, 0.0, false);

  const SecondVariationScan sv = rp3_second_variation_scan(cfg.second_variation_draws, cfg.seed, cfg.dmax);
  const std::string anchor2 = "second variation of R on antipodally even directions";
  rec.bound("rp3-second-variation-threshold", anchor2, "-1/100", -0.01, sv.max_ratio, true);
  rec.bound("rp3-second-variation-sign", anchor2, "0", 0.0, sv.max_ratio, true);

  ojson violations = ojson::array();
  for (const auto& s : r.samples)
    if (s.violation) violations.push_back({{"index", s.index}, {"delta_R", s.delta_R}, {"coefficients", s.coefficients}});
  details["R_hopf"] = r.R_hopf;
  details["samples"] = r.samples.size();
  details["violations"] = violations;
  details["max_delta_R_outside_E1"] = r.max_delta_R_non_e1;
  details["max_abs_delta_R_inside_E1"] = r.max_abs_delta_R_e1;
  details["second_variation"] = {{"draws", sv.draws},
                                 {"eigenvalues", sv.eigenvalues},
                                 {"max_ratio", sv.max_ratio},
                                 {"min_ratio", sv.min_ratio}};
}

// ---------------------------------------------------------------- optimality-scan

ojson scan_json(const ScanReport& s) {
  ojson points = ojson::array();
  for (const auto& p : s.points)
    points.push_back({{"q_id", p.q_id},
                      {"t", p.t},
                      {"dmax", p.dmax},
                      {"mu1", p.mu1},
                      {"mu1_normalized", p.mu1_normalized},
                      {"refinement_delta", p.refinement_delta},
                      {"pass", p.pass}});
  ojson rows = ojson::array();
  for (const auto& r : s.rows)
    rows.push_back({{"q_id", r.q_id},
                    {"value_at_zero", r.value_at_zero},
                    {"grid_min", r.grid_min},
                    {"t_at_min", r.t_at_min},
                    {"quadratic_fit", r.quadratic_fit},
                    {"minimum_at_zero", r.minimum_at_zero}});
  return {{"manifold", s.manifold}, {"dmax", s.dmax}, {"t_grid", s.t_grid}, {"lower_bound", s.lower_bound},
          {"points", points},       {"rows", rows}};
}

void sphere_scan(const RunConfig& cfg, Manifold m, Recorder& rec, ojson& details) {
  const auto qs = random_quadratics(m, cfg.scan_polynomials, cfg.seed);
  const ScanReport s = optimality_scan(m, qs, cfg.t_grid, cfg.dmax);
  const bool s3 = m == Manifold::s3;
  const std::string anchor = s3 ? "round metric minimizes mu1 Vol^{1/3} in its conformal class on S^3"
                                : "round metric minimizes mu1 Vol^{1/3} in its conformal class on RP^3";
  const std::string round_text = s3 ? "2 * (2 pi^2)^(1/3)" : "2 pi^(2/3)";
  const double round = round_mu1_normalized(m);
  const double lower = conformal_class_lower_bound();
  for (const auto& row : s.rows) {
    double max_delta = 0.0, min_value = std::numeric_limits<double>::infinity();
    for (const auto& p : s.points)
      if (p.q_id == row.q_id) {
        max_delta = std::max(max_delta, p.refinement_delta);
        min_value = std::min(min_value, p.mu1_normalized);
      }
    rec.bound("minimum-at-zero-" + row.q_id, anchor, "grid minimum at t = 0", row.value_at_zero, row.grid_min, false,
              ScanConfig{}.minimum_tol);
    rec.compare("value-at-zero-" + row.q_id, anchor, round_text, round, row.value_at_zero, cfg.tol_exact, false);
    rec.bound("refinement-" + row.q_id, "Galerkin truncation refinement", "1/10000", 1e-4, max_delta, true);
    rec.bound("lower-bound-" + row.q_id, "conformal class lower bound", "(16/pi)^(1/3)", lower, min_value, false);
  }
  details["scan"] = scan_json(s);
  ojson qj = ojson::array();
  for (const auto& q : qs) qj.push_back({{"id", q.id}, {"q", to_string(q.q)}});
  details["polynomials"] = qj;
}

void torus_checks(const RunConfig& cfg, Recorder& rec, ojson& details) {
  const TorusField u = abc_field(1, 1, 1);
  const SpeedWitness w = speed_is_constant(u);
  rec.exact("abc-speed-not-constant", "ABC flow with A = B = C = 1 has nonconstant speed", "|u|^2 nonconstant",
            !w.constant);
  const double fv = first_variation(u, abc_speed_direction());
  const ExactScalar fv_exact(Rational(24), 3);
  rec.compare("abc-first-variation", "first variation along |u|^2 - 3", fv_exact.to_string(), fv_exact.to_double(), fv,
              1e-12, true);
  const TorusPencil p = torus_pencil(abc_speed_direction(), 0.0, cfg.dmax);
  const double dmin = p.first_order_derivatives.empty() ? 0.0 : p.first_order_derivatives.front();
  rec.bound("torus-descent-derivative", "flat metric is not conformally optimal on T^3", "-1/100", -0.01, dmin, true);

  const ScanReport s = torus_scan({{"abc-speed", abc_speed_direction()}}, cfg.t_grid, cfg.dmax);
  for (const auto& row : s.rows)
    rec.exact("t3-below-flat-" + row.q_id, "flat metric is not conformally optimal on T^3", "grid min < value at 0",
              row.grid_min < row.value_at_zero);
  details["speed_witness"] = {{"mode", w.mode}, {"re", w.coefficient.real()}, {"im", w.coefficient.imag()}};
  details["first_order_derivatives"] = p.first_order_derivatives;
  details["zero_dimension"] = p.zero_dimension;
  details["scan"] = scan_json(s);
}

// ---------------------------------------------------------------- annulus

void annulus_checks(const RunConfig& cfg, Recorder& rec, ojson& details) {
  ojson chain = ojson::array();
  ojson modes = ojson::array();
  const std::string anchor = "thin tori T^2 x (0, 2 pi) with first curl eigenvalue 1/n";
  double previous = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  for (const auto& r : mu1_chain(cfg.annulus_n_max)) {
    const int n = r.n;
    const std::string tag = "-n" + std::to_string(n);
    Rational expected(1, n);
    expected.canonicalize();
    rec.exact("annulus-mu1" + tag, anchor, expected.get_str(), r.mu1 == expected);
    rec.exact("annulus-volume" + tag, anchor, ExactScalar(Rational(8), 3).to_string(),
              r.volume == ExactScalar(Rational(8), 3) && annulus_metric(n).determinant == 1);
    double min_mixed = std::numeric_limits<double>::infinity();
    for (const auto& md : spectrum_candidates(n, cfg.annulus_cutoff)) {
      if (md.m1 != 0 || md.m2 != 0) min_mixed = std::min(min_mixed, std::abs(md.lambda));
      if (md.branch > 0)
        modes.push_back({{"n", n}, {"m1", md.m1}, {"m2", md.m2}, {"m", md.m}, {"lambda", md.lambda}, {"status", md.status}});
    }
    // Vacuous when the cutoff admits no mixed mode.
    if (std::isinf(min_mixed)) min_mixed = cfg.annulus_cutoff;
    rec.bound("annulus-mixed-modes" + tag, anchor, "lambda >= 1", 1.0, min_mixed, false);
    rec.exact("annulus-eigenfields" + tag, anchor, "curl v = v/n, tangent, mean zero", first_eigenfields(n).all());
    decreasing = decreasing && r.normalized < previous;
    previous = r.normalized;
    chain.push_back({{"n", n}, {"mu1", r.mu1.get_str()}, {"volume", r.volume.to_string()}, {"normalized", r.normalized}});
  }
  rec.exact("annulus-chain-decreasing", anchor, "mu1 Vol^{1/3} strictly decreasing in n", decreasing);
  details["chain"] = chain;
  details["cutoff"] = cfg.annulus_cutoff;
  details["modes"] = modes;
  details["transplantation"] =
      "extending an eigenfield of the n-th thin torus by zero into any closed 3-manifold bounds its first positive "
      "curl eigenvalue above by 1/n after rescaling the volume below 1, so the infimum over metrics is 0";
}

// ---------------------------------------------------------------- bounds

void bounds_checks(const RunConfig&, Recorder& rec, ojson& details) {
  const BoundConstants b = bound_constants();
  // Independent evaluation from the tabulated expressions, in long double.
  const long double pi = 3.141592653589793238462643383279502884L;
  const double improved = static_cast<double>(2.0L * std::cbrt(2.0L * pi * pi));
  const double previous = static_cast<double>(std::pow(4.0L * pi / 3.0L, 1.0L / 3.0L));
  const double sphere = static_cast<double>(std::pow(16.0L / pi, 1.0L / 3.0L));
  rec.compare(b.improved.id, "lower bound for Euclidean domains", b.improved.expression, improved, b.improved.value,
              1e-12, true);
  rec.compare(b.previous.id, "earlier lower bound for Euclidean domains", b.previous.expression, previous,
              b.previous.value, 1e-12, true);
  rec.compare(b.sphere_class.id, "lower bound on the conformal class of S^3", b.sphere_class.expression, sphere,
              b.sphere_class.value, 1e-12, true);
  rec.bound("improved-exceeds-previous", "lower bound for Euclidean domains", b.previous.expression, b.previous.value,
            b.improved.value, false, 0.0);
  rec.compare("sphere-class-bound-consistency", "lower bound on the conformal class of S^3", b.sphere_class.expression,
              b.sphere_class.value, conformal_class_lower_bound(), 1e-15, true);
  for (const BoundConstant* c : {&b.improved, &b.previous, &b.sphere_class})
    details[c->id] = {{"expression", c->expression}, {"cube", c->cube.to_string()}, {"value", c->value},
                      {"root_of", cube_root_text(c->cube)}};
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (char ch : s) {
    if (ch == '"') r += '"';
    r += ch;
  }
  return r + "\"";
}

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  // Shortest representation that reads back to the same double.
  char buf[32];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

}  // namespace

// ---------------------------------------------------------------- RunConfig

const std::vector<std::string>& report_commands() {
  static const std::vector<std::string> c{"verify-atlas",     "verify-identities", "taylor-check", "local-max-scan",
                                          "optimality-scan", "annulus",           "bounds"};
  return c;
}

std::string RunConfig::to_json() const {
  ojson j;
  j["command"] = command;
  j["manifold"] = manifold;
  j["seed"] = seed;
  j["tol_exact"] = tol_exact;
  j["tol_float"] = tol_float;
  j["dmax"] = dmax;
  j["fd_quadrature"] = quadrature_json(fd_quadrature);
  j["scan_quadrature"] = quadrature_json(scan_quadrature);
  j["t_grid"] = t_grid;
  j["directions"] = directions;
  j["samples"] = samples;
  j["radius"] = radius;
  j["second_variation_draws"] = second_variation_draws;
  j["scan_polynomials"] = scan_polynomials;
  j["annulus_n_max"] = annulus_n_max;
  j["annulus_cutoff"] = annulus_cutoff;
  j["out"] = out;
  j["format"] = format;
  return j.dump(2);
}

RunConfig RunConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [k, v] : j.items()) {
      if (k == "command") c.command = v.get<std::string>();
      else if (k == "manifold") c.manifold = v.get<std::string>();
      else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "tol_exact") c.tol_exact = v.get<double>();
      else if (k == "tol_float") c.tol_float = v.get<double>();
      else if (k == "dmax") c.dmax = v.get<int>();
      else if (k == "fd_quadrature") c.fd_quadrature = quadrature_from(v, k);
      else if (k == "scan_quadrature") c.scan_quadrature = quadrature_from(v, k);
      else if (k == "t_grid") c.t_grid = v.get<std::vector<double>>();
      else if (k == "directions") c.directions = v.get<int>();
      else if (k == "samples") c.samples = v.get<int>();
      else if (k == "radius") c.radius = v.get<double>();
      else if (k == "second_variation_draws") c.second_variation_draws = v.get<int>();
      else if (k == "scan_polynomials") c.scan_polynomials = v.get<int>();
      else if (k == "annulus_n_max") c.annulus_n_max = v.get<int>();
      else if (k == "annulus_cutoff") c.annulus_cutoff = v.get<double>();
      else if (k == "out") c.out = v.get<std::string>();
      else if (k == "format") c.format = v.get<std::string>();
      else throw ConfigError("unknown config key: " + k);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

void RunConfig::validate() const {
  const auto& cmds = report_commands();
  if (std::find(cmds.begin(), cmds.end(), command) == cmds.end())
    throw ConfigError("unknown command '" + command + "'");
  if (format != "json" && format != "csv") throw ConfigError("format must be json or csv");
  if (manifold != "s3" && manifold != "rp3" && manifold != "t3") throw ConfigError("manifold must be s3, rp3 or t3");
  if (!(tol_exact > 0) || !(tol_float > 0)) throw ConfigError("tolerances must be positive");
  if (dmax < 1 || dmax > 5) throw ConfigError("dmax must lie in [1, 5]");
  if (std::find(t_grid.begin(), t_grid.end(), 0.0) == t_grid.end()) throw ConfigError("t_grid must contain 0");
  if (directions < 1 || samples < 1 || second_variation_draws < 1 || scan_polynomials < 1)
    throw ConfigError("counts must be positive");
  if (!(radius > 0)) throw ConfigError("radius must be positive");
  if (annulus_n_max < 1 || !(annulus_cutoff > 0)) throw ConfigError("annulus_n_max and annulus_cutoff must be positive");
  for (const QuadratureSpec* q : {&fd_quadrature, &scan_quadrature})
    if (q->radial_order < 1 || q->angular_order < 1) throw ConfigError("quadrature orders must be positive");
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.command == b.command && a.manifold == b.manifold && a.seed == b.seed && a.tol_exact == b.tol_exact &&
         a.tol_float == b.tol_float && a.dmax == b.dmax && same_quadrature(a.fd_quadrature, b.fd_quadrature) &&
         same_quadrature(a.scan_quadrature, b.scan_quadrature) && a.t_grid == b.t_grid &&
         a.directions == b.directions && a.samples == b.samples && a.radius == b.radius &&
         a.second_variation_draws == b.second_variation_draws && a.scan_polynomials == b.scan_polynomials &&
         a.annulus_n_max == b.annulus_n_max && a.annulus_cutoff == b.annulus_cutoff && a.out == b.out &&
         a.format == b.format;
}

// ---------------------------------------------------------------- execution

const std::vector<std::string>& check_record_columns() {
  static const std::vector<std::string> c{"id",        "anchor",    "expected_exact", "expected", "computed",
                                          "abs_error", "rel_error", "tolerance",      "relative", "pass",
                                          "wall_time"};
  return c;
}

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

int Report::passed() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; }));
}

Report execute(const RunConfig& config) {
  config.validate();
  Report r;
  r.command = config.command;
  r.config = config;
  r.timestamp = utc_timestamp();
  Recorder rec(r.checks);
  ojson details = ojson::object();
  const std::string& c = config.command;
  if (c == "verify-atlas") verify_atlas(config, rec, details);
  else if (c == "verify-identities") verify_identity_rows(config, rec, details);
  else if (c == "taylor-check") taylor_check(config, rec, details);
  else if (c == "local-max-scan") local_max(config, rec, details);
  else if (c == "optimality-scan") {
    if (config.manifold == "t3") torus_checks(config, rec, details);
    else sphere_scan(config, parse_manifold(config.manifold), rec, details);
  } else if (c == "annulus") annulus_checks(config, rec, details);
  else if (c == "bounds") bounds_checks(config, rec, details);
  r.details_json = details.dump();
  return r;
}

std::string render_json(const Report& r) {
  ojson j;
  j["command"] = r.command;
  j["config"] = ojson::parse(r.config.to_json());
  ojson checks = ojson::array();
  ojson times = ojson::object();
  for (const auto& c : r.checks) {
    checks.push_back({{"id", c.id},
                      {"anchor", c.anchor},
                      {"expected_exact", c.expected_exact},
                      {"expected", c.expected},
                      {"computed", c.computed},
                      {"abs_error", c.abs_error},
                      {"rel_error", c.rel_error},
                      {"tolerance", c.tolerance},
                      {"relative", c.relative},
                      {"pass", c.pass}});
    times[c.id] = c.wall_time;
  }
  j["checks"] = checks;
  j["summary"] = {{"total", r.checks.size()},
                  {"passed", r.passed()},
                  {"failed", static_cast<int>(r.checks.size()) - r.passed()},
                  {"all_pass", r.all_pass()}};
  j["details"] = ojson::parse(r.details_json);
  // Everything that depends on when and how fast the run happened.
  j["timing"] = {{"timestamp", r.timestamp}, {"wall_time", times}};
  return j.dump(2) + "\n";
}

std::string render_csv(const Report& r) {
  std::ostringstream os;
  const auto& cols = check_record_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto& c : r.checks)
    os << csv_escape(c.id) << ',' << csv_escape(c.anchor) << ',' << csv_escape(c.expected_exact) << ','
       << number(c.expected) << ',' << number(c.computed) << ',' << number(c.abs_error) << ',' << number(c.rel_error)
       << ',' << number(c.tolerance) << ',' << (c.relative ? "true" : "false") << ',' << (c.pass ? "true" : "false")
       << ',' << number(c.wall_time) << "\n";
  return os.str();
}

void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move report into place: " + ec.message());
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  const Report r = execute(config);
  const std::string text = config.format == "csv" ? render_csv(r) : render_json(r);
  if (config.out.empty())
    out << text;
  else
    write_atomically(config.out, text);
  err << config.command << ": " << r.passed() << "/" << r.checks.size() << " checks passed\n";
  for (const auto& c : r.checks)
    if (!c.pass) err << "  FAIL " << c.id << " expected " << c.expected_exact << " computed " << number(c.computed) << "\n";
  return r.all_pass() ? 0 : 1;
}

}  // namespace beltrami
