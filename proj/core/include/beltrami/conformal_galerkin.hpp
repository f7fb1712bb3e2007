#pragma once

// First curl eigenvalue of conformal perturbations g = (1 + t q)^2 g0 of the round
// metric on S^3 and RP^3 via a symmetric Galerkin pencil, the conformal transport of
// fields that preserves helicity and L^{3/2} energy, and the metric built from a
// nonvanishing minimizer.
//
// With phi = 1 + t q, curl_g X = phi^{-3} curl(phi^2 X). Writing Y = phi^2 X turns
// curl_g X = mu X into curl Y = mu phi Y, whose weak form is the pencil
//   A_ij = <curl e_i, e_j>,  B_ij = int phi <e_i, e_j> dV.

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "beltrami/eigen_atlas.hpp"
#include "beltrami/quadrature.hpp"

namespace beltrami {

enum class Manifold { s3, rp3 };
std::string to_string(Manifold m);
Manifold parse_manifold(const std::string& s);  // throws std::invalid_argument

struct ConformalParityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NonPositiveFactor : std::domain_error {
  using std::domain_error::domain_error;
};

struct ConformalFactor {
  RationalPoly q;
  double t = 0.0;

  double sqrt_factor(const std::array<double, 4>& x) const { return 1.0 + t * q.evaluate(x); }
  RealPoly sqrt_factor_poly() const;
  bool is_even() const { return q.parity_part(1).is_zero(); }
  // Smallest value of 1 + t q over a dense grid.
  double min_sqrt_factor() const;
};

// Exact volume int (1 + t q)^3 dV as a cubic in t (halved on RP^3).
struct ConformalVolume {
  std::array<ExactScalar, 4> coefficients;  // of t^0 .. t^3
  double at(double t) const;
};
ConformalVolume conformal_volume(Manifold m, const RationalPoly& q);

// Trial space: orthonormal eigenfields with 2 <= |mu| <= dmax + 2 plus gradients of
// potentials of degree <= dmax + 2 (on RP^3 only fields that descend: even mu, even
// potentials). Gradients are orthonormalized; spurious zero modes come from them.
struct GalerkinBasisInfo {
  Manifold manifold = Manifold::s3;
  int dmax = 0;
  std::vector<int> eigenvalues;  // label per eigenfield column
  int eigenfield_dimension = 0;
  int gradient_dimension = 0;
  int size() const { return eigenfield_dimension + gradient_dimension; }
};
GalerkinBasisInfo galerkin_basis_info(Manifold m, int dmax);

struct GalerkinPencil {
  GalerkinBasisInfo basis;
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  double A_asymmetry = 0.0;       // max |A - A^T| before symmetrization
  double B_min_eigenvalue = 0.0;  // positive definiteness witness
};
// Entries are integrals of polynomials, computed with a product rule that is exact for
// their degree (Gauss-Legendre in sin^2 of the Hopf angle, trapezoid in the two circles).
GalerkinPencil assemble_pencil(Manifold m, const ConformalFactor& cf, int dmax);

struct PencilSpectrum {
  std::vector<double> eigenvalues;  // nonzero, ascending
  int zero_count = 0;
};
// Throws SpectrumMismatch when the number of zero modes differs from the gradient dimension.
PencilSpectrum pencil_spectrum(const GalerkinPencil& p, double zero_tol = 1e-8);

struct Mu1Result {
  double mu1 = 0.0;
  double volume = 0.0;
  double normalized = 0.0;  // mu1 * volume^{1/3}
  int zero_count = 0;
  int pencil_size = 0;
};
Mu1Result mu1_normalized(Manifold m, const ConformalFactor& cf, int dmax);

// Closed values at t = 0: 2 (2 pi^2)^{1/3} on S^3 and 2 pi^{2/3} on RP^3.
double round_mu1_normalized(Manifold m);
// Lower bound (16/pi)^{1/3} valid on the whole conformal class of S^3.
double conformal_class_lower_bound();

// ---------------------------------------------------------------- scans

struct NamedPoly {
  std::string id;
  RationalPoly q;
};
// Deterministic random polynomials of degree <= 2 with small rational coefficients
// scaled so that max |q| <= 1 on S^3 (odd parts only for S^3).
std::vector<NamedPoly> random_quadratics(Manifold m, int count, std::uint64_t seed);

struct ScanPoint {
  std::string manifold;
  std::string q_id;
  double t = 0.0;
  int dmax = 0;
  double mu1 = 0.0;
  double mu1_normalized = 0.0;
  double refinement_delta = 0.0;  // |normalized(dmax + 1) - normalized(dmax)|
  bool pass = false;              // refinement below tolerance and above the lower bound
};
struct ScanRow {
  std::string q_id;
  double value_at_zero = 0.0;
  double grid_min = 0.0;
  double t_at_min = 0.0;
  std::array<double, 3> quadratic_fit{};  // c0 + c1 t + c2 t^2, least squares
  bool minimum_at_zero = false;
};
struct ScanConfig {
  double refinement_tol = 1e-4;
  double minimum_tol = 1e-6;
};
struct ScanReport {
  std::string manifold;
  int dmax = 0;
  std::vector<double> t_grid;
  std::vector<ScanPoint> points;
  std::vector<ScanRow> rows;
  double lower_bound = 0.0;
  bool all_pass = false;
};
ScanReport optimality_scan(Manifold m, const std::vector<NamedPoly>& qs, const std::vector<double>& t_grid, int dmax,
                           const ScanConfig& config = {});

// ---------------------------------------------------------------- transport

// The field phi^power * u, viewed in the metric phi^2 g0.
struct WeightedField {
  RealFrameField u;
  ConformalFactor cf;
  int phi_power = 0;
  std::array<double, 3> evaluate(const std::array<double, 4>& x) const;
};
// u -> phi^{-3} u: preserves helicity and the L^{3/2} energy.
WeightedField conformal_pushforward(const RealFrameField& u, const ConformalFactor& cf);
// int |X|_g^{3/2} dV_g.
double energy_in_metric(const WeightedField& X, const HopfGrid& grid);
// int g(curl_g^{-1} X, X) dV_g; needs 3 + phi_power >= 0 so that phi^3 X is polynomial.
double helicity_in_metric(const WeightedField& X);

struct MinimizerMetric {
  double kappa = 0.0;
  double energy = 0.0;
  double volume_reference = 0.0;  // |M|_g
  double volume_new = 0.0;        // |M|_{kappa |u| g}
  double weight_min = 0.0, weight_max = 0.0;
  double transported_norm_min = 0.0, transported_norm_max = 0.0;  // of |u|^{-3/2} kappa^{-3/2} u in the new metric
  std::function<double(const std::array<double, 4>&)> weight;   // kappa |u|
};
// kappa = (|M| / E(u))^{2/3}, new metric kappa |u| g. Throws std::domain_error if u
// vanishes somewhere on the grid.
MinimizerMetric metric_from_minimizer(const RealFrameField& u, const QuadratureSpec& spec = {});

}  // namespace beltrami
