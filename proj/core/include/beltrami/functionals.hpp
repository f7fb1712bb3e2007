#pragma once

// Energy, helicity and the Rayleigh-type functionals near the Hopf field B1, their
// derivatives at B1, and the cubic correction fields of the sixth-order expansion.

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "beltrami/eigen_atlas.hpp"
#include "beltrami/quadrature.hpp"

namespace beltrami {

// Orthonormal floating basis of an eigenspace, in atlas order (cached).
const std::vector<RealFrameField>& unit_basis(int eigenvalue);

// Perturbation W of B1 in coordinates adapted to the expansion around the Hopf field.
//   beta : eigenvalue -2, over Bhat_j / (sqrt(2) pi)
//   a    : eigenvalue 3, over unit u1..u8 (Z1 = a1..a4, Z2 = a5..a8)
//   b    : eigenvalue 4, over unit v1..v15 (P2 = b10, b12, b15; P1 = the rest)
//   extra: higher eigenspaces keyed by curl eigenvalue, one of -4, -3, 5, 6, 7
struct HopfPerturbation {
  std::array<double, 3> beta{};
  std::array<double, 8> a{};
  std::array<double, 15> b{};
  std::map<int, RealFrameField> extra;

  static constexpr std::array<int, 5> kExtraEigenvalues{-4, -3, 5, 6, 7};
  static constexpr std::array<int, 3> kP2Indices{10, 12, 15};  // 1-based

  RealFrameField W_minus1() const;
  RealFrameField Z1() const;
  RealFrameField Z2() const;
  RealFrameField W3() const;
  RealFrameField P1() const;
  RealFrameField P2() const;
  RealFrameField W_E() const { return W_minus1() + W3(); }
  RealFrameField W_hat0() const;
  RealFrameField assemble() const;

  // L2 norm squared and helicity, both from the coefficients.
  double norm_sq() const;
  double helicity() const;

  // Throws std::invalid_argument for an unknown extra key or an extra that is not an
  // eigenfield of its key (relative tolerance tol).
  void validate(double tol = 1e-10) const;
};

// ---------------------------------------------------------------- functionals

double l32_energy(const RealFrameField& F, const HopfGrid& grid);
double l32_energy(const RealFrameField& F, const QuadratureSpec& q = {});
double l32_energy(const FrameField& F, const QuadratureSpec& q = {});

// DE(F)(Y) = (3/2) int |F|^{-1/2} F.Y
double d_energy(const RealFrameField& F, const RealFrameField& Y, const HopfGrid& grid);
double d_energy(const RealFrameField& F, const RealFrameField& Y, const QuadratureSpec& q = {});

// DH(F)(Y) = 2 <curl^{-1} F, Y>; D2H(F)(Y, Y) = 2 H(Y) for every F.
ExactScalar d_helicity(const FrameField& F, const FrameField& Y);
double d_helicity(const RealFrameField& F, const RealFrameField& Y);
ExactScalar d2_helicity(const FrameField& Y);
double d2_helicity(const RealFrameField& Y);

struct UndefinedFunctional : std::domain_error {
  using std::domain_error::domain_error;
};

// F = E^{4/3} / H and R = H / E^{4/3}; zero helicity throws UndefinedFunctional.
double big_F(const RealFrameField& F, const HopfGrid& grid);
double big_F(const RealFrameField& F, const QuadratureSpec& q = {});
double rayleigh_R(const RealFrameField& F, const HopfGrid& grid);
double rayleigh_R(const RealFrameField& F, const QuadratureSpec& q = {});
// Closed values at B1: E = 2 pi^2, H = pi^2.
double hopf_energy();
double hopf_helicity();
double hopf_F();
// E(B1)^{1/3} / H(B1), the common prefactor of the higher derivatives of F.
double hopf_prefactor();

// ---------------------------------------------------------------- derivatives at B1

// D^k E(B1)(W, ..., W), k = 1..6, from exact moment integrals of polynomials in
// a = B1.W and b = |W|^2.
double dE_at_hopf(int k, const RealFrameField& W);
double dE_at_hopf(int k, const HopfPerturbation& W);

// D^k F(B1)(W, ..., W), k = 0..6; index 0 holds F(B1). Obtained by composing the power
// series of E along B1 + tW with x^{4/3} and dividing by the (quadratic) series of H.
std::array<double, 7> hopf_F_derivatives(const HopfPerturbation& W);
std::array<double, 7> hopf_F_derivatives(const RealFrameField& W);
double dF_at_hopf(int k, const HopfPerturbation& W);
double dF_at_hopf(int k, const RealFrameField& W);

// 6 DF + 3 D2F + D3F + D4F/4 + D5F/20 + D6F/120 at B1.
double taylor6_combination(const HopfPerturbation& W);

// Taylor coefficients (not derivatives) of E, H and F along the polynomial curve
// B1 + sum_k t^k path[k-1], up to `order`. Used to separate scales such as
// W = eps Z2 + eps^2 P2.
struct CurveSeries {
  std::vector<double> energy, helicity, F;
};
CurveSeries hopf_curve_series(const std::vector<RealFrameField>& path, int order);

// Second variation of R at a first eigenfield Y1 in a direction W orthogonal to E1:
// (2 mu1 H(W) - 2 |W|^2 + int (Y1.W)^2 / |Y1|^2) / (mu1 E(Y1)^{4/3}), mu1 = 2.
// Throws std::invalid_argument if Y1 is not in E1 or W is not orthogonal to E1.
double second_variation_R(const RealFrameField& Y1, const RealFrameField& W);

// Second variation of R at B1 over random directions W orthogonal to E1 whose frame
// coefficients are even, i.e. fields that descend to RP3. Draws are standard normal in the
// unit bases of the admissible eigenspaces with |mu| <= dmax + 2.
struct SecondVariationScan {
  int draws = 0;
  std::uint64_t seed = 0;
  std::vector<int> eigenvalues;  // admissible eigenspaces used
  std::vector<double> ratios;    // second_variation_R(B1, W) / |W|^2 per draw
  double max_ratio = 0.0;
  double min_ratio = 0.0;
};
SecondVariationScan rp3_second_variation_scan(int draws, std::uint64_t seed, int dmax = 3);

// ---------------------------------------------------------------- remainder and correction

// The cubic remainder field paired with W0 in the fourth-order expansion:
//   (-6 P.Z + 15 (P.B1)(B1.Z) - 45/4 (B1.Z)^3 + 15/2 |Z|^2 (B1.Z)) B1
//   + (-6 B1.P - 3 |Z|^2 + 15/2 (B1.Z)^2) Z - 6 (B1.Z) P
// with P in span{v10, v12, v15} and Z in span{u5, u8}; other inputs throw std::invalid_argument.
RealFrameField remainder_field(const RealFrameField& P2, const RealFrameField& Z2);

// Values of b10, b12, b15 fixed by a5, a8 on the critical relations.
std::array<double, 3> critical_p2_coefficients(double a5, double a8);

struct CorrectionField {
  RealFrameField C;
  RealPoly potential;            // the cubic G with C = remainder - grad G
  double norm_sq = 0.0;          // exact polynomial integral of |C|^2
  double divergence_sup = 0.0;   // max |div C| over the quadrature nodes
};
// Divergence-free part of the remainder field on the critical relations.
CorrectionField correction_field(double a5, double a8);

// ---------------------------------------------------------------- local scan

struct LocalMaxConfig {
  double radius = 0.05;     // sup-norm bound on W
  int samples = 200;
  std::uint64_t seed = 1;
  int dmax = 3;             // span of eigenvalues +-2 .. +-(dmax+2)
  QuadratureSpec quadrature{20, 40};
  double tol = 1e-9;
  double e1_tol = 1e-8;
  int e1_only_every = 20;   // every n-th sample is drawn inside E1 (0 disables)
};

struct LocalMaxSample {
  int index = 0;
  double sup_norm = 0.0;
  double non_e1_norm = 0.0;  // L2 norm of the part of W outside E1
  double delta_R = 0.0;      // R(B1 + W) - R(B1)
  bool violation = false;
  std::vector<double> coefficients;  // recorded only for violations
};

struct LocalMaxReport {
  LocalMaxConfig config;
  double R_hopf = 0.0;
  std::vector<LocalMaxSample> samples;
  int violations = 0;
  double max_delta_R_non_e1 = 0.0;  // largest delta over samples outside E1
  double max_abs_delta_R_e1 = 0.0;  // largest |delta| over samples inside E1
};

LocalMaxReport local_max_scan(const LocalMaxConfig& config);

}  // namespace beltrami
