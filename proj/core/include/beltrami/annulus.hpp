#pragma once

// The metric family (d phi1^2 + d phi2^2)/n + n^2 dt^2 on T^2 x (0, 2 pi), its curl
// spectrum candidates, the first eigenfields and the comparison constants for lower bounds
// on the first curl eigenvalue of Euclidean domains.

#include <array>
#include <string>
#include <vector>

#include "beltrami/exact_poly.hpp"

namespace beltrami {

struct AnnulusMetric {
  int n = 1;
  Rational g_phi;        // coefficient of d phi1^2 and d phi2^2
  Rational g_t;          // coefficient of dt^2
  Rational determinant;  // g_phi^2 g_t
  ExactScalar volume;    // (2 pi)^3 sqrt(det)
};
// Throws std::invalid_argument for n < 1.
AnnulusMetric annulus_metric(int n);

struct AnnulusMode {
  int n = 1;
  int m1 = 0, m2 = 0, m = 0;
  int branch = 1;           // sign of the eigenvalue
  Rational lambda_squared;  // n m1^2 + n m2^2 + m^2 / (4 n^2)
  double lambda = 0.0;      // signed
  // "confirmed" for the t-only family (m1 = m2 = 0, m even) with explicit eigenfields;
  // "candidate" when the separation condition is only necessary.
  std::string status;
};
// Modes with |lambda| <= cutoff, both branches, sorted by |lambda| then (m1, m2, m, branch).
// Odd m with m1 = m2 = 0 is excluded: those fields are not orthogonal to the harmonic fields.
std::vector<AnnulusMode> spectrum_candidates(int n, double cutoff);

// Smallest positive eigenvalue from the enumerator, as an exact rational (1/n).
Rational annulus_mu1(int n);

// a sin(c t) + b cos(c t)
struct TrigInT {
  Rational a, b;
};
// Coordinate field v1 d_phi1 + v2 d_phi2 + v3 d_t whose components depend on t only,
// all with the same integer frequency c.
struct AnnulusField {
  int frequency = 1;
  std::array<TrigInT, 3> v{};
};
// curl in the metric for n; exact.
AnnulusField annulus_curl(const AnnulusField& v, int n);

struct FirstEigenfieldCheck {
  AnnulusField v1, v2;
  Rational lambda;              // 1/n
  bool eigen_equation = false;  // curl v = lambda v for both
  bool first_order_system = false;
  bool boundary_tangent = false;  // v3 vanishes at t = 0 and t = 2 pi
  bool mean_zero = false;         // orthogonal to d_phi1, d_phi2
  bool all() const { return eigen_equation && first_order_system && boundary_tangent && mean_zero; }
};
// v1 = sin t d_phi1 + cos t d_phi2, v2 = cos t d_phi1 - sin t d_phi2 with every check done
// in exact rational arithmetic.
FirstEigenfieldCheck first_eigenfields(int n);

struct ChainRow {
  int n = 1;
  Rational mu1;
  ExactScalar volume;
  double normalized = 0.0;  // mu1 * volume^{1/3}, scale invariant
};
// Values decreasing to 0 as n grows, reported with their volumes.
std::vector<ChainRow> mu1_chain(int n_max);

struct BoundConstant {
  std::string id;
  std::string expression;
  ExactScalar cube;  // the constant cubed, exactly
  double value = 0.0;
};
struct BoundConstants {
  BoundConstant improved;     // 2 (2 pi^2)^{1/3}
  BoundConstant previous;     // (4 pi / 3)^{1/3}
  BoundConstant sphere_class; // (16 / pi)^{1/3}
  bool improved_exceeds_previous = false;
};
BoundConstants bound_constants();

}  // namespace beltrami
