#pragma once

// Fields on the flat torus [0, 2 pi)^3 as finite Fourier sums, ABC flows, the constant
// speed test, the first variation of mu1 under volume-preserving conformal changes and a
// Galerkin pencil for the metric (1 + t q)^2 g0.

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "beltrami/conformal_galerkin.hpp"

namespace beltrami {

using Wavevector = std::array<int, 3>;
using Amplitude = std::array<std::complex<double>, 3>;

// sum_k c_k e^{i k.x}
struct TrigPoly {
  std::map<Wavevector, std::complex<double>> coeffs;

  static TrigPoly constant(double c);
  static TrigPoly cos_mode(const Wavevector& k, double c = 1.0);
  static TrigPoly sin_mode(const Wavevector& k, double c = 1.0);
  void add(const Wavevector& k, std::complex<double> c);
  TrigPoly& operator+=(const TrigPoly& o);
  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);
  friend TrigPoly operator*(double s, TrigPoly a);
  double mean() const;
  double evaluate(const std::array<double, 3>& x) const;
  bool is_real(double tol = 1e-14) const;
};

struct TorusField {
  std::map<Wavevector, Amplitude> modes;

  void add(const Wavevector& k, const Amplitude& a);
  std::array<double, 3> evaluate(const std::array<double, 3>& x) const;
  TorusField curl() const;  // i k x per mode
  TrigPoly squared_norm() const;
  bool is_real(double tol = 1e-14) const;
  bool divergence_free(double tol = 1e-14) const;
  double max_abs_amplitude() const;
  friend TorusField operator+(TorusField a, const TorusField& b);
  friend TorusField operator-(TorusField a, const TorusField& b);
  friend TorusField operator*(double s, TorusField a);
};

// int_{T^3} q <u, v> dV (q may be empty for weight 1).
double torus_inner(const TorusField& u, const TorusField& v, const TrigPoly& q);
double torus_inner(const TorusField& u, const TorusField& v);
double torus_volume();  // (2 pi)^3

// (A sin z + C cos y, B sin x + A cos z, C sin y + B cos x); curl eigenvalue 1.
TorusField abc_field(double A, double B, double C);

struct SpeedWitness {
  bool constant = false;
  double constant_part = 0.0;      // mean of |F|^2
  Wavevector mode{0, 0, 0};        // largest nonconstant Fourier mode of |F|^2 (if any)
  std::complex<double> coefficient;
};
SpeedWitness speed_is_constant(const TorusField& F, double tol = 1e-12);

// int phidot |u|^2 dV; throws std::invalid_argument when phidot has a nonzero mean.
double first_variation(const TorusField& u, const TrigPoly& phidot, double tol = 1e-12);

// |abc(1,1,1)|^2 - 3, the direction used for the descent certificate.
TrigPoly abc_speed_direction();

// Orthonormal real trial fields with |k| <= kmax: two helical fields (eigenvalues +-|k|)
// and two gradient fields per wavevector pair, plus the three constant fields.
struct TorusBasisField {
  TorusField field;
  double eigenvalue = 0.0;  // 0 for gradients and constants
  Wavevector k{0, 0, 0};
  std::string kind;  // "helical", "gradient", "constant"
};
std::vector<TorusBasisField> torus_basis(int kmax);

struct TorusPencil {
  int kmax = 0;
  double t = 0.0;
  Eigen::MatrixXd A, B;
  int zero_dimension = 0;                      // gradients and constants
  std::vector<double> first_order_derivatives;  // d/dt of the mu1 group at t = 0, ascending
  double mu1 = 0.0;                             // smallest positive eigenvalue at t
  double volume = 0.0;                          // int (1 + t q)^3
};
// Throws NonPositiveFactor when 1 + t q <= 0 somewhere, std::runtime_error for an
// indefinite B.
TorusPencil torus_pencil(const TrigPoly& q, double t, int kmax);

// Non-optimality scan in the same report format as the S^3 scans ("t3"). A row
// passes when some t lowers mu1 * Vol^{1/3} below its t = 0 value.
struct NamedTrig {
  std::string id;
  TrigPoly q;
};
ScanReport torus_scan(const std::vector<NamedTrig>& qs, const std::vector<double>& t_grid, int kmax,
                      const ScanConfig& config = {});

}  // namespace beltrami
