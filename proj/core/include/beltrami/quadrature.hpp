#pragma once

// Product quadrature on S^3 in Hopf coordinates
//   x = (cos h cos a, cos h sin a, sin h cos b, sin h sin b),  dV = sin h cos h dh da db.

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "beltrami/frame_field.hpp"

namespace beltrami {

enum class RadialVariable {
  angle,        // Gauss-Legendre in h on [0, pi/2] with weight sin h cos h (default)
  sin_squared,  // Gauss-Legendre in u = sin^2 h on [0, 1]
};

struct QuadratureSpec {
  int radial_order = 24;
  int angular_order = 48;
  RadialVariable radial_variable = RadialVariable::angle;

  // Polynomial degree integrated exactly in the radial variable u (sin_squared rule) and
  // trigonometric degree per angle.
  int radial_exactness() const { return 2 * radial_order - 1; }
  int angular_exactness() const { return angular_order - 1; }
};

class HopfGrid {
 public:
  explicit HopfGrid(const QuadratureSpec& spec = {});

  const QuadratureSpec& spec() const { return spec_; }
  std::size_t size() const { return weights_.size(); }
  const std::vector<std::array<double, 4>>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  double total_weight() const;

 private:
  QuadratureSpec spec_;
  std::vector<std::array<double, 4>> points_;
  std::vector<double> weights_;
};

// Compensated (Neumaier) sum of w_i * v_i.
double weighted_sum(const std::vector<double>& weights, const std::vector<double>& values);

using PointFunction = std::function<double(const std::array<double, 4>&)>;
double integrate_scalar(const PointFunction& f, const HopfGrid& grid);

struct ConvergenceRow {
  QuadratureSpec spec;
  double value = 0.0;
  double difference = 0.0;  // |value - previous value|; 0 for the first row
};
struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  bool converged = false;  // final difference below tol relative to |value| (or absolute when tiny)
};
ConvergenceTable convergence_probe(const PointFunction& f, const std::vector<QuadratureSpec>& orders,
                                   double tol = 1e-12);

// Frame coefficients of a list of fields sampled on a grid, for fast evaluation of
// linear combinations. components[a](p, i) = coefficient a of field i at point p.
class SampledBasis {
 public:
  SampledBasis(const HopfGrid& grid, const std::vector<RealFrameField>& fields);
  const HopfGrid& grid() const { return *grid_; }
  std::size_t dimension() const { return static_cast<std::size_t>(components_[0].cols()); }
  // Pointwise |sum c_i e_i + base|^2 at every node; base is optional (may be empty).
  std::vector<double> squared_norms(const Eigen::VectorXd& c, const std::vector<std::array<double, 3>>& base = {}) const;
  const Eigen::MatrixXd& component(int a) const { return components_[static_cast<std::size_t>(a)]; }

 private:
  const HopfGrid* grid_;
  std::array<Eigen::MatrixXd, 3> components_;
};

// Pointwise frame coefficients of F at the grid nodes.
std::vector<std::array<double, 3>> sample(const RealFrameField& F, const HopfGrid& grid);

}  // namespace beltrami
