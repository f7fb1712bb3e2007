#include "beltrami/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <gsl/gsl_integration.h>

namespace beltrami {

namespace {

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

HopfGrid::HopfGrid(const QuadratureSpec& spec) : spec_(spec) {
  if (spec.radial_order < 1 || spec.angular_order < 1)
    throw std::invalid_argument("HopfGrid: orders must be positive");
  std::vector<double> h, wh;
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(spec.radial_order));
  if (!table) throw std::runtime_error("HopfGrid: Gauss-Legendre table allocation failed");
  for (int i = 0; i < spec.radial_order; ++i) {
    double x, w;
    if (spec.radial_variable == RadialVariable::angle) {
      gsl_integration_glfixed_point(0.0, M_PI / 2, static_cast<std::size_t>(i), &x, &w, table);
      h.push_back(x);
      wh.push_back(w * std::sin(x) * std::cos(x));
    } else {
      // dV = (1/2) du da db with u = sin^2 h.
      gsl_integration_glfixed_point(0.0, 1.0, static_cast<std::size_t>(i), &x, &w, table);
      h.push_back(std::asin(std::sqrt(x)));
      wh.push_back(0.5 * w);
    }
  }
  gsl_integration_glfixed_table_free(table);

  const int n = spec.angular_order;
  const double wa = 2 * M_PI / n;
  points_.reserve(h.size() * static_cast<std::size_t>(n) * n);
  for (std::size_t r = 0; r < h.size(); ++r) {
    const double c = std::cos(h[r]), s = std::sin(h[r]);
    for (int i = 0; i < n; ++i) {
      const double a = wa * i;
      for (int j = 0; j < n; ++j) {
        const double b = wa * j;
        points_.push_back({c * std::cos(a), c * std::sin(a), s * std::cos(b), s * std::sin(b)});
        weights_.push_back(wh[r] * wa * wa);
      }
    }
  }
}

double HopfGrid::total_weight() const {
  Neumaier acc;
  for (double w : weights_) acc.add(w);
  return acc.value();
}

double weighted_sum(const std::vector<double>& weights, const std::vector<double>& values) {
  if (weights.size() != values.size()) throw std::invalid_argument("weighted_sum: size mismatch");
  Neumaier acc;
  for (std::size_t i = 0; i < weights.size(); ++i) acc.add(weights[i] * values[i]);
  return acc.value();
}

double integrate_scalar(const PointFunction& f, const HopfGrid& grid) {
  std::vector<double> v(grid.size());
  const auto& pts = grid.points();
  for (std::size_t i = 0; i < pts.size(); ++i) v[i] = f(pts[i]);
  return weighted_sum(grid.weights(), v);
}

ConvergenceTable convergence_probe(const PointFunction& f, const std::vector<QuadratureSpec>& orders, double tol) {
  ConvergenceTable t;
  for (const auto& spec : orders) {
    ConvergenceRow row;
    row.spec = spec;
    row.value = integrate_scalar(f, HopfGrid(spec));
    if (!t.rows.empty()) row.difference = std::abs(row.value - t.rows.back().value);
    t.rows.push_back(row);
  }
  if (t.rows.size() >= 2) {
    const auto& last = t.rows.back();
    t.converged = last.difference <= tol * std::max(1.0, std::abs(last.value));
  }
  return t;
}

std::vector<std::array<double, 3>> sample(const RealFrameField& F, const HopfGrid& grid) {
  std::vector<std::array<double, 3>> out(grid.size());
  const auto& pts = grid.points();
#pragma omp parallel for
  for (std::size_t i = 0; i < pts.size(); ++i) out[i] = evaluate(F, pts[i]);
  return out;
}

SampledBasis::SampledBasis(const HopfGrid& grid, const std::vector<RealFrameField>& fields) : grid_(&grid) {
  const auto P = static_cast<Eigen::Index>(grid.size());
  const auto n = static_cast<Eigen::Index>(fields.size());
  for (auto& m : components_) m.resize(P, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto s = sample(fields[static_cast<std::size_t>(i)], grid);
    for (Eigen::Index p = 0; p < P; ++p)
      for (int a = 0; a < 3; ++a) components_[static_cast<std::size_t>(a)](p, i) = s[static_cast<std::size_t>(p)][static_cast<std::size_t>(a)];
  }
}

std::vector<double> SampledBasis::squared_norms(const Eigen::VectorXd& c,
                                                const std::vector<std::array<double, 3>>& base) const {
  const auto P = components_[0].rows();
  Eigen::VectorXd total = Eigen::VectorXd::Zero(P);
  for (int a = 0; a < 3; ++a) {
    Eigen::VectorXd v = components_[static_cast<std::size_t>(a)] * c;
    if (!base.empty())
      for (Eigen::Index p = 0; p < P; ++p) v(p) += base[static_cast<std::size_t>(p)][static_cast<std::size_t>(a)];
    total += v.cwiseAbs2();
  }
  return {total.data(), total.data() + P};
}

}  // namespace beltrami
