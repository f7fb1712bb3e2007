#include "beltrami/finite_difference.hpp"

#include <cmath>
#include <stdexcept>

namespace beltrami {

std::vector<double> fornberg_weights(double x0, const std::vector<double>& nodes, int derivative) {
  const int n = static_cast<int>(nodes.size());
  if (derivative < 0 || derivative >= n) throw std::invalid_argument("fornberg_weights: too few nodes");
  const int M = derivative;
  // delta[m][j] for the current number of nodes; standard recursion.
  std::vector<std::vector<double>> d(static_cast<std::size_t>(M + 1), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  d[0][0] = 1.0;
  double c1 = 1.0;
  for (int i = 1; i < n; ++i) {
    double c2 = 1.0;
    const int mn = std::min(i, M);
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1)
        for (int m = mn; m >= 0; --m) {
          auto& row = d[static_cast<std::size_t>(m)];
          const double prev = m > 0 ? d[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(i - 1)] : 0.0;
          row[static_cast<std::size_t>(i)] =
              c1 * (m * prev - (nodes[static_cast<std::size_t>(i - 1)] - x0) * row[static_cast<std::size_t>(i - 1)]) / c2;
        }
      for (int m = mn; m >= 0; --m) {
        auto& row = d[static_cast<std::size_t>(m)];
        const double prev = m > 0 ? d[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(j)] : 0.0;
        row[static_cast<std::size_t>(j)] =
            ((nodes[static_cast<std::size_t>(i)] - x0) * row[static_cast<std::size_t>(j)] - m * prev) / c3;
      }
    }
    c1 = c2;
  }
  return d[static_cast<std::size_t>(M)];
}

int central_half_width(int derivative, int accuracy) {
  if (accuracy < 2 || accuracy % 2) throw std::invalid_argument("central_half_width: accuracy must be even");
  return (derivative + 1) / 2 + accuracy / 2 - 1;
}

double balanced_step(int derivative, int accuracy, double eps) {
  return std::pow(eps, 1.0 / (accuracy + derivative));
}

FiniteDifference central_derivative(const std::function<double(double)>& f, int derivative, double step,
                                    int accuracy) {
  const int m = central_half_width(derivative, accuracy);
  std::vector<double> nodes;
  for (int j = -m; j <= m; ++j) nodes.push_back(j);
  const auto w = fornberg_weights(0.0, nodes, derivative);
  double s = 0.0;
  for (int j = -m; j <= m; ++j) {
    const double wj = w[static_cast<std::size_t>(j + m)];
    if (wj != 0.0) s += wj * f(j * step);
  }
  FiniteDifference r;
  r.value = s / std::pow(step, derivative);
  r.step = step;
  r.points = 2 * m + 1;
  return r;
}

}  // namespace beltrami
