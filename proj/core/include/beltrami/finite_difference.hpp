#pragma once

// Central finite differences of arbitrary order with Fornberg weights.

#include <functional>
#include <vector>

namespace beltrami {

// Weights w_j with f^(derivative)(x0) ~ sum_j w_j f(nodes[j]).
std::vector<double> fornberg_weights(double x0, const std::vector<double>& nodes, int derivative);

// Half-width m of the symmetric stencil reaching truncation order `accuracy` (even).
int central_half_width(int derivative, int accuracy);

// Step minimizing h^accuracy + eps / h^derivative.
double balanced_step(int derivative, int accuracy, double eps = 1e-13);

struct FiniteDifference {
  double value = 0.0;
  double step = 0.0;
  int points = 0;
};

FiniteDifference central_derivative(const std::function<double(double)>& f, int derivative, double step,
                                    int accuracy = 8);

}  // namespace beltrami
