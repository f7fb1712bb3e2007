#pragma once

// Independent reference computations for the tests. Nothing here calls into the
// library's integration or differentiation code.

#include <array>
#include <cmath>
#include <functional>
#include <random>

namespace oracles {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSphereArea = 2.0 * kPi * kPi;

// Uniform point on S^3 from four normals.
inline std::array<double, 4> uniform_s3(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  std::array<double, 4> x{};
  double r = 0;
  do {
    r = 0;
    for (auto& v : x) {
      v = n(rng);
      r += v * v;
    }
  } while (r < 1e-20);
  r = std::sqrt(r);
  for (auto& v : x) v /= r;
  return x;
}

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Monte-Carlo integral over S^3 with its standard error.
inline McEstimate monte_carlo_s3(const std::function<double(const std::array<double, 4>&)>& f, int n,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double v = f(uniform_s3(rng));
    s += v;
    s2 += v * v;
  }
  const double m = s / n;
  const double var = std::max(0.0, s2 / n - m * m);
  return {kSphereArea * m, kSphereArea * std::sqrt(var / n)};
}

// Tensor Gauss-free midpoint rule in Hopf coordinates, dV = sin h cos h dh da db.
// Slow but written from scratch; converges like N^-2 for smooth integrands.
inline double midpoint_s3(const std::function<double(const std::array<double, 4>&)>& f, int nh, int na) {
  double sum = 0.0;
  const double dh = 0.5 * kPi / nh, da = 2 * kPi / na;
  for (int i = 0; i < nh; ++i) {
    const double h = (i + 0.5) * dh;
    const double w = std::sin(h) * std::cos(h) * dh * da * da;
    for (int j = 0; j < na; ++j)
      for (int k = 0; k < na; ++k) {
        const double a = j * da, b = k * da;
        sum += w * f({std::cos(h) * std::cos(a), std::cos(h) * std::sin(a), std::sin(h) * std::cos(b),
                      std::sin(h) * std::sin(b)});
      }
  }
  return sum;
}

// Richardson-extrapolated central difference of order 1 or 2 (step h and h/2).
inline double richardson_derivative(const std::function<double(double)>& f, int order, double h) {
  auto d = [&](double s) {
    if (order == 1) return (f(s) - f(-s)) / (2 * s);
    return (f(s) - 2 * f(0.0) + f(-s)) / (s * s);
  };
  return (4 * d(h / 2) - d(h)) / 3;
}

// Hopf frame at a point of S^3, Cartesian components (left multiplication by i, j, k).
inline std::array<std::array<double, 4>, 3> hopf_frame(const std::array<double, 4>& x) {
  return {{{-x[1], x[0], -x[3], x[2]}, {-x[2], x[3], x[0], -x[1]}, {-x[3], -x[2], x[1], x[0]}}};
}

}  // namespace oracles
