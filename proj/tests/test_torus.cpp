#include <cmath>

#include <gtest/gtest.h>

#include "beltrami/torus.hpp"
#include "oracles/oracles.hpp"

using namespace beltrami;

namespace {

constexpr double kPi = oracles::kPi;

// Trapezoid rule on an N^3 grid; exact for trigonometric integrands of degree < N.
double grid_integral(const std::function<double(const std::array<double, 3>&)>& f, int N) {
  const double h = 2 * kPi / N;
  double s = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) s += f({i * h, j * h, k * h});
  return s * h * h * h;
}

}  // namespace

TEST(Torus, AbcFieldIsBeltramiAndPointwiseCorrect) {
  const TorusField u = abc_field(1.0, 0.5, 2.0);
  EXPECT_TRUE(u.is_real());
  EXPECT_TRUE(u.divergence_free());
  const TorusField c = u.curl();
  const std::array<double, 3> x{0.3, 1.1, -0.7};
  const auto a = u.evaluate(x), b = c.evaluate(x);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(a[i], b[i], 1e-14);
  EXPECT_NEAR(a[0], std::sin(x[2]) + 2.0 * std::cos(x[1]), 1e-14);
  EXPECT_NEAR(a[1], 0.5 * std::sin(x[0]) + std::cos(x[2]), 1e-14);
  EXPECT_NEAR(a[2], 2.0 * std::sin(x[1]) + 0.5 * std::cos(x[0]), 1e-14);
}

TEST(Torus, InnerProductAgainstGridOracle) {
  const TorusField u = abc_field(1, 1, 1), v = abc_field(0.3, -1, 2);
  const TrigPoly q = TrigPoly::cos_mode({1, 0, 0}, 0.5) + TrigPoly::sin_mode({0, 1, 1}, 0.25) + TrigPoly::constant(1);
  const double oracle = grid_integral(
      [&](const auto& x) {
        const auto a = u.evaluate(x), b = v.evaluate(x);
        return q.evaluate(x) * (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
      },
      8);
  EXPECT_NEAR(torus_inner(u, v, q), oracle, 1e-10);
  EXPECT_NEAR(torus_inner(u, u), 3 * torus_volume(), 1e-10);
}

TEST(Torus, SpeedAndFirstVariation) {
  const SpeedWitness w = speed_is_constant(abc_field(1, 1, 1));
  EXPECT_FALSE(w.constant);
  EXPECT_NEAR(w.constant_part, 3.0, 1e-14);
  EXPECT_GT(std::abs(w.coefficient), 0.1);
  EXPECT_TRUE(speed_is_constant(abc_field(1, 0, 0)).constant);
  const double fv = first_variation(abc_field(1, 1, 1), abc_speed_direction());
  EXPECT_NEAR(fv, 3 * std::pow(2 * kPi, 3), 1e-12 * fv);
  EXPECT_THROW(first_variation(abc_field(1, 1, 1), TrigPoly::constant(1)), std::invalid_argument);
}

TEST(Torus, BasisIsOrthonormal) {
  const auto b = torus_basis(1);
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      EXPECT_NEAR(torus_inner(b[i].field, b[j].field), i == j ? 1.0 : 0.0, 1e-12) << i << "," << j;
}

TEST(Torus, PencilDerivativeAgainstFiniteDifference) {
  const TrigPoly q = abc_speed_direction();
  const TorusPencil p0 = torus_pencil(q, 0.0, 1);
  EXPECT_NEAR(p0.mu1, 1.0, 1e-12);
  ASSERT_FALSE(p0.first_order_derivatives.empty());
  EXPECT_NEAR(p0.first_order_derivatives.front(), -1.0, 1e-9);
  // The lowest branch is the one with the most negative slope for small t > 0.
  const double h = 1e-4;
  const double fd = (torus_pencil(q, h, 1).mu1 - torus_pencil(q, -h, 1).mu1) / (2 * h);
  // mu1(t) for t < 0 follows a different branch; the one-sided difference sees the minimum slope.
  const double right = (torus_pencil(q, h, 1).mu1 - 1.0) / h;
  EXPECT_NEAR(right, -1.0, 1e-3);
  EXPECT_LE(fd, 0.0);
  // cos(2x) does not move mu1 to first order.
  const TorusPencil pc = torus_pencil(TrigPoly::cos_mode({2, 0, 0}), 0.0, 1);
  EXPECT_NEAR(pc.first_order_derivatives.front(), 0.0, 1e-12);
  EXPECT_THROW(torus_pencil(q, 10.0, 1), NonPositiveFactor);
}

TEST(Torus, ScanFindsLowerValue) {
  const ScanReport r = torus_scan({{"abc-speed", abc_speed_direction()}}, {-0.02, 0.0, 0.02}, 1);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_LT(r.rows[0].grid_min, r.rows[0].value_at_zero);
  EXPECT_FALSE(r.rows[0].minimum_at_zero);
}
