#include <cmath>

#include <gtest/gtest.h>

#include "beltrami/eigen_atlas.hpp"
#include "beltrami/finite_difference.hpp"
#include "beltrami/functionals.hpp"
#include "beltrami/quadrature.hpp"
#include "oracles/oracles.hpp"

using namespace beltrami;

TEST(Quadrature, TotalWeightIsSphereArea) {
  for (auto rv : {RadialVariable::angle, RadialVariable::sin_squared}) {
    QuadratureSpec s;
    s.radial_variable = rv;
    EXPECT_NEAR(HopfGrid(s).total_weight(), oracles::kSphereArea, 1e-13);
  }
}

TEST(Quadrature, PolynomialsIntegrateExactly) {
  const HopfGrid g(QuadratureSpec{16, 24});
  for (const char* text : {"x1^4*x2^2", "x3^2*x4^2 - x1*x2", "x1^6 + 3*x2^2*x3^2*x4^2"}) {
    const RationalPoly p = parse_poly(text);
    const double q = integrate_scalar([&](const auto& x) { return p.evaluate(x); }, g);
    EXPECT_NEAR(q, integrate_poly(p).to_double(), 1e-13) << text;
  }
}

TEST(Quadrature, EnergyOfUnitU1) {
  // |u1|^2 = (x1^2 + x2^2) / pi^2 for the unit field, so E = 4 pi^2 pi^{-3/2} int cos^{5/2} sin.
  const RealFrameField u1 = explicit_basis(3).unit_field(0);
  const double expected = 8.0 * std::sqrt(oracles::kPi) / 7.0;
  EXPECT_NEAR(l32_energy(u1, QuadratureSpec{48, 16}), expected, 1e-12);
  const double mid = oracles::midpoint_s3(
      [&](const auto& x) {
        const auto v = evaluate(u1, x);
        return std::pow(v[0] * v[0] + v[1] * v[1] + v[2] * v[2], 0.75);
      },
      600, 8);
  EXPECT_NEAR(mid, expected, 1e-5);
}

TEST(Quadrature, ConvergenceProbe) {
  const RealFrameField u = explicit_basis(3).unit_field(5);
  const auto f = [&](const std::array<double, 4>& x) {
    const auto v = evaluate(u, x);
    return std::pow(v[0] * v[0] + v[1] * v[1] + v[2] * v[2], 0.75);
  };
  // u6 vanishes on a circle, so |u6|^{3/2} is not smooth and convergence is algebraic.
  const auto t = convergence_probe(f, {{12, 16}, {24, 32}, {48, 64}}, 1e-4);
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0].difference, 0.0);
  EXPECT_LT(t.rows[2].difference, t.rows[1].difference);
  EXPECT_TRUE(t.converged);
}

TEST(Quadrature, SampledBasisMatchesPointwise) {
  const HopfGrid g(QuadratureSpec{4, 6});
  const auto& basis = unit_basis(3);
  const SampledBasis sb(g, basis);
  Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(8, -1.0, 1.0);
  const auto n = sb.squared_norms(c);
  RealFrameField F;
  for (int i = 0; i < 8; ++i) F += c[i] * basis[static_cast<std::size_t>(i)];
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto v = evaluate(F, g.points()[p]);
    EXPECT_NEAR(n[p], v[0] * v[0] + v[1] * v[1] + v[2] * v[2], 1e-12);
  }
}

TEST(FiniteDifference, FornbergMatchesClassicalStencils) {
  const auto w = fornberg_weights(0.0, {-1, 0, 1}, 2);
  EXPECT_NEAR(w[0], 1.0, 1e-14);
  EXPECT_NEAR(w[1], -2.0, 1e-14);
  EXPECT_NEAR(w[2], 1.0, 1e-14);
  const auto w1 = fornberg_weights(0.0, {-2, -1, 0, 1, 2}, 1);
  EXPECT_NEAR(w1[0], 1.0 / 12, 1e-14);
  EXPECT_NEAR(w1[1], -2.0 / 3, 1e-14);
  EXPECT_NEAR(w1[3], 2.0 / 3, 1e-14);
}

TEST(FiniteDifference, HighOrderDerivativesOfExp) {
  for (int k = 1; k <= 6; ++k) {
    const auto d = central_derivative([](double x) { return std::exp(x); }, k, 0.1, 8);
    EXPECT_NEAR(d.value, 1.0, k <= 3 ? 1e-8 : 1e-5) << k;
    EXPECT_EQ(d.points, 2 * central_half_width(k, 8) + 1);
  }
  EXPECT_GT(balanced_step(6, 8), balanced_step(1, 8));
}
