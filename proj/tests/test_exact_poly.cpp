#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "beltrami/exact_poly.hpp"
#include "oracles/oracles.hpp"

using namespace beltrami;

namespace {

// 2 prod Gamma((a_i+1)/2) / Gamma((|a|+4)/2), zero when some a_i is odd.
double gamma_moment(const Exponents& a) {
  for (int e : a)
    if (e % 2) return 0.0;
  double num = 2.0;
  int total = 0;
  for (int e : a) {
    num *= std::tgamma((e + 1) / 2.0);
    total += e;
  }
  return num / std::tgamma((total + 4) / 2.0);
}

}  // namespace

TEST(ExactScalar, ArithmeticAndFormatting) {
  ExactScalar a(Rational(1, 2), 2), b(Rational(3), -1);
  const ExactScalar s = a + b;
  EXPECT_EQ(s.coefficient(2), Rational(1, 2));
  EXPECT_EQ(s.coefficient(-1), Rational(3));
  EXPECT_FALSE(s.is_monomial());
  EXPECT_EQ((a * b).to_string(), "3/2 * pi^1");
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ(ExactScalar(0).to_string(), "0");
  EXPECT_NEAR(ExactScalar::pi(2).to_double(), oracles::kPi * oracles::kPi, 1e-14);
  EXPECT_EQ(a.divided_by(ExactScalar(Rational(1, 4), 1)), ExactScalar(Rational(2), 1));
  EXPECT_THROW(a.divided_by(s), std::domain_error);
}

TEST(ExactPoly, MomentsMatchGammaFormula) {
  for (int a1 = 0; a1 <= 6; ++a1)
    for (int a2 = 0; a2 <= 4; ++a2)
      for (int a3 = 0; a3 <= 2; ++a3)
        for (int a4 = 0; a4 <= 2; ++a4) {
          const Exponents a{a1, a2, a3, a4};
          EXPECT_NEAR(integrate_monomial(a).to_double(), gamma_moment(a), 1e-13) << a1 << a2 << a3 << a4;
        }
}

TEST(ExactPoly, MomentsMatchMonteCarlo) {
  // int x1^2 x2^2 = pi^2 / 12
  const Exponents a{2, 2, 0, 0};
  EXPECT_EQ(integrate_monomial(a), ExactScalar(Rational(1, 12), 2));
  const auto mc = oracles::monte_carlo_s3([](const auto& x) { return x[0] * x[0] * x[1] * x[1]; }, 400000, 7);
  EXPECT_NEAR(mc.mean, oracles::kPi * oracles::kPi / 12, 5 * mc.stderr_);
  const auto mc4 = oracles::monte_carlo_s3([](const auto& x) { return std::pow(x[2], 4); }, 400000, 8);
  EXPECT_NEAR(mc4.mean, integrate_monomial({0, 0, 4, 0}).to_double(), 5 * mc4.stderr_);
}

TEST(ExactPoly, ParseAndPrintRoundTrip) {
  const RationalPoly p = parse_poly("3*x1^2 - x2*x4 + 1/2");
  EXPECT_EQ(p.coefficient({2, 0, 0, 0}), Rational(3));
  EXPECT_EQ(p.coefficient({0, 1, 0, 1}), Rational(-1));
  EXPECT_EQ(p.coefficient({0, 0, 0, 0}), Rational(1, 2));
  EXPECT_EQ(parse_poly(to_string(p)), p);
  EXPECT_EQ(parse_poly("x*y - z^2 + w"), parse_poly("x1*x2 - x3^2 + x4"));
}

TEST(ExactPoly, HomogenizeAgreesOnSphere) {
  const RationalPoly p = parse_poly("x1^2 - 2*x3 + 1");
  EXPECT_THROW(homogenize(p, 4), std::invalid_argument);
  const RationalPoly q = parse_poly("x1^2 + 1");
  const RationalPoly h = homogenize(q, 4);
  EXPECT_EQ(h.degree(), 4);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto x = oracles::uniform_s3(rng);
    EXPECT_NEAR(h.evaluate(x), q.evaluate(x), 1e-13);
  }
  EXPECT_EQ(integrate_poly(h), integrate_poly(q));
}

TEST(SphereScalar, NormalFormIsAFunctionOnTheSphere) {
  const SphereScalar a(parse_poly("x4^2"));
  const SphereScalar b(parse_poly("1 - x1^2 - x2^2 - x3^2"));
  EXPECT_EQ(a, b);
  std::mt19937_64 rng(5);
  const SphereScalar s(parse_poly("x4^3*x1 + x2^2*x4^2 - x3"));
  for (int i = 0; i < 10; ++i) {
    const auto x = oracles::uniform_s3(rng);
    EXPECT_NEAR(s.evaluate(x), x[3] * x[3] * x[3] * x[0] + x[1] * x[1] * x[3] * x[3] - x[2], 1e-13);
  }
}

TEST(SphereScalar, LaplacianOfDegreeKHarmonic) {
  // x1 x2 is harmonic of degree 2, eigenvalue k(k+2) = 8.
  const SphereScalar h(parse_poly("x1*x2"));
  EXPECT_EQ(laplace_beltrami(h), h * Rational(8));
  const SphereScalar c(parse_poly("x1"));
  EXPECT_EQ(laplace_beltrami(c), c * Rational(3));
}

TEST(SphereScalar, DirectionalDerivativeMatchesFiniteDifference) {
  Matrix4Q L{};
  L[0][1] = -1;
  L[1][0] = 1;
  L[2][3] = Rational(-1, 2);
  L[3][2] = Rational(1, 2);
  const SphereScalar s(parse_poly("x1^2*x3 + x2*x4 - 3*x1*x2*x3*x4"));
  const SphereScalar ds = directional_derivative(s, L);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 5; ++i) {
    const auto x = oracles::uniform_s3(rng);
    std::array<double, 4> v{};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) v[r] += L[r][c].get_d() * x[c];
    auto f = [&](double t) {
      std::array<double, 4> y{};
      for (int r = 0; r < 4; ++r) y[r] = x[r] + t * v[r];
      return s.poly().evaluate(y);
    };
    EXPECT_NEAR(ds.evaluate(x), oracles::richardson_derivative(f, 1, 1e-3), 1e-9);
  }
  Matrix4Q bad{};
  bad[0][1] = 1;
  bad[1][0] = 1;
  EXPECT_THROW(directional_derivative(s, bad), std::invalid_argument);
}
