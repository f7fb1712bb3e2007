#include <gtest/gtest.h>

#include "beltrami/eigen_atlas.hpp"
#include "beltrami/frame_field.hpp"
#include "oracles/oracles.hpp"

using namespace beltrami;

TEST(FrameField, HopfFieldsAreCurlEigenfields) {
  const auto B = hopf_frame();
  for (int i = 0; i < 3; ++i) EXPECT_EQ(curl(B[i]), Rational(2) * B[i]);
  EXPECT_EQ(norm_sq(B[0]), ExactScalar(Rational(2), 2));
}

TEST(FrameField, DivCurlAndCurlGradVanish) {
  const FrameField F = parse_frame_field("x1*x3 - x2^2", "x4 + x1*x2*x3", "x2*x4^2 - 1");
  EXPECT_TRUE(divergence(curl(F)).is_zero());
  const SphereScalar s(parse_poly("x1^3*x2 - x3*x4 + x2^2"));
  EXPECT_TRUE(curl(grad(s)).is_zero());
}

TEST(FrameField, CurlIsSymmetricAgainstQuadratureOracle) {
  const FrameField X = parse_frame_field("x1*x3", "x2^2 - x4", "x1");
  const FrameField Y = parse_frame_field("x4*x2", "x3", "x1^2*x2");
  EXPECT_EQ(inner(curl(X), Y), inner(X, curl(Y)));
  // inner() against an independent midpoint rule on Cartesian components.
  const auto f = [&](const std::array<double, 4>& x) {
    const auto a = evaluate_cartesian(X, x).vector, b = evaluate_cartesian(Y, x).vector;
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
  };
  EXPECT_NEAR(oracles::midpoint_s3(f, 400, 16), inner(X, Y).to_double(), 1e-4);
}

TEST(FrameField, CartesianComponentsMatchFrameOracle) {
  const FrameField F = parse_frame_field("x1", "x2*x3", "1");
  std::mt19937_64 rng(2);
  for (int n = 0; n < 5; ++n) {
    const auto x = oracles::uniform_s3(rng);
    const auto B = oracles::hopf_frame(x);
    const auto s = evaluate_cartesian(F, x);
    const std::array<double, 3> c{x[0], x[1] * x[2], 1.0};
    for (int r = 0; r < 4; ++r)
      EXPECT_NEAR(s.vector[r], c[0] * B[0][r] + c[1] * B[1][r] + c[2] * B[2][r], 1e-14);
  }
  EXPECT_EQ(from_cartesian(to_cartesian(F)), F);
}

TEST(FrameField, AntipodalParity) {
  EXPECT_EQ(antipodal_parity(frame_vector(0)), AntipodalParity::descends_to_RP3);
  EXPECT_EQ(antipodal_parity(parse_frame_field("x1", "0", "0")), AntipodalParity::anti_invariant);
  EXPECT_EQ(antipodal_parity(parse_frame_field("x1 + 1", "0", "0")), AntipodalParity::mixed);
}

TEST(FrameField, PushforwardByIsometry) {
  // The reflection maps Hopf fields to anti-Hopf fields up to sign, and preserves norms.
  const FrameField F = parse_frame_field("x1*x2", "x3", "1");
  const FrameField G = isometry_pushforward(F, reflection_T());
  EXPECT_EQ(norm_sq(G), norm_sq(F));
  EXPECT_EQ(curl(isometry_pushforward(explicit_field("u1"), reflection_T())),
            Rational(-3) * isometry_pushforward(explicit_field("u1"), reflection_T()));
  Matrix4Q bad{};
  bad[0][0] = 2;
  bad[1][1] = bad[2][2] = bad[3][3] = 1;
  EXPECT_THROW(isometry_pushforward(F, bad), std::invalid_argument);
}
