#include <gtest/gtest.h>

#include "beltrami/eigen_atlas.hpp"
#include "oracles/oracles.hpp"

using namespace beltrami;

class ExplicitBasis : public ::testing::TestWithParam<int> {};

TEST_P(ExplicitBasis, ExactEigenfieldsWithDiagonalGram) {
  const int mu = GetParam();
  const AtlasEntry e = explicit_basis(mu);
  const int m = std::abs(mu);
  EXPECT_EQ(static_cast<int>(e.dimension()), m * m - 1);
  for (std::size_t i = 0; i < e.dimension(); ++i) {
    EXPECT_EQ(curl(e.fields[i]), Rational(mu) * e.fields[i]) << e.names[i];
    EXPECT_EQ(norm_sq(e.fields[i]), e.squared_norms[i]);
    // Tabulated normalizers make the fields unit length.
    EXPECT_EQ(e.normalizer_squares[i] * e.squared_norms[i], ExactScalar(1)) << e.names[i];
    for (std::size_t j = 0; j < i; ++j) EXPECT_TRUE(inner(e.fields[i], e.fields[j]).is_zero()) << i << "," << j;
  }
}

INSTANTIATE_TEST_SUITE_P(Atlas, ExplicitBasis, ::testing::Values(2, -2, 3, -3, 4, -4, 5, -5));

TEST(EigenAtlas, UnsupportedEigenvalueThrows) {
  EXPECT_THROW(explicit_basis(6), UnsupportedEigenvalue);
  EXPECT_THROW(explicit_basis(1), UnsupportedEigenvalue);
}

TEST(EigenAtlas, TabulatedW17CoefficientIsNotOrthogonal) {
  // w17's bracket carries sqrt(30) pi / d times the w14 bracket. Orthogonality to w14 fixes
  // d = 48; the tabulated 38 leaves a component along w14.
  const FrameField& w14 = explicit_field("w14");
  const FrameField& w17 = explicit_field("w17");
  EXPECT_TRUE(inner(w17, w14).is_zero());
  // Difference between the two readings, up to the common positive scaling of w17.
  const Rational shift = Rational(1, 38) - Rational(1, 48);
  const FrameField tabulated = w17 + shift * w14;
  EXPECT_FALSE(inner(tabulated, w14).is_zero());
  EXPECT_EQ(curl(tabulated), Rational(5) * tabulated);  // still an eigenfield, just not orthogonal
}

TEST(EigenAtlas, SolverMultiplicitiesAndIdentity) {
  const SolverResult r = eigenspace_solve(3);
  EXPECT_TRUE(r.identity_resolved);
  std::map<int, int> dims;
  for (const auto& e : r.entries) dims[e.eigenvalue] = static_cast<int>(e.dimension());
  for (int m = 2; m <= 5; ++m) {
    EXPECT_EQ(dims[m], m * m - 1) << m;
    EXPECT_EQ(dims[-m], m * m - 1) << -m;
  }
}

TEST(EigenAtlas, SolverBasisOfSixIsExact) {
  const AtlasEntry& e = atlas_entry(6);
  EXPECT_EQ(e.label, Provenance::solver);
  EXPECT_EQ(e.dimension(), 35u);
  for (const auto& f : e.fields) EXPECT_EQ(curl(f), Rational(6) * f);
}

TEST(EigenAtlas, DecompositionResolvesTheIdentity) {
  const FrameField F = parse_frame_field("x1*x2 + x3", "x4^2", "x1 - x2*x3");
  const EigenDecomposition d = decompose(F);
  EXPECT_TRUE(d.residual.is_zero());
  FrameField sum;
  for (const auto& [mu, part] : d.components) {
    sum += part;
    if (mu != 0) {
      EXPECT_EQ(curl(part), Rational(mu) * part);
    }
  }
  EXPECT_EQ(sum, F);
  EXPECT_EQ(project_eigen(F, 2) + project_eigen(F, -2) + project_eigen(F, 3) + project_eigen(F, -3) +
                project_eigen(F, 4) + project_eigen(F, -4) + project_eigen(F, 0),
            F);
}

TEST(EigenAtlas, HelicityAndRayleigh) {
  EXPECT_EQ(helicity(frame_vector(0)), ExactScalar(Rational(1), 2));
  EXPECT_EQ(helicity(explicit_field("u1")), norm_sq(explicit_field("u1")) * ExactScalar(Rational(1, 3)));
  const FrameField mixed = explicit_field("B1") + explicit_field("Bhat1");
  EXPECT_TRUE(helicity(mixed).is_zero());
  EXPECT_THROW(helicity(to_real(frame_vector(0)) + to_real(grad(SphereScalar(parse_poly("x1"))))),
               HelicityUndefined);
  const RayleighValue r = rayleigh_quotient(explicit_field("v3"));
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.exact_value, ExactScalar(4));
  EXPECT_EQ(curl(curl_inverse(explicit_field("w2"))), explicit_field("w2"));
}

TEST(EigenAtlas, UnitFieldsAreOrthonormalOnQuadratureOracle) {
  const AtlasEntry e = explicit_basis(3);
  const RealFrameField a = e.unit_field(4), b = e.unit_field(5);
  const auto ip = [&](const RealFrameField& x, const RealFrameField& y) {
    return oracles::midpoint_s3(
        [&](const std::array<double, 4>& p) {
          const auto u = evaluate(x, p), v = evaluate(y, p);
          return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        },
        400, 12);
  };
  EXPECT_NEAR(ip(a, a), 1.0, 2e-5);
  EXPECT_NEAR(ip(a, b), 0.0, 2e-5);
}

TEST(EigenAtlas, ExportJsonNamesEntries) {
  const std::string j = export_atlas_json({explicit_basis(2)});
  EXPECT_NE(j.find("\"B1\""), std::string::npos);
  EXPECT_NE(j.find("explicit"), std::string::npos);
}
