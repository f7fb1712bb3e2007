#include <cmath>

#include <gtest/gtest.h>

#include "beltrami/annulus.hpp"

using namespace beltrami;

TEST(Annulus, MetricHasUnitDeterminantAndFixedVolume) {
  for (int n = 1; n <= 10; ++n) {
    const AnnulusMetric g = annulus_metric(n);
    EXPECT_EQ(g.determinant, Rational(1));
    EXPECT_EQ(g.volume, ExactScalar(Rational(8), 3));
  }
  EXPECT_THROW(annulus_metric(0), std::invalid_argument);
}

TEST(Annulus, FirstEigenvalueIsOneOverN) {
  for (int n = 1; n <= 10; ++n) {
    Rational e(1, n);
    e.canonicalize();
    EXPECT_EQ(annulus_mu1(n), e) << n;
    for (const auto& m : spectrum_candidates(n, 3.0)) {
      if (m.m1 * m.m1 + m.m2 * m.m2 > 0) {
        EXPECT_GE(std::abs(m.lambda), 1.0);
      }
    }
  }
}

TEST(Annulus, SpecExamples) {
  EXPECT_TRUE(spectrum_candidates(2, 0.4).empty());
  const auto modes = spectrum_candidates(3, 1.0);
  ASSERT_EQ(modes.size(), 6u);
  const int expected_m[] = {2, 2, 4, 4, 6, 6};
  for (std::size_t i = 0; i < modes.size(); ++i) {
    EXPECT_EQ(modes[i].m1, 0);
    EXPECT_EQ(modes[i].m2, 0);
    EXPECT_EQ(modes[i].m, expected_m[i]);
    EXPECT_EQ(modes[i].branch, i % 2 == 0 ? 1 : -1);
    EXPECT_EQ(modes[i].status, "confirmed");
    EXPECT_NEAR(std::abs(modes[i].lambda), expected_m[i] / 6.0, 1e-15);
  }
  EXPECT_THROW(spectrum_candidates(3, 0.0), std::invalid_argument);
}

TEST(Annulus, ExplicitEigenfields) {
  for (int n = 1; n <= 5; ++n) {
    const FirstEigenfieldCheck c = first_eigenfields(n);
    EXPECT_TRUE(c.all()) << n;
    Rational e(1, n);
    e.canonicalize();
    EXPECT_EQ(c.lambda, e);
  }
  // A field with the wrong ratio of components is not an eigenfield.
  AnnulusField v;
  v.v = {TrigInT{1, 0}, TrigInT{1, 0}, TrigInT{0, 0}};
  const AnnulusField cv = annulus_curl(v, 2);
  EXPECT_FALSE(cv.v[0].a == v.v[0].a * Rational(1, 2) && cv.v[0].b == v.v[0].b * Rational(1, 2) &&
               cv.v[1].a == v.v[1].a * Rational(1, 2) && cv.v[1].b == v.v[1].b * Rational(1, 2));
}

TEST(Annulus, ChainDecreasesToZero) {
  const auto chain = mu1_chain(10);
  ASSERT_EQ(chain.size(), 10u);
  for (std::size_t i = 1; i < chain.size(); ++i) EXPECT_LT(chain[i].normalized, chain[i - 1].normalized);
  EXPECT_NEAR(chain.back().normalized, 0.1 * 2 * M_PI, 1e-13);
}

TEST(Annulus, BoundConstants) {
  const BoundConstants b = bound_constants();
  EXPECT_TRUE(b.improved_exceeds_previous);
  EXPECT_NEAR(b.improved.value, 5.405135380126980, 1e-12);
  EXPECT_NEAR(b.previous.value, 1.611991954016470, 1e-12);
  EXPECT_NEAR(b.sphere_class.value, 1.720508027656199, 1e-12);
  EXPECT_EQ(b.improved.cube, ExactScalar(Rational(16), 2));
}
