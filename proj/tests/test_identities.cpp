#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "beltrami/functionals.hpp"
#include "beltrami/identities.hpp"
#include "oracles/oracles.hpp"

using namespace beltrami;

TEST(Identities, EveryRowPasses) {
  const auto rows = verify_identities();
  EXPECT_EQ(rows.size(), 17u);
  std::set<std::string> ids;
  for (const auto& r : rows) {
    EXPECT_TRUE(r.pass) << r.id << " expected " << r.expected << " computed " << r.computed;
    EXPECT_FALSE(r.anchor.empty());
    ids.insert(r.id);
  }
  EXPECT_EQ(ids.size(), rows.size());
  EXPECT_TRUE(ids.count("higher-modes-lower-bound"));
}

TEST(Identities, SharpConstantIsThreeFifths) { EXPECT_NEAR(sharp_hopf_component_value(), 0.6, 1e-12); }

TEST(Identities, Z2MomentsAgainstMonteCarlo) {
  const double a5 = 0.8, a8 = -0.5;
  const auto& u = unit_basis(3);
  const RealFrameField Z2 = a5 * u[4] + a8 * u[7];
  const double n2 = a5 * a5 + a8 * a8;
  const double pi2 = oracles::kPi * oracles::kPi;
  const auto b1z = oracles::monte_carlo_s3(
      [&](const auto& x) {
        const double c = evaluate(Z2, x)[0];
        return c * c;
      },
      300000, 17);
  EXPECT_NEAR(b1z.mean, 2.0 / 3 * n2, 5 * b1z.stderr_);
  const auto quartic = oracles::monte_carlo_s3(
      [&](const auto& x) {
        const auto v = evaluate(Z2, x);
        const double s = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        return s * s;
      },
      300000, 18);
  EXPECT_NEAR(quartic.mean, 2.0 / (3 * pi2) * n2 * n2, 5 * quartic.stderr_);
  // Helicity is exact arithmetic; the ratio to the norm is the eigenvalue reciprocal.
  EXPECT_NEAR(helicity(Z2), n2 / 3, 1e-12);
}
