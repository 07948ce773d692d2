#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "holder_pg/stepsize.hpp"

using namespace holder_pg;

namespace {

const std::vector<ComponentMeta> kExample1 = {ComponentMeta(1.0, 2.0), ComponentMeta(0.5, 2.0 * std::numbers::sqrt2)};

}  // namespace

TEST(AlphaHat, TakesMinimum) {
  EXPECT_EQ(alpha_hat(std::vector<ComponentMeta>{{1.0, 2.0}}), 1.0);
  EXPECT_EQ(alpha_hat(std::vector<ComponentMeta>{{1.0, 2.0}, {0.5, 2.828}}), 0.5);
  EXPECT_EQ(alpha_hat(std::vector<ComponentMeta>{{0.3, 1.0}, {0.7, 5.0}}), 0.3);
  EXPECT_THROW((void)alpha_hat(std::vector<ComponentMeta>{}), std::invalid_argument);
}

TEST(ConstantM, LipschitzComponentGivesL) {
  for (double mu : {0.1, 1.0, 7.0}) EXPECT_EQ(constant_M(std::vector<ComponentMeta>{{1.0, 2.0}}, mu), 2.0);
}

TEST(ConstantM, Example1) { EXPECT_NEAR(constant_M(kExample1, 1.0), 3.4943218589451955, 1e-13); }

TEST(ConstantM, HalfExponentUnitConstant) {
  EXPECT_NEAR(constant_M(std::vector<ComponentMeta>{{0.5, 1.0}}, 2.0), 0.69336127435063470, 1e-14);
}

TEST(ConstantM, RejectsNonPositiveMu) { EXPECT_THROW((void)constant_M(kExample1, 0.0), std::invalid_argument); }

TEST(RhoRequired, LipschitzComponentGivesL) {
  EXPECT_EQ(rho_required(std::vector<ComponentMeta>{{1.0, 3.0}}, 0.1), 3.0);
}

TEST(RhoRequired, HalfExponent) {
  EXPECT_NEAR(rho_required(std::vector<ComponentMeta>{{0.5, 2.0 * std::numbers::sqrt2}}, 0.05), 7.5282882310482279,
              1e-12);
}

TEST(RhoRequired, DecreasesAsDeltaGrows) {
  gen::Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const std::vector<ComponentMeta> c = {{rng.uniform(0.05, 0.99), rng.uniform(0.1, 10.0)}};
    const double d = rng.uniform(1e-4, 1.0);
    EXPECT_GE(rho_required(c, d), rho_required(c, 2.0 * d));
  }
}

TEST(PgdmStepsize, ExponentZeroAtAlphaOne) {
  for (double eps : {0.5, 1e-2, 1e-6}) EXPECT_DOUBLE_EQ(pgdm_stepsize(eps, 2.0, 1.0), 0.5);
}

TEST(PgdmStepsize, Example1) {
  EXPECT_NEAR(pgdm_stepsize(1e-2, constant_M(kExample1, 1.0), 0.5), 0.013283232114782638, 1e-15);
  EXPECT_NEAR(pgdm_stepsize(1e-2, 3.49432, 0.5), 0.013283239181336511, 1e-15);
}

TEST(PgdmStepsize, RejectsBadEpsilon) {
  EXPECT_THROW((void)pgdm_stepsize(0.0, 1.0, 0.5), std::invalid_argument);
  EXPECT_THROW((void)pgdm_stepsize(1.0, 1.0, 0.5), std::invalid_argument);
}

TEST(UfgmFixedNu, Example1) {
  EXPECT_NEAR(ufgm_fixed_nu(1e-2, constant_M(kExample1, 1.0), 1.0, 0.5), 0.065129277117433797, 1e-15);
}

TEST(UfgmFixedNu, ThrowsWhenAboveOne) {
  EXPECT_THROW((void)ufgm_fixed_nu(1e-2, 1.0, 100.0, 1.0), ParameterInconsistency);
  EXPECT_DOUBLE_EQ(ufgm_fixed_nu(1e-2, 1.0, 1.0, 1.0), 1.0);
}

TEST(UfgmOmega, Example1) { EXPECT_NEAR(ufgm_omega(3.4943218589451955, 1.0, 0.5), 0.27111794279942465, 1e-14); }

TEST(PredictIterations, PgdmExample1) {
  const double M = constant_M(kExample1, 1.0);
  const auto p = predict_iterations(Algorithm::Pgdm, 1e-2, M, 1.0, 0.5, 1.0);
  EXPECT_NEAR(p.predicted_iterations, 1070.8794525328617, 1e-9);
  EXPECT_NEAR(predict_iterations(Algorithm::Pgdm, 1e-1, M, 1.0, 0.5, 1.0).predicted_iterations, 131.12438308841484,
              1e-10);
  EXPECT_NEAR(predict_iterations(Algorithm::Pgdm, 1e-3, M, 1.0, 0.5, 1.0).predicted_iterations, 7116.1750216966832,
              1e-8);
  EXPECT_NEAR(p.exponent, 2.0 / 3.0, 1e-15);
  EXPECT_FALSE(p.omega.has_value());
}

TEST(PredictIterations, PgdmAlphaOneIsPureLog) {
  const auto p = predict_iterations(Algorithm::Pgdm, 1e-2, 2.0, 1.0, 1.0, 1.0);
  EXPECT_EQ(p.exponent, 0.0);
  EXPECT_NEAR(p.predicted_iterations, 2.0 * 2.0 * std::log(std::sqrt(4.0) / 1e-2), 1e-12);
}

TEST(PredictIterations, UfgmExample1) {
  const double M = constant_M(kExample1, 1.0);
  const auto p = predict_iterations(Algorithm::Ufgm, 1e-2, M, 1.0, 0.5, 1.0, 7.0 / 6.0);
  ASSERT_TRUE(p.omega.has_value());
  EXPECT_NEAR(*p.omega, 0.27111794279942465, 1e-14);
  EXPECT_NEAR(p.predicted_iterations, 516.99519539874438, 1e-9);
  EXPECT_NEAR(p.exponent, 0.4, 1e-15);
  EXPECT_THROW((void)predict_iterations(Algorithm::Ufgm, 1e-2, M, 1.0, 0.5, 1.0), std::invalid_argument);
}

TEST(PredictIterations, UpgmSharesThePgdmBound) {
  const auto a = predict_iterations(Algorithm::Pgdm, 1e-2, 3.0, 1.0, 0.5, 2.0);
  const auto b = predict_iterations(Algorithm::Upgm, 1e-2, 3.0, 1.0, 0.5, 2.0);
  EXPECT_EQ(a.predicted_iterations, b.predicted_iterations);
}

TEST(AlgorithmNames, RoundTrip) {
  for (auto a : {Algorithm::Pgdm, Algorithm::Upgm, Algorithm::Ufgm, Algorithm::UfgmFixed}) {
    EXPECT_EQ(algorithm_from_string(to_string(a)), a);
  }
  EXPECT_THROW((void)algorithm_from_string("newton"), std::invalid_argument);
}
