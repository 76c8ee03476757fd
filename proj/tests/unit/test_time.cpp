#include <cmath>
#include <vector>

#include "gtest/gtest.h"

#include "bpdg/time.hpp"

namespace {

using namespace bpdg;

// Stability polynomial R(z) of a Shu-Osher tableau applied to y' = z y.
std::vector<double> stability_polynomial(const SspTableau &t) {
  std::vector<std::vector<double>> u{{1.0}};
  for (int i = 0; i < t.stages(); ++i) {
    std::vector<double> next(i + 2, 0.0);
    for (int l = 0; l <= i; ++l)
      for (std::size_t d = 0; d < u[l].size(); ++d) {
        next[d] += t.alpha[i][l] * u[l][d];
        next[d + 1] += t.beta[i][l] * u[l][d];
      }
    u.push_back(next);
  }
  return u.back();
}

TEST(Time, StagesAreConvexCombinations) {
  for (auto s : {SspScheme::kSsprk3, SspScheme::kSsprk4}) {
    const auto &t = ssp_tableau(s);
    for (int i = 0; i < t.stages(); ++i) {
      double sum = 0.0;
      for (std::size_t l = 0; l < t.alpha[i].size(); ++l) {
        EXPECT_GE(t.alpha[i][l], 0.0);
        EXPECT_GE(t.beta[i][l], 0.0);
        if (t.beta[i][l] > 0.0) EXPECT_GT(t.alpha[i][l], 0.0);
        sum += t.alpha[i][l];
      }
      EXPECT_NEAR(sum, 1.0, 1e-14);
    }
  }
}

TEST(Time, SspCoefficients) {
  EXPECT_DOUBLE_EQ(ssp_coefficient(SspScheme::kSsprk3), 1.0);
  EXPECT_NEAR(ssp_coefficient(SspScheme::kSsprk4), 1.508, 5e-4);
}

TEST(Time, OrderConditionsForLinearProblems) {
  const double taylor[] = {1.0, 1.0, 0.5, 1.0 / 6, 1.0 / 24};
  const auto r3 = stability_polynomial(ssp_tableau(SspScheme::kSsprk3));
  ASSERT_EQ(r3.size(), 4u);
  for (int d = 0; d <= 3; ++d) EXPECT_NEAR(r3[d], taylor[d], 1e-15);
  const auto r4 = stability_polynomial(ssp_tableau(SspScheme::kSsprk4));
  ASSERT_EQ(r4.size(), 6u);
  for (int d = 0; d <= 4; ++d) EXPECT_NEAR(r4[d], taylor[d], 1e-13);
  EXPECT_GT(std::fabs(r4[5] - 1.0 / 120), 1e-6);
}

TEST(Time, StepControllerPolicies) {
  const double h = 0.02;
  const std::array<double, 2> a{1.0, 1.0}, d{h, h};
  StepControl ctl;
  EXPECT_NEAR(step_controller(ctl, 2, SspScheme::kSsprk3, a, d), h / 8, 1e-17);
  ctl.policy = DtPolicy::kClassicBP;
  EXPECT_NEAR(step_controller(ctl, 2, SspScheme::kSsprk3, a, d), h / 12, 1e-17);
  ctl.policy = DtPolicy::kJiangLiuBP;
  EXPECT_NEAR(step_controller(ctl, 3, SspScheme::kSsprk3, a, d), h / 12, 1e-17);
  ctl.policy = DtPolicy::kLinearStability;
  EXPECT_NEAR(step_controller(ctl, 2, SspScheme::kSsprk3, a, d), h / 10, 1e-17);
  ctl.policy = DtPolicy::kOptimalBP;
  ctl.safety = 0.5;
  EXPECT_NEAR(step_controller(ctl, 2, SspScheme::kSsprk4, a, d),
              0.5 * ssp_coefficient(SspScheme::kSsprk4) * h / 8, 1e-17);
  ctl.fallback_dt = 0.125;
  EXPECT_EQ(step_controller(ctl, 2, SspScheme::kSsprk3, {0.0, 0.0}, d), 0.125);
  // One silent axis: only the moving axis constrains the step.
  ctl.safety = 1.0;
  const double dt = step_controller(ctl, 2, SspScheme::kSsprk3, {1.0, 0.0}, d);
  EXPECT_NEAR(dt, h / 6, 1e-12);
}

}  // namespace
