#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "layerfid/estimation/fit.hpp"

namespace layerfid {
namespace {

const std::vector<int> kDepths = {1, 4, 8, 16, 24, 32, 48, 64, 96, 128, 160, 200};

DecayCurve synthetic(double a, double alpha, double b, const std::vector<int>& depths = kDepths) {
  DecayCurve c;
  c.depths = depths;
  for (int l : depths) {
    c.mean.push_back(a * std::pow(alpha, l) + b);
    c.sem.push_back(0.0);
  }
  return c;
}

TEST(FitDecay, RecoversExactCurve) {
  const auto f = fit_decay(synthetic(0.75, 0.98, 0.25));
  EXPECT_TRUE(f.converged);
  EXPECT_FALSE(f.underdriven);
  EXPECT_NEAR(f.alpha, 0.98, 1e-6);
  EXPECT_NEAR(f.a, 0.75, 1e-5);
  EXPECT_NEAR(f.b, 0.25, 1e-5);
}

TEST(FitDecay, RecoversIdleQubitCurve) {
  auto c = synthetic(0.5, 0.995, 0.5);
  c.dimension = 2;
  EXPECT_NEAR(fit_decay(c).alpha, 0.995, 1e-6);
}

TEST(FitDecay, FastDecay) {
  EXPECT_NEAR(fit_decay(synthetic(0.7, 0.6, 0.26, {1, 2, 3, 4, 6, 8})).alpha, 0.6, 1e-6);
}

TEST(FitDecay, ConstantCurveIsPinned) {
  DecayCurve c;
  c.depths = {1, 2, 4, 8};
  c.mean = {1, 1, 1, 1};
  c.sem = {0, 0, 0, 0};
  const auto f = fit_decay(c);
  EXPECT_EQ(f.alpha, 1.0);
  EXPECT_TRUE(f.underdriven);
  EXPECT_GE(f.alpha_err, kUnderdrivenAlphaFloor);
}

TEST(FitDecay, UnderdrivenFlag) {
  const auto f = fit_decay(synthetic(0.75, 0.9999, 0.25, {1, 2, 4, 8, 16}));
  EXPECT_TRUE(f.underdriven);
  EXPECT_FALSE(f.warning.empty());
}

TEST(FitDecay, RejectsBadCurves) {
  DecayCurve c = synthetic(0.75, 0.98, 0.25, {1, 2, 4});
  EXPECT_THROW(fit_decay(c), std::invalid_argument);
  c = synthetic(0.75, 0.98, 0.25, {1, 2, 4, 8});
  c.mean[0] = 1.2;
  EXPECT_THROW(fit_decay(c), std::invalid_argument);
  c.mean.pop_back();
  EXPECT_THROW(fit_decay(c), std::invalid_argument);
}

TEST(FitDecay, NoisyCoverage) {
  // Gaussian noise per randomization; alpha inside 3 standard errors in at
  // least 95% of trials.
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise(0.0, 0.01);
  int covered = 0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    std::vector<std::vector<double>> samples;
    for (int l : kDepths) {
      std::vector<double> s;
      for (int r = 0; r < 6; ++r) s.push_back(std::clamp(0.75 * std::pow(0.98, l) + 0.25 + noise(rng), 0.0, 1.0));
      samples.push_back(s);
    }
    const auto f = fit_decay(make_curve(kDepths, samples, 4));
    if (std::abs(f.alpha - 0.98) <= 3.0 * f.alpha_err) ++covered;
  }
  EXPECT_GE(covered, trials * 95 / 100);
}

TEST(MakeCurve, MeanAndStandardError) {
  const auto c = make_curve({1, 2}, {{0.5, 0.7}, {0.4}}, 2);
  EXPECT_DOUBLE_EQ(c.mean[0], 0.6);
  EXPECT_NEAR(c.sem[0], 0.1, 1e-12);
  EXPECT_DOUBLE_EQ(c.sem[1], 0.0);
  EXPECT_THROW(make_curve({1}, {{0.5}, {0.4}}, 2), std::invalid_argument);
}

TEST(FitPureExponential, Recovers) {
  const std::vector<int> l = {2, 4, 8, 12, 16, 24};
  std::vector<double> s;
  for (int x : l) s.push_back(0.97 * std::pow(0.93, x));
  const std::vector<double> e(l.size(), 0.0);
  const auto f = fit_pure_exponential(l, s, e);
  EXPECT_NEAR(f.alpha, 0.93, 1e-7);
  EXPECT_NEAR(f.a, 0.97, 1e-6);
  EXPECT_EQ(f.b, 0.0);
}

}  // namespace
}  // namespace layerfid
