#include <gtest/gtest.h>

#include "levyheat/asymptotics.hpp"

using namespace levyheat;

namespace {

RatioSeries synthetic(double limit, const std::function<double(double)>& r) {
  RatioSeries s;
  s.kind = "kernel";
  s.limit = limit;
  for (double x : {10.0, 20.0, 40.0, 80.0, 160.0}) s.points.push_back({x, r(x), 1e-8, false, ""});
  return s;
}

}  // namespace

TEST(Diagnose, ConvergingSeries) {
  const auto v = diagnose(synthetic(2.0, [](double s) { return 2.0 * (1.0 + 1.0 / s); }), 0.01);
  EXPECT_TRUE(v.pass);
  EXPECT_NEAR(v.slope, -1.0, 1e-9);
}

TEST(Diagnose, WrongLimit) {
  const auto v = diagnose(synthetic(1.0, [](double) { return 1.1; }), 0.05);
  EXPECT_FALSE(v.pass);
}

TEST(Diagnose, GrowingDeviationFailsTrend) {
  const auto v = diagnose(synthetic(1.0, [](double s) { return 1.0 + 1e-4 * s; }), 0.05);
  EXPECT_FALSE(v.trend);
  EXPECT_FALSE(v.pass);
}

TEST(Diagnose, NoLimitUsesSuccessiveChanges) {
  const auto v = diagnose(synthetic(std::nan(""), [](double s) { return std::log(s); }), 0.05);
  EXPECT_FALSE(v.pass);
  const auto w = diagnose(synthetic(std::nan(""), [](double s) { return 3.0 + 1e-3 / s; }), 0.05);
  EXPECT_TRUE(w.pass);
}

TEST(Diagnose, TooFewPoints) {
  RatioSeries s = synthetic(1.0, [](double) { return 1.0; });
  s.points[0].refused = s.points[1].refused = true;
  EXPECT_THROW(diagnose(s, 0.05), NumericalError);
}

TEST(Limits, PredictedLimitRelativistic) {
  const auto mdl = make_relativistic(1, 1.0, 1.0);
  const double th[1] = {1.0}, y[1] = {0.5};
  EXPECT_NEAR(predicted_limit(mdl, 0.7, th, y), std::exp(0.7 + 0.5), 1e-6);
  const auto st = make_stable(1, 1.5, SphericalDensity::constant(1, 1.0));
  EXPECT_DOUBLE_EQ(predicted_limit(st, 0.7, th, y), 1.0);
}

TEST(Limits, PoissonTerms) {
  EXPECT_EQ(poisson_terms(0.0), 1u);
  EXPECT_GE(poisson_terms(1.0), 10u);
  EXPECT_EQ(poisson_terms(50.0, 1e-9, 16), 16u);
}

TEST(Ratios, CauchyKernelRatio) {
  const auto mdl = make_stable(1, 1.0, SphericalDensity::constant(1, 1.0 / kPi));
  const double th[1] = {-1.0}, y[1] = {0.0};
  const auto s = kernel_ratio_series(mdl, 1.0, th, y, {10, 40});
  for (const auto& p : s.points) EXPECT_NEAR(p.ratio, p.s * p.s / (1 + p.s * p.s), 1e-5);
}

TEST(Ratios, ConvolutionLimitStable) {
  const auto mdl = make_stable(1, 1.0, SphericalDensity::constant(1, 1.0));
  const double th[1] = {1.0}, y[1] = {0.0};
  const auto s = convolution_ratio_series(mdl, 1.0, 3, th, y, {100, 1000});
  // n |nu_1|^{n-1} = 3 * 2^2
  EXPECT_NEAR(s.limit, 12.0, 1e-9);
  EXPECT_NEAR(s.points.back().ratio / s.limit, 1.0, 0.02);
}

TEST(Ratios, ProbeRadii) {
  const auto mdl = make_relativistic(1, 1.0, 1.0);
  const Vec r = default_probe_radii(mdl, 1.0);
  ASSERT_EQ(r.size(), 5u);
  EXPECT_LE(r.back(), 60.0 + 1e-9);
  EXPECT_LT(r.front(), r.back());
}

TEST(Ratios, SeriesJson) {
  auto s = synthetic(std::nan(""), [](double x) { return x; });
  const auto j = s.to_json();
  EXPECT_TRUE(j["limit"].is_null());
  EXPECT_EQ(j["points"].size(), 5u);
}
