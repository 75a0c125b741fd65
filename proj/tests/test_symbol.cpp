#include <gtest/gtest.h>

#include "levyheat/symbol.hpp"

using namespace levyheat;

TEST(Symbol, CauchyIsAbsXi) {
  const auto mdl = make_stable(1, 1.0, SphericalDensity::constant(1, 1.0 / kPi));
  for (double xi : {0.01, 0.5, 3.0, 40.0}) {
    const double x[1] = {xi};
    const auto v = phi(mdl, x);
    EXPECT_NEAR(v.re, xi, 1e-9 * std::max(1.0, xi));
    EXPECT_NEAR(v.im, 0.0, 1e-9 * std::max(1.0, xi));
  }
}

// Re Phi = (g+ + g-) |xi|^alpha int (1 - cos s) s^{-1-alpha} ds
TEST(Symbol, StableHomogeneity) {
  const auto mdl = make_stable(1, 1.5, SphericalDensity::two_sided(1.0, 0.5));
  const double a[1] = {1.0}, b[1] = {4.0};
  EXPECT_NEAR(phi(mdl, b).re / phi(mdl, a).re, 8.0, 1e-8);
  const double c = -std::tgamma(-1.5) * std::cos(0.75 * kPi);
  EXPECT_NEAR(stable_radial_re(1.5, 1.0), c, 1e-12);
  EXPECT_NEAR(phi(mdl, a).re, 1.5 * c, 1e-8);
}

TEST(Symbol, BandsAddUp) {
  const auto mdl = make_relativistic(1, 1.0, 1.0);
  const double xi[1] = {2.5};
  const auto full = phi(mdl, xi);
  const auto a = phi_band(mdl, xi, 0.0, 0.7);
  const auto b = phi_band(mdl, xi, 0.7, kNoCut);
  EXPECT_NEAR(full.re, a.re + b.re, 1e-10);
}

TEST(Symbol, PsiTableInverse) {
  RadialProfile f{1, 2.5, 1.0, 1.0, 3.0, 1.0};
  const auto mdl = make_tempered(1, f, SphericalDensity::two_sided(1.0, 0.5));
  const PsiTable tab(mdl);
  for (double s : {0.05, 1.0, 30.0}) EXPECT_NEAR(tab(tab.inverse(s)) / s, 1.0, 1e-8);
  EXPECT_TRUE(std::isfinite(tab.max_doubling()));
  EXPECT_THROW(tab.inverse(-1.0), OutOfRange);
}

TEST(Symbol, StablePsiClosedForm) {
  const auto mdl = make_stable(1, 1.0, SphericalDensity::constant(1, 1.0 / kPi));
  const PsiTable tab(mdl);
  EXPECT_TRUE(tab.closed_form());
  EXPECT_NEAR(tab(3.0), 3.0, 1e-9);
  EXPECT_NEAR(h_of_t(mdl, 0.5), 0.5, 1e-9);
}

TEST(Symbol, TiltedExponentRelativistic) {
  const auto mdl = make_relativistic(1, 1.0, 1.0);
  const double xi[1] = {1.0};
  EXPECT_NEAR(exp_moment_exponent(mdl, xi), -1.0, 1e-6);
}

TEST(Symbol, TiltedExponentDiverges) {
  RadialProfile f{1, 2.0, 1.0, 1.0, 1.0, 1.0};
  const auto mdl = make_tempered(1, f, SphericalDensity::constant(1, 1.0), true);
  const double xi[1] = {1.0};
  EXPECT_THROW(exp_moment_exponent(mdl, xi), DivergentMoment);
}

TEST(Symbol, DriftCorrection) {
  const auto mdl = make_stable(1, 1.5, SphericalDensity::two_sided(1.0, 0.5));
  // int_{0.5 <= |y| < 1} y nu(y) dy = 0.5 * int_{0.5}^1 s^{-1.5} ds
  const Vec m = annulus_moment(mdl, 0.5, 1.0);
  EXPECT_NEAR(m[0], 0.5 * 2.0 * (std::sqrt(2.0) - 1.0), 1e-12);
  EXPECT_NEAR(drift_correction(mdl, 0.5)[0], -m[0], 1e-12);
}
