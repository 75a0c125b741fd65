#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "levyheat/kernel.hpp"

using namespace levyheat;

TEST(Kernel, CauchyClosedForm) {
  const auto mdl = make_stable(1, 1.0, SphericalDensity::constant(1, 1.0 / kPi));
  const Grid g(1, 1 << 18, 4096.0);
  const auto k = heat_kernel_spectral(mdl, 1.0, g);
  double err = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) {
    const double x = g.node(j);
    if (std::abs(x) > 10) continue;
    const double ex = 1.0 / (kPi * (1 + x * x));
    err = std::max(err, std::abs(k.field[j] / ex - 1.0));
  }
  EXPECT_LT(err, 2e-5);
  EXPECT_NEAR(k.field.mass(), 1.0, 1e-6);
}

// A = I convention: e^{-t |xi|^2}, heat kernel (4 pi t)^{-1/2} e^{-x^2/4t}.
TEST(Kernel, GaussianConvention) {
  const auto mdl = make_gaussian(1, {1.0}).with_drift({0.5});
  const Grid g(1, 1024, 16.0);
  const double t = 0.7;
  const auto k = heat_kernel_spectral(mdl, t, g);
  double err = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) {
    const double x = g.node(j) - 0.5 * t;
    err = std::max(err, std::abs(k.field[j] - std::exp(-x * x / (4 * t)) / std::sqrt(4 * kPi * t)));
  }
  EXPECT_LT(err, 1e-13);
}

TEST(Kernel, CoarseGridRejected) {
  const auto mdl = make_stable(1, 0.5, SphericalDensity::constant(1, 1.0));
  EXPECT_THROW(heat_kernel_spectral(mdl, 0.01, Grid(1, 256, 64.0)), GridError);
}

// p_t(x) = (t m / pi) e^{mt} K_1(m sqrt(x^2 + t^2)) / sqrt(x^2 + t^2)
TEST(Kernel, RelativisticOracleClosedForm) {
  const double m = 1.3;
  for (double t : {0.4, 2.0})
    for (double x : {0.0, 1.0, 7.0, 60.0}) {
      const double rho = std::hypot(x, t);
      const double ex = t * m / kPi * std::exp(m * t) * boost::math::cyl_bessel_k(1, m * rho) / rho;
      EXPECT_NEAR(relativistic_oracle(1, m, t, x) / ex, 1.0, 1e-9) << t << ' ' << x;
      EXPECT_NEAR(relativistic_oracle_log(1, m, t, x), std::log(ex), 1e-9);
    }
}

TEST(Kernel, SubordinatorLaplace) {
  boost::math::quadrature::exp_sinh<double> es;
  for (double lam : {0.5, 3.0}) {
    const double v = es.integrate([&](double s) { return std::exp(-lam * s) * half_stable_subordinator(0.8, s); });
    EXPECT_NEAR(v, std::exp(-0.8 * std::sqrt(lam)), 1e-10);
  }
}

TEST(Kernel, Cauchy2d) {
  const auto mdl = make_stable(2, 1.0, SphericalDensity::constant(2, 1.0 / (2 * kPi)));
  const auto k = heat_kernel_spectral(mdl, 0.5, Grid(2, 512, 12.0));
  for (double s : {0.0, 1.0, 2.0}) {
    const double x[2] = {0.6 * s, 0.8 * s};
    const double ex = 0.5 / (2 * kPi) * std::pow(0.25 + s * s, -1.5);
    EXPECT_NEAR(interpolate(k.field, x) / ex, 1.0, 0.02) << s;
  }
}

TEST(Kernel, DecompositionCauchy) {
  const auto mdl = make_stable(1, 1.0, SphericalDensity::constant(1, 1.0 / kPi));
  const auto rep = decomposition_check(mdl, 0.5, Grid(1, 1 << 14, 40.96));
  EXPECT_LT(rep.sup_residual, 1e-4);
  EXPECT_LT(rep.mass_residual, 1e-10);
}

TEST(Kernel, Semigroup) {
  RadialProfile f{1, 0.0, 1.0, 1.0, 1.5, 1.0};
  const auto mdl = make_compound_poisson(1, f, SphericalDensity::two_sided(1.0, 0.5)).with_gaussian({1.0});
  EXPECT_LT(semigroup_residual(mdl, 0.2, 0.3, Grid(1, 4096, 32.0)), 1e-10);
}

TEST(Kernel, FarFieldCauchy) {
  const auto mdl = make_stable(1, 1.0, SphericalDensity::constant(1, 1.0 / kPi));
  const FarField far(mdl, 1.0);
  for (double x : {10.0, -300.0, 5000.0}) {
    const auto v = far(x);
    EXPECT_FALSE(v.refused);
    EXPECT_NEAR(v.value * kPi * (1 + x * x), 1.0, 1e-5) << x;
  }
  FarField::Options o;
  o.use_oracle = true;
  const FarField exact(mdl, 1.0, o);
  EXPECT_TRUE(exact.oracle());
  EXPECT_NEAR(exact(3.0).value * kPi * 10.0, 1.0, 1e-12);
}

TEST(Kernel, FarFieldRelativistic) {
  const auto mdl = make_relativistic(1, 1.0, 1.0);
  const FarField far(mdl, 0.5);
  for (double x : {5.0, -25.0}) EXPECT_NEAR(far(x).value / relativistic_oracle(1, 1.0, 0.5, x), 1.0, 1e-4);
}
