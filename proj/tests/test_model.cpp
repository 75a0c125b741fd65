#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "levyheat/model.hpp"
#include "levyheat/symbol.hpp"

using namespace levyheat;

TEST(Angular, TwoSidedAndQuadrant) {
  const auto g = SphericalDensity::two_sided(2.0, 0.5);
  const double p[1] = {1.0}, m[1] = {-1.0};
  EXPECT_DOUBLE_EQ(g(p), 2.0);
  EXPECT_DOUBLE_EQ(g(m), 0.5);
  EXPECT_DOUBLE_EQ(g.integral(), 2.5);
  EXPECT_FALSE(g.symmetric());

  const auto q = SphericalDensity::quadrant(1.0, 2.0);
  const double a[2] = {0.6, 0.8}, b[2] = {-0.6, 0.8};
  EXPECT_DOUBLE_EQ(q(a), 1.0);
  EXPECT_DOUBLE_EQ(q(b), 2.0);
  EXPECT_NEAR(q.integral(), 3.0 * kPi, 1e-12);
  EXPECT_EQ(q.jump_angles().size(), 4u);
}

TEST(Angular, RejectsNegative) {
  EXPECT_THROW(SphericalDensity::two_sided(-1.0, 1.0), ConfigError);
  EXPECT_THROW(SphericalDensity::cosine(2, 1.0, 2.0, {1.0, 0.0}), ConfigError);
}

TEST(Model, StableDensity) {
  const auto mdl = make_stable(1, 1.5, SphericalDensity::two_sided(1.0, 0.5));
  const double x[1] = {2.0}, y[1] = {-2.0};
  EXPECT_NEAR(mdl.density(x), std::pow(2.0, -2.5), 1e-15);
  EXPECT_NEAR(mdl.density(y), 0.5 * std::pow(2.0, -2.5), 1e-15);
  EXPECT_DOUBLE_EQ(mdl.kappa(), 0.0);
  EXPECT_FALSE(mdl.finite_mass());
  // nu(|x| > 3) = 1.5 * 3^{-1.5} / 1.5
  EXPECT_NEAR(mdl.tail_mass(3.0), std::pow(3.0, -1.5), 1e-12);
}

TEST(Model, InvalidParameters) {
  EXPECT_THROW(make_stable(1, 2.0, SphericalDensity::constant(1, 1.0)), ConfigError);
  EXPECT_THROW(make_stable(4, 1.0, SphericalDensity::constant(4, 1.0)), ConfigError);
  EXPECT_THROW(make_relativistic(1, 1.0, 0.0), ConfigError);
  RadialProfile f{1, 0.0, 1.0, 1.0, 1.0, 1.0};
  EXPECT_THROW(make_tempered(1, f, SphericalDensity::constant(1, 1.0)), ConfigError);
  EXPECT_NO_THROW(make_tempered(1, f, SphericalDensity::constant(1, 1.0), true));
}

// Relativistic alpha = 1, d = 1: nu(x) = m K_1(m|x|) / (pi |x|).
TEST(Model, RelativisticCauchyDensity) {
  const auto mdl = make_relativistic(1, 1.0, 1.0);
  for (double x : {0.01, 0.5, 2.0, 15.0}) {
    const double xs[1] = {x};
    const double exact = boost::math::cyl_bessel_k(1, x) / (kPi * x);
    EXPECT_NEAR(mdl.density(xs) / exact, 1.0, 1e-10) << x;
  }
  EXPECT_DOUBLE_EQ(mdl.kappa(), 1.0);
}

TEST(Model, RelativisticPhi) {
  for (double p : {0.5, 1.0, 1.75}) {
    EXPECT_NEAR(relativistic_phi_laguerre(0.0, p), std::pow(2.0, -p) * std::tgamma(2 * p + 1), 1e-10);
    for (double xi : {0.1, 1.0, 7.0}) {
      const double a = relativistic_phi_laguerre(xi, p);
      EXPECT_NEAR(a / relativistic_phi_adaptive(xi, p), 1.0, 1e-9);
      EXPECT_NEAR(a / relativistic_phi_bessel(xi, p), 1.0, 1e-9);
    }
  }
}

// Re Phi(xi) for the relativistic density equals (m^{2/alpha} + xi^2)^{alpha/2} - m.
TEST(Model, RelativisticSymbolMatchesClosedForm) {
  for (double alpha : {0.8, 1.0, 1.5}) {
    const auto mdl = make_relativistic(1, alpha, 1.0);
    for (double xi : {0.3, 2.0}) {
      boost::math::quadrature::exp_sinh<double> es;
      const double re = 2.0 * es.integrate([&](double s) {
        const double x[1] = {s}, h = std::sin(0.5 * xi * s);
        return h == 0.0 ? 0.0 : std::exp(std::log(2.0 * h * h) + mdl.log_density(x));
      });
      EXPECT_NEAR(re, std::pow(1.0 + xi * xi, alpha / 2) - 1.0, 1e-6) << alpha << ' ' << xi;
    }
  }
}

TEST(Model, TailMassByQuadrature) {
  RadialProfile f{1, 1.5, 1.0, 1.0, 3.0, 1.0};
  const auto mdl = make_tempered(1, f, SphericalDensity::two_sided(1.0, 0.5));
  const double q = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double s) { return 1.5 * f(s); }, 0.7, 60.0, 15, 1e-13);
  EXPECT_NEAR(mdl.tail_mass(0.7) / q, 1.0, 1e-9);
}

TEST(Model, ClassifyThreeCases) {
  using V = ProfileClass::Verdict;
  EXPECT_EQ(classify_profile(0, 0, 2.5, 2).verdict, V::poly_ok);
  EXPECT_EQ(classify_profile(0, 0, 2.0, 2).verdict, V::fails);
  EXPECT_EQ(classify_profile(1, 0.5, 0.0, 3).verdict, V::stretched_ok);
  EXPECT_EQ(classify_profile(1, 1, 1.0, 1).verdict, V::fails);
  EXPECT_EQ(classify_profile(1, 1, 1.2, 1).verdict, V::exp_ok);
  EXPECT_EQ(classify_profile(1, 1, 1.0, 2).verdict, V::fails);
}

TEST(Model, ScalingAndDrift) {
  const auto mdl = make_stable(1, 1.0, SphericalDensity::constant(1, 1.0));
  const auto sc = mdl.scaled(3.0);
  const double x[1] = {2.0};
  EXPECT_NEAR(sc.density(x), 3.0 * mdl.density(x), 1e-15);
  EXPECT_THROW(mdl.with_drift({1.0, 2.0}), ConfigError);
}
