#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <limits>

#include "levyheat/convolve.hpp"
#include "levyheat/tail_line.hpp"

using namespace levyheat;

namespace {

double gauss(double x, double var) { return std::exp(-x * x / (2 * var)) / std::sqrt(2 * kPi * var); }

DensityField gaussian_field(const Grid& g, double var) {
  DensityField f(g);
  for (std::size_t j = 0; j < g.n; ++j) f[j] = gauss(g.node(j), var);
  return f;
}

}  // namespace

TEST(Convolve, SpectrumRoundTrip) {
  const Grid g(1, 512, 10.0);
  const DensityField f = gaussian_field(g, 1.3);
  const DensityField back = invert_spectrum(g, spectrum(f));
  EXPECT_LT(relative_sup_error(back, f), 1e-13);
}

TEST(Convolve, GaussianTimesGaussian) {
  const Grid g(1, 2048, 20.0);
  const DensityField a = gaussian_field(g, 1.0), b = gaussian_field(g, 0.5);
  for (Boundary bd : {Boundary::periodic, Boundary::linear}) {
    const DensityField c = convolve(a, b, bd);
    double err = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) err = std::max(err, std::abs(c[j] - gauss(g.node(j), 1.5)));
    EXPECT_LT(err, 1e-12);
  }
}

TEST(Convolve, LinearSpillThrows) {
  const Grid g(1, 256, 4.0);
  const DensityField a = gaussian_field(g, 2.0);
  EXPECT_THROW(convolve(a, a, Boundary::linear, 1e-9), GridError);
}

TEST(Convolve, NfoldMassMultiplies) {
  const auto mdl = make_stable(1, 1.2, SphericalDensity::two_sided(1.0, 0.4));
  const Grid g(1, 4096, 40.0);
  const DensityField nu = sample_restricted(mdl, 1.0, g, true);
  EXPECT_NEAR(nu.mass() / mdl.tail_mass(1.0), 1.0, 1e-9);
  EXPECT_NEAR(nfold(nu, 3).mass() / std::pow(nu.mass(), 3), 1.0, 1e-12);
}

TEST(Convolve, CompoundPoissonSeriesVsSpectral) {
  RadialProfile f{1, 0.0, 1.0, 1.0, 3.0, 1.0};
  const auto mdl = make_compound_poisson(1, f, SphericalDensity::two_sided(1.0, 0.5));
  const Grid g(1, 4096, 32.0);
  const DensityField nu = sample_restricted(mdl, 0.0, g, true);
  const auto cp = compound_poisson_series(nu, 0.8);
  EXPECT_LT(relative_sup_error(cp.field, compound_poisson_spectral(nu, 0.8)), 1e-10);
  EXPECT_NEAR(cp.field.mass(), 1.0 - std::exp(-0.8 * nu.mass()), 1e-12);
}

TEST(Convolve, KSlopeStable) {
  for (double a : {0.5, 1.5}) {
    const RadialProfile f{1, 1 + a, 0, 0, 1 + a, 1};
    const auto ks = k_table(f, {4.0, 32.0});
    EXPECT_NEAR(std::log(ks[1].value / ks[0].value) / std::log(8.0), -a, 0.05);
    EXPECT_FALSE(ks[0].divergent);
  }
}

TEST(Convolve, KDivergesForCounterexample) {
  const RadialProfile f{1, 0.0, 1.0, 1.0, 1.0, 1.0};
  EXPECT_TRUE(k_function(f, 2.0).divergent);
}

// q_2 of the Cauchy tail by brute-force quadrature in the test.
TEST(TailLine, MatchesDirectQuadrature) {
  const auto mdl = make_stable(1, 1.0, SphericalDensity::constant(1, 1.0 / kPi));
  const double r = 1.0;
  const TailLine line(mdl, r, TailLine::Options{4, 1e3});
  auto nu = [&](double y) { return std::abs(y) >= r ? 1.0 / (kPi * y * y) : 0.0; };
  for (double x : {0.3, 2.0, 5.0, 60.0}) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    auto f = [&](double y) { return nu(x - y) * nu(y); };
    std::vector<double> pts{-1e7, -r, r, x - r, x + r, 1e7};
    std::sort(pts.begin(), pts.end());
    double q = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      if (pts[i + 1] > pts[i]) q += GK::integrate(f, pts[i], pts[i + 1], 20, 1e-13);
    EXPECT_NEAR(line(2, x) / q, 1.0, 1e-6) << x;
  }
  EXPECT_NEAR(line(3, 40.0) / convolution_power_direct(mdl, r, 3, 40.0), 1.0, 1e-6);
}

TEST(Convolve, ExpMomentIntegral) {
  RadialProfile f{1, 1.5, 1.0, 1.0, 3.0, 1.0};
  const auto mdl = make_tempered(1, f, SphericalDensity::two_sided(1.0, 0.5));
  const double th[1] = {1.0};
  const double inf = std::numeric_limits<double>::infinity();
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double q = GK::integrate([&](double s) { return std::exp(s + f.log_value(s)); }, 1.0, inf, 20, 1e-13) +
                   0.5 * GK::integrate([&](double s) { return std::exp(-s + f.log_value(s)); }, 1.0, inf, 20, 1e-13);
  EXPECT_NEAR(exp_moment_integral(mdl, 1.0, th, 1) / q, 1.0, 1e-8);
  EXPECT_NEAR(exp_moment_integral(mdl, 1.0, th, 3) / (q * q * q), 1.0, 3e-8);
}
