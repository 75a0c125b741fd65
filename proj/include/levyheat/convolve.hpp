#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "levyheat/grid.hpp"
#include "levyheat/model.hpp"

namespace levyheat {

using cplx = std::complex<double>;

enum class Boundary { periodic, linear };

/// nu_r(y) = 1_{|y| >= r} nu(y) with its total mass.
struct RestrictedMeasure {
  const LevyModel* model = nullptr;
  double r = 0.0;
  double mass = 0.0;
  double operator()(std::span<const double> y) const;
};
RestrictedMeasure restrict_measure(const LevyModel& model, double r);

/// Node (midpoint) samples of `density`; throws GridError naming a non-finite node.
DensityField sample(const std::function<double(std::span<const double>)>& density, const Grid& grid);

/// Cell averages of nu_r, optionally tilted by e^{<tilt,y>}. With `periodic` the
/// images y + 2Lk are folded in (far images through a tail integral), so the
/// field mass equals the mass of the (tilted) measure.
DensityField sample_restricted(const LevyModel& model, double r, const Grid& grid,
                               bool periodic = true, std::span<const double> tilt = {});

/// Fourier transform estimate dx^d sum_j f_j e^{i<xi_k,x_j>} on the r2c half layout.
std::vector<cplx> spectrum(const DensityField& f);
/// Frequency vector of half-layout slot h.
Vec half_frequency(const Grid& grid, std::size_t h);
/// Periodized density whose transform is `hat` (values on the half layout).
DensityField invert_spectrum(const Grid& grid, const std::vector<cplx>& hat);
DensityField invert_spectrum(const Grid& grid,
                             const std::function<cplx(std::span<const double>)>& hat);
/// f * mu on the torus, where mu has transform `multiplier`.
DensityField apply_multiplier(const DensityField& f,
                              const std::function<cplx(std::span<const double>)>& multiplier);

/// dx^d-scaled FFT convolution. Linear mode zero-pads and throws GridError when
/// more than `spill_tol` of the mass leaves the window.
DensityField convolve(const DensityField& a, const DensityField& b,
                      Boundary boundary = Boundary::linear, double spill_tol = 1e-6);
/// n-fold self convolution by repeated squaring.
DensityField nfold(const DensityField& base, unsigned n, Boundary boundary = Boundary::periodic,
                   double spill_tol = 1e-6);

struct CompoundPoisson {
  DensityField field;
  unsigned terms = 0;
  double base_mass = 0.0;
};
/// e^{-t|mu|} sum_{n>=1} t^n mu^{n*} / n! with truncation below 1e-12 of the sup.
CompoundPoisson compound_poisson_series(const DensityField& base, double t,
                                        Boundary boundary = Boundary::periodic,
                                        unsigned extra_terms = 0);
/// pbar_t^r for the sampled nu_r (r = 0 for finite measures gives p~_t).
CompoundPoisson compound_poisson(const LevyModel& model, double r, double t, const Grid& grid,
                                 Boundary boundary = Boundary::periodic);
/// Spectral counterpart: inverse of e^{-t|mu|}(exp(t mu^) - 1) for the same samples.
DensityField compound_poisson_spectral(const DensityField& base, double t);

struct KEstimate {
  double r = 0.0;
  double value = 0.0;      // lower-bound estimate of K(r)
  double x_at_sup = 0.0;
  double x_max = 0.0;      // final window
  bool divergent = false;
};
/// ratio int_{|x-y|>r,|y|>r} f(|x-y|) f(|y|) dy / f(|x|) at |x| = x.
double k_ratio(const RadialProfile& f, double r, double x);
KEstimate k_function(const RadialProfile& f, double r, double x_max = 256.0,
                     unsigned points = 64);
/// Estimates on a common x window (the largest one needed by any radius).
std::vector<KEstimate> k_table(const RadialProfile& f, const Vec& radii, double x_max = 256.0);

/// (int e^{kappa<theta,z>} nu_r(z) dz)^n.
double exp_moment_integral(const LevyModel& model, double r, std::span<const double> theta,
                           unsigned n);

}  // namespace levyheat
