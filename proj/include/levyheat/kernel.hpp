#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "levyheat/convolve.hpp"
#include "levyheat/grid.hpp"
#include "levyheat/model.hpp"
#include "levyheat/symbol.hpp"
#include "levyheat/tail_line.hpp"

namespace levyheat {

enum class Provenance { spectral, decomposition, oracle };
std::string to_string(Provenance p);

struct KernelField {
  DensityField field;
  double t = 0.0;
  Provenance provenance = Provenance::spectral;
  double spectrum_l2 = 0.0;   // sqrt(sum |hat|^2) over all slots
};

/// Phi restricted to lo <= |y| < hi on the r2c half layout of `grid`
/// (lo = 0, hi = inf gives Phi itself).
std::vector<cplx> exponent_on_grid(const LevyModel& model, const Grid& grid, double lo = 0.0,
                                   double hi = kNoCut);

/// Inverse FFT of e^{-t psi}. Throws GridError when e^{-t Re psi} exceeds 1e-12
/// on the Nyquist shell (the grid spacing is too coarse).
KernelField heat_kernel_spectral(const LevyModel& model, double t, const Grid& grid);

/// p°_t^r: inverse FFT of exp(t int_{|y|<r} (e^{i<xi,y>} - 1 - i<xi,y>) nu(dy)).
KernelField small_jump_kernel(const LevyModel& model, double r, double t, const Grid& grid);
/// lambda_t = p°_t^r * g_t (g_t the Gaussian part) in one inversion.
KernelField lambda_kernel(const LevyModel& model, double r, double t, const Grid& grid);

/// eta(t, s) = t (4 pi)^{-1/2} s^{-3/2} e^{-t^2/4s}, the 1/2-stable subordinator.
double half_stable_subordinator(double t, double s);
/// p_t(x) of the d-dimensional relativistic model with alpha = 1 and mass m,
/// by quadrature of the subordinated Gaussian.
double relativistic_oracle(unsigned d, double m, double t, double x);
/// log of the same (usable where the value underflows).
double relativistic_oracle_log(unsigned d, double m, double t, double x);

struct DecompositionReport {
  double r = 0.0;
  double tail_mass = 0.0;       // |nu_r|
  unsigned terms = 0;           // compound Poisson terms used
  double sup_residual = 0.0;    // relative to sup of the spectral kernel
  double mass_residual = 0.0;
  DensityField assembled;
  DensityField reference;
};
/// Assembles e^{-t|nu_r|} lambda_t * delta_{t b_r} + lambda_t * pbar_t^r * delta_{t b_r}
/// on the torus and compares it with heat_kernel_spectral. r defaults to h(t);
/// r = 0 is allowed for finite measures.
DecompositionReport decomposition_check(const LevyModel& model, double t, const Grid& grid,
                                        std::optional<double> r = std::nullopt);

/// |p_t * p_s - p_{t+s}| / sup p_{t+s} on the grid.
double semigroup_residual(const LevyModel& model, double t, double s, const Grid& grid);

/// Estimated image contribution to the periodized kernel at x: t sum_{k != 0} nu(x + 2Lk).
double periodization_estimate(const LevyModel& model, double t, const Grid& grid,
                              std::span<const double> x);
/// Round-off floor of an inverted spectrum with transform magnitudes |hat|.
double roundoff_floor(const Grid& grid, double spectrum_l2);

/// Point value of a 2-D (or 1-D) field by multilinear interpolation.
double interpolate(const DensityField& f, std::span<const double> x);

struct FarFieldValue {
  double value = 0.0;
  double log_value = 0.0;
  double accuracy = 0.0;        // estimated relative error
  bool refused = false;
  std::string note;
  Vec terms;                    // relative contribution of each series term
};

/// p_t(x) for d = 1 far from the origin:
///   e^{-t|nu_r|} lambda_t(x - t b_r) + (lambda_t * pbar_t^r)(x - t b_r),
/// with lambda_t on a compact grid and nu_r^{n*} from a TailLine. For r = 0 and
/// no Gaussian part lambda_t is a point mass and the value is p~_t. Closed forms
/// replace the series for Cauchy and alpha = 1 relativistic models when `use_oracle`.
class FarField {
 public:
  struct Options {
    bool use_oracle = false;
    std::optional<double> r;        // default h(t)
    double x_max = 1e4;             // TailLine range
    double series_tol = 1e-9;
    unsigned n_cap = 16;
  };

  FarField(const LevyModel& model, double t, Options opt);
  FarField(const LevyModel& model, double t) : FarField(model, t, Options{}) {}

  FarFieldValue operator()(double x) const;
  /// p_t(x) / nu(x) without forming either factor.
  FarFieldValue ratio_to_nu(double x) const;

  double r() const { return r_; }
  double t() const { return t_; }
  double tail_mass() const { return mass_; }
  unsigned terms() const { return n_max_; }
  bool oracle() const { return oracle_ != Oracle::none; }
  /// lambda_t field (empty for a point mass).
  const DensityField& lambda() const { return lambda_; }

 private:
  enum class Oracle { none, cauchy, relativistic };
  FarFieldValue evaluate(double x, double log_ref) const;

  const LevyModel* model_;
  double t_;
  Options opt_;
  Oracle oracle_ = Oracle::none;
  double cauchy_gamma_ = 0.0;
  double r_ = 0.0;
  double mass_ = 0.0;
  double shift_ = 0.0;
  unsigned n_max_ = 0;
  bool point_mass_ = false;
  DensityField lambda_;
  Vec z_, w_;                       // lambda nodes and weights dx * lambda
  std::shared_ptr<TailLine> line_;
};

/// Is the spectral value at x trustworthy: the periodization estimate and the
/// round-off floor both stay below `rel` of the kernel value.
struct Certification {
  bool ok = false;
  double periodization = 0.0;
  double roundoff = 0.0;
};
Certification certify_point(const LevyModel& model, const KernelField& k,
                            std::span<const double> x, double rel = 0.01);

}  // namespace levyheat
