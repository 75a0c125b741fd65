#pragma once

#include <vector>

#include "levyheat/model.hpp"

namespace levyheat {

/// Convolution powers q_n = nu_r^{n*} of a 1-D Levy density, tabulated as
/// log-values on a uniform block around the origin continued by geometric
/// nodes out to x_max. q_1 is nu_r itself (evaluated exactly); q_n for n >= 2
/// is q_{n-1} * nu_r by adaptive quadrature against the previous table.
class TailLine {
 public:
  struct Options {
    unsigned n_max = 12;
    double x_max = 1e4;
    unsigned per_r = 32;    // uniform nodes per unit r
    double growth = 0.02;   // outer node ratio - 1
    double rel_tol = 1e-9;
  };

  TailLine(const LevyModel& model, double r, Options opt);
  TailLine(const LevyModel& model, double r) : TailLine(model, r, Options{}) {}

  /// q_n(x); beyond x_max the last ratio q_n / nu_r is held fixed.
  double operator()(unsigned n, double x) const;
  double log_q(unsigned n, double x) const;

  unsigned n_max() const { return opt_.n_max; }
  double r() const { return r_; }
  double mass() const { return mass_; }
  double x_max() const { return opt_.x_max; }
  std::size_t nodes() const { return x_.size(); }

 private:
  double u_of(double x) const;
  double log_nu(double x) const;
  double log_interp(const Vec& table, double x) const;
  double compute(unsigned n, double x) const;

  // log rho on a dense log grid (cubic in log s)
  struct RadialTable {
    double lo = 0.0, step = 0.0;
    Vec v;
    double operator()(double s) const;
  };

  const LevyModel* model_;
  double r_;
  RadialTable radial_;
  double log_g_plus_ = 0.0;
  double log_g_minus_ = 0.0;
  std::vector<std::size_t> kinks_;  // node indices of +-k r
  Options opt_;
  double h_ = 0.0;
  double x_in_ = 0.0;
  std::size_t n_in_ = 0;
  std::size_t half_ = 0;    // nodes on each side of the origin
  Vec x_;                   // node coordinates, increasing
  std::vector<Vec> logq_;   // logq_[n] for n >= 2
  double mass_ = 0.0;
};

/// q_n(x) for n <= 4 by (nested) adaptive quadrature of the defining integrals;
/// an oracle for TailLine and grid convolutions.
double convolution_power_direct(const LevyModel& model, double r, unsigned n, double x);

}  // namespace levyheat
