#pragma once

#include <functional>
#include <vector>

#include "levyheat/common.hpp"

namespace levyheat::quad {

using Fn = std::function<double(double)>;

struct Result {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

/// Adaptive Gauss-Kronrod (31 points) on [a, b]; b may be +inf, a may be -inf.
Result adaptive(const Fn& f, double a, double b, double rel_tol = 1e-11,
                unsigned max_depth = 15);

/// Adaptive Gauss-Kronrod over [pts.front(), pts.back()], split at every
/// interior breakpoint. Points must be nondecreasing; duplicates are skipped.
Result adaptive_pieces(const Fn& f, const std::vector<double>& pts,
                       double rel_tol = 1e-11, unsigned max_depth = 15);

/// Tanh-sinh on a finite interval; tolerates integrable endpoint singularities.
Result endpoint_singular(const Fn& f, double a, double b, double rel_tol = 1e-12);

/// Exp-sinh on [a, inf); handles algebraically decaying integrands.
Result half_line(const Fn& f, double a, double rel_tol = 1e-12);

/// Fixed 20-point Gauss-Legendre on [a, b].
double gauss20(const Fn& f, double a, double b);

/// Sum of fixed Gauss rules over consecutive blocks of width <= `block`
/// covering [a, b]; meant for smooth integrands times sin/cos.
double blocked_gauss(const Fn& f, double a, double b, double block);

/// Gauss-Laguerre rule for the weight v^alpha e^{-v} on (0, inf) with n nodes,
/// computed by Golub-Welsch and cached.
struct LaguerreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const LaguerreRule& gauss_laguerre(unsigned n, double alpha);

/// Quadrature rule on the unit sphere S^{d-1} (surface measure).
struct SphereRule {
  unsigned dim = 1;
  std::vector<Vec> nodes;
  std::vector<double> weights;
};

/// d=1: the two points {-1, +1} with unit weights. d=2: `n` midpoint angles on
/// [0, 2pi). d=3: Gauss-Legendre in cos(polar) times `n` uniform azimuths.
SphereRule sphere_rule(unsigned dim, unsigned n);

/// Surface area of S^{d-1}.
double sphere_area(unsigned dim);

/// 1 - cos(x), accurate for small |x|.
inline double one_minus_cos(double x) {
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s;
}

/// sin(x) - x, series near zero.
double sin_minus_x(double x);

/// e^x - 1 - x, series near zero.
double expm1_minus_x(double x);

}  // namespace levyheat::quad
