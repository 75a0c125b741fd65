#pragma once

#include <complex>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "levyheat/model.hpp"

namespace levyheat {

struct SymbolValue {
  double re = 0.0;
  double im = 0.0;
  std::complex<double> value() const { return {re, im}; }
};

inline constexpr double kNoCut = std::numeric_limits<double>::infinity();

/// Radial pieces of the Levy integral over lo <= s < hi for frequency u:
///   re = int (1 - cos su) rho(s) s^{d-1} ds
///   im = int (su 1_{s<1} - sin su) rho(s) s^{d-1} ds
SymbolValue radial_symbol(const LevyModel& model, double u, double lo = 0.0,
                          double hi = kNoCut);

/// Same on the uniform line u_k = k du, k = 0..count-1. Uses a cumulative
/// scaled integral on the pure-power part near the origin.
std::vector<SymbolValue> radial_symbol_line(const LevyModel& model, double du,
                                            std::size_t count, double lo = 0.0,
                                            double hi = kNoCut);

/// Phi(xi), the compensated Levy integral.
SymbolValue phi(const LevyModel& model, std::span<const double> xi);
/// Phi restricted to lo <= |y| < hi.
SymbolValue phi_band(const LevyModel& model, std::span<const double> xi, double lo, double hi);
/// psi(xi) = -i<xi,b> + <xi,A xi> + Phi(xi).
std::complex<double> psi(const LevyModel& model, std::span<const double> xi);
double re_phi(const LevyModel& model, std::span<const double> xi);

/// Stable closed forms of the radial pieces over (0, inf) for rho = s^{-1-alpha}
/// (in units of s^{d-1} ds).
double stable_radial_re(double alpha, double u);
double stable_radial_im(double alpha, double u);

/// d = 2 stable models: Phi(rho w) = rho^alpha Omega(w) + i rho c(rho) <w, m1>,
/// tabulated over the polar angle of w.
class StableDirectionTable {
 public:
  StableDirectionTable(const LevyModel& model, unsigned angles = 4096);
  SymbolValue operator()(std::span<const double> xi) const;
  double max_re() const { return max_re_; }

 private:
  SymbolValue omega(double phi) const;
  double alpha_;
  Vec m1_;
  Vec re_;
  Vec im_;
  double max_re_ = 0.0;
};

/// Tabulated maximal function Psi(r) = sup_{|xi|<=r} Re Phi(xi) with its
/// generalized right inverse. Closed forms are used where the family has one.
class PsiTable {
 public:
  explicit PsiTable(const LevyModel& model, double r_min = 1e-3, double r_max = 1e4,
                    unsigned per_decade = 32);

  double operator()(double r) const;
  /// sup{r : Psi(r) = s}; OutOfRange when s >= Psi(inf) or s <= 0.
  double inverse(double s) const;
  /// Psi(inf); +inf for infinite measures.
  double sup() const { return sup_; }
  const Vec& radii() const { return r_; }
  const Vec& values() const { return v_; }
  bool closed_form() const { return kind_ != Kind::table; }
  /// max over the table of Psi(2r)/Psi(r).
  double max_doubling() const;
  void write_csv(const std::string& path) const;

 private:
  enum class Kind { stable, relativistic, none, table };
  Kind kind_ = Kind::table;
  double c_ = 0.0;       // stable: Psi(r) = c r^alpha
  double alpha_ = 1.0;
  double m_ = 0.0;
  double mu_ = 0.0;
  Vec r_;
  Vec v_;
  double sup_ = std::numeric_limits<double>::infinity();
  bool finite_ = false;
};

double psi_max(const LevyModel& model, double r);
double psi_inverse(const LevyModel& model, double s);
/// h(t) = 1 / Psi_-(1/t).
double h_of_t(const LevyModel& model, double t);
double h_of_t(const PsiTable& table, double t);
/// b_r: b -/+ the first moment of nu over the annulus between r and 1.
Vec drift_correction(const LevyModel& model, double r);
/// int_{a <= |y| < c} y nu(y) dy.
Vec annulus_moment(const LevyModel& model, double a, double c);

/// psi~(xi) = -<xi,b> - <xi,A xi> + int (1 - e^{<xi,y>} + <xi,y> 1_B) nu(dy).
/// Throws DivergentMoment when the tail integral does not settle on nested cutoffs.
double exp_moment_exponent(const LevyModel& model, std::span<const double> xi);
/// int_{|y| >= r} e^{<xi,y>} nu(y) dy (used by the convolution limits).
double exp_tail_integral(const LevyModel& model, std::span<const double> xi, double r);

struct ConditionDRow {
  double t = 0.0;
  double integral = 0.0;
  double scale = 0.0;  // Psi_-(1/t)^{d+1}
  double ratio = 0.0;
};
struct ConditionDReport {
  bool applicable = true;
  bool convergent = true;
  bool bounded = true;
  std::string note;
  std::vector<ConditionDRow> rows;
};
ConditionDReport check_condition_D(const LevyModel& model, const Vec& t_grid);

}  // namespace levyheat
