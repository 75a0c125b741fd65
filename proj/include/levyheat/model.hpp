#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levyheat/common.hpp"

namespace levyheat {

enum class Family { stable, relativistic, stretched, exponential, compound_poisson, custom };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

/// Angular part g of a Levy density nu(x) = g(x/|x|) rho(|x|).
class SphericalDensity {
 public:
  enum class Kind { constant, two_sided, quadrant, cosine, custom };
  using Fn = std::function<double(std::span<const double>)>;

  SphericalDensity() = default;

  static SphericalDensity constant(unsigned dim, double value);
  /// d = 1: g(+1) = plus, g(-1) = minus.
  static SphericalDensity two_sided(double plus, double minus);
  /// d = 2: `same_sign` where theta1*theta2 >= 0, `opposite_sign` where < 0.
  static SphericalDensity quadrant(double same_sign, double opposite_sign);
  /// g(theta) = a + b <theta, e>, continuous; requires a >= |b|.
  static SphericalDensity cosine(unsigned dim, double a, double b, Vec direction);
  /// Arbitrary bounded g. In d = 2, `jump_angles` lists where g may be discontinuous.
  static SphericalDensity custom(unsigned dim, Fn fn, double upper_bound,
                                 std::vector<double> jump_angles = {});

  double operator()(std::span<const double> theta) const;
  /// d = 2 convenience: g at polar angle phi.
  double at_angle(double phi) const;

  Kind kind() const { return kind_; }
  unsigned dim() const { return dim_; }
  double a() const { return a_; }
  double b() const { return b_; }
  const Vec& direction() const { return dir_; }
  double upper_bound() const { return bound_; }
  bool symmetric() const;

  /// Polar angles in [0, 2pi) where g may jump (d = 2). Empty when continuous.
  std::vector<double> jump_angles() const;
  /// Angular distance from theta to the nearest jump; +inf when g is continuous.
  double discontinuity_distance(std::span<const double> theta) const;

  /// Integral of g over the sphere (nondegeneracy requires > 0).
  double integral() const;
  /// Integral of theta g(theta) over the sphere.
  Vec first_moment() const;

 private:
  Kind kind_ = Kind::constant;
  unsigned dim_ = 1;
  double a_ = 1.0;
  double b_ = 0.0;
  Vec dir_;
  double bound_ = 1.0;
  Fn fn_;
  std::vector<double> jumps_;
};

/// Dominating radial profile
///   f(s) = c0 e^{-m} s^{-gamma}       for 0 < s <= 1,
///   f(s) = c0 e^{-m s^beta} s^{-delta} for s > 1,
/// continuous at s = 1. The inner exponent gamma is the singularity order of
/// eta at the origin.
struct RadialProfile {
  unsigned dim = 1;
  double inner_exponent = 0.0;
  double m = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  double c0 = 1.0;

  double operator()(double s) const;
  double log_value(double s) const;
  /// Integrable singularity at the origin (finite Levy measure).
  bool finite_near_zero() const { return inner_exponent < static_cast<double>(dim); }
  void validate() const;
};

struct ProfileClass {
  enum class Verdict { poly_ok, stretched_ok, exp_ok, fails };
  double m = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  unsigned dim = 1;
  Verdict verdict = Verdict::fails;
};

std::string to_string(ProfileClass::Verdict v);

/// Three-case characterization of K(r) -> 0 for f(s) = e^{-m s^beta} s^{-delta}.
ProfileClass classify_profile(double m, double beta, double delta, unsigned dim);

/// Levy triplet (nu, A, b) with nu(x) = g(x/|x|) rho(|x|). Immutable.
class LevyModel {
 public:
  enum class Radial { power, relativistic, profile };

  unsigned dim() const { return dim_; }
  Family family() const { return family_; }
  const Vec& drift() const { return drift_; }
  /// Row-major d x d Gaussian matrix.
  const Vec& gaussian() const { return gauss_; }
  bool has_gaussian() const;
  /// inf_{|xi|=1} <xi, A xi>.
  double gaussian_ellipticity() const;
  double quad_form(std::span<const double> xi) const;

  const SphericalDensity& angular() const { return g_; }
  const RadialProfile& profile() const { return profile_; }
  Radial radial_kind() const { return radial_; }

  double density(std::span<const double> x) const;
  double log_density(std::span<const double> x) const;
  /// rho(s), the radial factor (includes the model scale).
  double radial(double s) const;
  double log_radial(double s) const;
  /// d = 1 fast path.
  /// log rho(s) + u s, with the exponential factors combined before rounding.
  double log_radial_tilted(double s, double u) const;
  double density1(double y) const;
  /// log(e^{a y} nu(y)) in d = 1.
  double log_density1_tilted(double y, double a) const;
  double log_density1(double y) const;

  double kappa() const { return kappa_; }
  std::optional<double> alpha() const { return alpha_; }
  /// Relativistic mass parameter m (not m^{1/alpha}).
  double rel_mass() const { return rel_m_; }
  /// m^{1/alpha} for the relativistic family.
  double rel_mu() const { return rel_mu_; }
  /// Integral of g over the sphere.
  double g_integral() const { return g_int_; }
  double scale() const { return scale_; }
  bool finite_mass() const { return no_jumps_ || profile_.finite_near_zero(); }
  bool no_jumps() const { return no_jumps_; }
  /// |nu| (inf when infinite).
  double total_mass() const;
  /// nu({|x| > r}).
  double tail_mass(double r) const;
  /// int_a^b rho(s) s^k ds; b may be +inf, a may be 0 when integrable.
  double radial_integral(double a, double b, double k) const;
  /// nu({|x| > r}) / (f(r) r^d), the low-regularity ratio.
  double low_reg_ratio(double r) const;

  /// True when constructed from a profile failing the K(r) -> 0 test.
  bool k_infinite() const { return k_infinite_; }
  /// Optional relativistic phi(xi) via the defining Laguerre integral.
  double relativistic_phi(double xi) const;
  /// c_{d,alpha} of the relativistic density.
  double relativistic_constant() const { return rel_c_; }

  LevyModel with_drift(Vec b) const;
  LevyModel with_gaussian(Vec a) const;
  /// nu -> c nu.
  LevyModel scaled(double c) const;

  /// Is theta admissible for ratio checks: g(theta) > 0 and at least `buffer`
  /// (radians) away from every jump of g.
  bool admissible_direction(std::span<const double> theta, double buffer) const;

  friend LevyModel make_stable(unsigned, double, SphericalDensity);
  friend LevyModel make_relativistic(unsigned, double, double);
  friend LevyModel make_tempered(unsigned, RadialProfile, SphericalDensity, bool);
  friend LevyModel make_compound_poisson(unsigned, RadialProfile, SphericalDensity);
  friend LevyModel make_gaussian(unsigned, Vec);

 private:
  void validate_gaussian() const;

  unsigned dim_ = 1;
  Family family_ = Family::custom;
  Vec drift_;
  Vec gauss_;
  SphericalDensity g_;
  RadialProfile profile_;
  Radial radial_ = Radial::profile;
  double kappa_ = 0.0;
  std::optional<double> alpha_;
  double rel_m_ = 0.0;
  double rel_mu_ = 0.0;
  double rel_c_ = 0.0;   // c_{d,alpha}
  double rel_k_ = 0.0;   // prefactor of s^{-d-alpha} (mu s)^nu K_nu(mu s)
  double scale_ = 1.0;
  double g_int_ = 0.0;
  bool k_infinite_ = false;
  bool no_jumps_ = false;
};

/// nu(x) = |x|^{-alpha-d} g(x/|x|), kappa = 0.
LevyModel make_stable(unsigned dim, double alpha, SphericalDensity g);
/// Relativistic alpha-stable density with mass m; kappa = m^{1/alpha}.
LevyModel make_relativistic(unsigned dim, double alpha, double m);
/// nu(x) = g(x/|x|) f(|x|). A profile failing `classify_profile` is rejected
/// unless `allow_failing` is set (the model is then flagged K-infinite).
LevyModel make_tempered(unsigned dim, RadialProfile profile, SphericalDensity g,
                        bool allow_failing = false);
/// Finite Levy measure of profile shape (inner exponent < d).
LevyModel make_compound_poisson(unsigned dim, RadialProfile profile, SphericalDensity g);
/// Pure Gaussian model (nu = 0), A elliptic.
LevyModel make_gaussian(unsigned dim, Vec a);

/// phi(xi) = int_0^inf e^{-v} v^p (xi + v/2)^p dv by Gauss-Laguerre with node
/// doubling until successive values agree to `rel_tol`.
double relativistic_phi_laguerre(double xi, double p, double rel_tol = 1e-10);
/// Same integral by adaptive (exp-sinh) quadrature.
double relativistic_phi_adaptive(double xi, double p);
/// Closed form through Bessel K: Gamma(p+1) sqrt(2/pi) z^{p+1/2} e^z K_{p+1/2}(z).
double relativistic_phi_bessel(double xi, double p);
/// log K_nu(z) valid for all z > 0 (asymptotic expansion for large z).
double log_bessel_k(double nu, double z);
/// log(e^z K_nu(z)).
double log_bessel_k_scaled(double nu, double z);

/// Per-radius maximum of |nu(s theta - y)/nu(s theta) - e^{kappa <theta,y>}|.
struct ConditionCRow {
  double s = 0.0;
  double max_deviation = 0.0;
  std::size_t excluded = 0;
};
struct ConditionCReport {
  std::vector<ConditionCRow> rows;
  std::vector<Vec> excluded_directions;
};
ConditionCReport check_condition_C(const LevyModel& model, const std::vector<Vec>& thetas,
                                   const std::vector<Vec>& ys, const Vec& s_grid,
                                   double buffer = 0.05);

struct ConditionBReport {
  Vec small_r;
  Vec low_reg;            // nu(|x|>r) / (f(r) r^d)
  double low_reg_min = 0.0;
  Vec k_radii;
  Vec k_values;           // lower-bound estimates of K(r)
  bool k_infinite = false;
  bool k_nonincreasing = true;
  bool k_decays = false;  // last estimate well below the first
};
ConditionBReport check_condition_B(const LevyModel& model, const Vec& small_r,
                                   const Vec& k_radii, double x_max = 256.0);

}  // namespace levyheat
