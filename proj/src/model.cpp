#include "levyheat/model.hpp"

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "levyheat/convolve.hpp"
#include "levyheat/quadrature.hpp"

namespace levyheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  return a < 0 ? a + 2.0 * kPi : a;
}

// Integral of c s^e over [a, b], b possibly infinite.
double power_integral(double c, double e, double a, double b) {
  if (!(b > a)) return 0.0;
  if (std::abs(e + 1.0) < 1e-14) {
    if (a == 0.0 || std::isinf(b)) return kInf;
    return c * std::log(b / a);
  }
  const double ep = e + 1.0;
  if (a == 0.0 && ep <= 0.0) return kInf;
  if (std::isinf(b) && ep >= 0.0) return kInf;
  const double hi = std::isinf(b) ? 0.0 : std::pow(b, ep);
  const double lo = a == 0.0 ? 0.0 : std::pow(a, ep);
  return c * (hi - lo) / ep;
}

// Integral of a positive decaying f over [a, b] (a > 0), b possibly infinite.
double decaying_integral(const quad::Fn& f, double a, double b) {
  if (!(b > a)) return 0.0;
  if (std::isinf(b)) return quad::half_line(f, a, 1e-12).value;
  std::vector<double> pts{a};
  for (double x = 2.0 * a; x < b; x *= 2.0) pts.push_back(x);
  pts.push_back(b);
  return quad::adaptive_pieces(f, pts, 1e-12).value;
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::stable: return "stable";
    case Family::relativistic: return "relativistic";
    case Family::stretched: return "stretched";
    case Family::exponential: return "exponential";
    case Family::compound_poisson: return "compound_poisson";
    case Family::custom: return "custom";
  }
  return "custom";
}

Family family_from_string(const std::string& name) {
  for (Family f : {Family::stable, Family::relativistic, Family::stretched, Family::exponential,
                   Family::compound_poisson, Family::custom})
    if (to_string(f) == name) return f;
  throw ConfigError("unknown family '" + name + "'");
}

// ---- SphericalDensity

SphericalDensity SphericalDensity::constant(unsigned dim, double value) {
  if (dim < 1) throw ConfigError("dimension must be >= 1");
  if (!(value >= 0.0)) throw ConfigError("g must be nonnegative");
  SphericalDensity g;
  g.kind_ = Kind::constant;
  g.dim_ = dim;
  g.a_ = value;
  g.bound_ = value;
  return g;
}

SphericalDensity SphericalDensity::two_sided(double plus, double minus) {
  if (!(plus >= 0.0 && minus >= 0.0)) throw ConfigError("g must be nonnegative");
  SphericalDensity g;
  g.kind_ = Kind::two_sided;
  g.dim_ = 1;
  g.a_ = plus;
  g.b_ = minus;
  g.bound_ = std::max(plus, minus);
  return g;
}

SphericalDensity SphericalDensity::quadrant(double same_sign, double opposite_sign) {
  if (!(same_sign >= 0.0 && opposite_sign >= 0.0)) throw ConfigError("g must be nonnegative");
  SphericalDensity g;
  g.kind_ = Kind::quadrant;
  g.dim_ = 2;
  g.a_ = same_sign;
  g.b_ = opposite_sign;
  g.bound_ = std::max(same_sign, opposite_sign);
  if (same_sign != opposite_sign) g.jumps_ = {0.0, 0.5 * kPi, kPi, 1.5 * kPi};
  return g;
}

SphericalDensity SphericalDensity::cosine(unsigned dim, double a, double b, Vec direction) {
  if (direction.size() != dim) throw ConfigError("cosine g: direction has wrong dimension");
  if (!(a >= std::abs(b))) throw ConfigError("cosine g: need a >= |b| for g >= 0");
  SphericalDensity g;
  g.kind_ = Kind::cosine;
  g.dim_ = dim;
  g.a_ = a;
  g.b_ = b;
  g.dir_ = unit(direction);
  g.bound_ = a + std::abs(b);
  return g;
}

SphericalDensity SphericalDensity::custom(unsigned dim, Fn fn, double upper_bound,
                                          std::vector<double> jump_angles) {
  if (!fn) throw ConfigError("custom g needs a callable");
  SphericalDensity g;
  g.kind_ = Kind::custom;
  g.dim_ = dim;
  g.fn_ = std::move(fn);
  g.bound_ = upper_bound;
  for (double& a : jump_angles) a = wrap_angle(a);
  std::sort(jump_angles.begin(), jump_angles.end());
  g.jumps_ = std::move(jump_angles);
  return g;
}

double SphericalDensity::operator()(std::span<const double> theta) const {
  switch (kind_) {
    case Kind::constant: return a_;
    case Kind::two_sided: return theta[0] >= 0.0 ? a_ : b_;
    case Kind::quadrant: return theta.size() < 2 || theta[0] * theta[1] >= 0.0 ? a_ : b_;
    case Kind::cosine: return a_ + b_ * dot(theta, dir_);
    case Kind::custom: {
      const double v = fn_(theta);
      if (!(v >= 0.0) || v > bound_ * (1.0 + 1e-12))
        throw ConfigError("custom g out of [0, upper bound]");
      return v;
    }
  }
  return 0.0;
}

double SphericalDensity::at_angle(double phi) const {
  const double th[2] = {std::cos(phi), std::sin(phi)};
  return (*this)(th);
}

bool SphericalDensity::symmetric() const {
  switch (kind_) {
    case Kind::constant: return true;
    case Kind::two_sided: return a_ == b_;
    case Kind::quadrant: return true;
    case Kind::cosine: return b_ == 0.0;
    case Kind::custom: break;
  }
  for (const auto& th : quad::sphere_rule(dim_, 64).nodes) {
    const Vec m = scaled(th, -1.0);
    if (std::abs((*this)(th) - (*this)(m)) > 1e-14 * std::max(1.0, bound_)) return false;
  }
  return true;
}

std::vector<double> SphericalDensity::jump_angles() const { return jumps_; }

double SphericalDensity::discontinuity_distance(std::span<const double> theta) const {
  if (dim_ != 2 || jumps_.empty()) return kInf;
  const double phi = wrap_angle(std::atan2(theta[1], theta[0]));
  double best = kInf;
  for (double j : jumps_) {
    const double d = std::abs(phi - j);
    best = std::min(best, std::min(d, 2.0 * kPi - d));
  }
  return best;
}

double SphericalDensity::integral() const {
  switch (kind_) {
    case Kind::constant: return a_ * quad::sphere_area(dim_);
    case Kind::two_sided: return a_ + b_;
    case Kind::quadrant: return kPi * (a_ + b_);
    case Kind::cosine: return a_ * quad::sphere_area(dim_);
    case Kind::custom: break;
  }
  if (dim_ == 2) {
    std::vector<double> pts{0.0};
    pts.insert(pts.end(), jumps_.begin(), jumps_.end());
    pts.push_back(2.0 * kPi);
    return quad::adaptive_pieces([this](double a) { return at_angle(a); }, pts, 1e-12).value;
  }
  const auto rule = quad::sphere_rule(dim_, 512);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * (*this)(rule.nodes[i]);
  return s;
}

Vec SphericalDensity::first_moment() const {
  Vec out(dim_, 0.0);
  switch (kind_) {
    case Kind::constant:
    case Kind::quadrant: return out;
    case Kind::two_sided: out[0] = a_ - b_; return out;
    case Kind::cosine:
      return scaled(dir_, b_ * quad::sphere_area(dim_) / static_cast<double>(dim_));
    case Kind::custom: break;
  }
  if (dim_ == 2) {
    std::vector<double> pts{0.0};
    pts.insert(pts.end(), jumps_.begin(), jumps_.end());
    pts.push_back(2.0 * kPi);
    out[0] = quad::adaptive_pieces([this](double a) { return std::cos(a) * at_angle(a); },
                                   pts, 1e-12).value;
    out[1] = quad::adaptive_pieces([this](double a) { return std::sin(a) * at_angle(a); },
                                   pts, 1e-12).value;
    return out;
  }
  const auto rule = quad::sphere_rule(dim_, 512);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double w = rule.weights[i] * (*this)(rule.nodes[i]);
    for (unsigned k = 0; k < dim_; ++k) out[k] += w * rule.nodes[i][k];
  }
  return out;
}

// ---- RadialProfile

double RadialProfile::operator()(double s) const { return std::exp(log_value(s)); }

double RadialProfile::log_value(double s) const {
  if (s <= 0.0) return inner_exponent > 0.0 ? kInf : std::log(c0) - m;
  if (s <= 1.0) return std::log(c0) - m - inner_exponent * std::log(s);
  return std::log(c0) - m * std::pow(s, beta) - delta * std::log(s);
}

void RadialProfile::validate() const {
  if (dim < 1) throw ConfigError("profile dimension must be >= 1");
  if (!(m >= 0.0 && beta >= 0.0 && delta >= 0.0 && inner_exponent >= 0.0))
    throw ConfigError("profile parameters m, beta, delta, gamma must be >= 0");
  if (!(c0 > 0.0)) throw ConfigError("profile constant c0 must be > 0");
  if (m == 0.0 && delta <= static_cast<double>(dim) && !finite_near_zero())
    throw ConfigError("profile tail is not integrable at infinity");
}

std::string to_string(ProfileClass::Verdict v) {
  switch (v) {
    case ProfileClass::Verdict::poly_ok: return "POLY_OK";
    case ProfileClass::Verdict::stretched_ok: return "STRETCHED_OK";
    case ProfileClass::Verdict::exp_ok: return "EXP_OK";
    case ProfileClass::Verdict::fails: return "FAILS";
  }
  return "FAILS";
}

ProfileClass classify_profile(double m, double beta, double delta, unsigned dim) {
  ProfileClass pc{m, beta, delta, dim, ProfileClass::Verdict::fails};
  const double d = dim;
  if (m == 0.0 && delta > d)
    pc.verdict = ProfileClass::Verdict::poly_ok;
  else if (m > 0.0 && beta > 0.0 && beta < 1.0)
    pc.verdict = ProfileClass::Verdict::stretched_ok;
  else if (m > 0.0 && beta == 1.0 && delta > 0.5 * (d + 1.0))
    pc.verdict = ProfileClass::Verdict::exp_ok;
  return pc;
}

// ---- Bessel / phi

double log_bessel_k(double nu, double z) {
  if (!(z > 0.0)) throw ConfigError("log_bessel_k needs z > 0");
  nu = std::abs(nu);
  if (z < 1e-8 && nu > 0.0) return std::lgamma(nu) - std::log(2.0) + nu * std::log(2.0 / z);
  if (z < 600.0) return std::log(boost::math::cyl_bessel_k(nu, z));
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 8; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * z);
    sum += term;
  }
  return 0.5 * std::log(kPi / (2.0 * z)) - z + std::log(sum);
}

double log_bessel_k_scaled(double nu, double z) {
  if (z < 600.0) return log_bessel_k(nu, z) + z;
  nu = std::abs(nu);
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 8; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * z);
    sum += term;
  }
  return 0.5 * std::log(kPi / (2.0 * z)) + std::log(sum);
}

double relativistic_phi_laguerre(double xi, double p, double rel_tol) {
  if (xi == 0.0) {
    // integrand collapses to 2^{-p} v^{2p} e^{-v}
    const auto& r = quad::gauss_laguerre(8, 2.0 * p);
    double s = 0.0;
    for (double w : r.weights) s += w;
    return s * std::pow(2.0, -p);
  }
  double prev = NAN;
  for (unsigned n = 16; n <= 512; n *= 2) {
    const auto& r = quad::gauss_laguerre(n, p);
    double s = 0.0;
    for (unsigned i = 0; i < n; ++i) s += r.weights[i] * std::pow(xi + 0.5 * r.nodes[i], p);
    if (std::abs(s - prev) <= rel_tol * std::abs(s)) return s;
    prev = s;
  }
  throw NumericalError("phi Gauss-Laguerre did not converge at xi = " + std::to_string(xi));
}

double relativistic_phi_adaptive(double xi, double p) {
  return quad::half_line(
             [=](double v) {
               if (v == 0.0) return xi == 0.0 || p > 0 ? 0.0 : 1.0;
               return std::exp(-v + p * std::log(v) + p * std::log(xi + 0.5 * v));
             },
             0.0, 1e-13)
      .value;
}

double relativistic_phi_bessel(double xi, double p) {
  if (xi == 0.0) return std::pow(2.0, -p) * std::tgamma(2.0 * p + 1.0);
  const double nu = p + 0.5;
  return std::exp(std::lgamma(p + 1.0) + 0.5 * std::log(2.0 / kPi) + nu * std::log(xi) + xi +
                  log_bessel_k(nu, xi));
}

// ---- LevyModel

bool LevyModel::has_gaussian() const {
  return std::any_of(gauss_.begin(), gauss_.end(), [](double v) { return v != 0.0; });
}

double LevyModel::gaussian_ellipticity() const {
  Eigen::MatrixXd a(dim_, dim_);
  for (unsigned i = 0; i < dim_; ++i)
    for (unsigned j = 0; j < dim_; ++j) a(i, j) = gauss_[i * dim_ + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double LevyModel::quad_form(std::span<const double> xi) const {
  double s = 0.0;
  for (unsigned i = 0; i < dim_; ++i)
    for (unsigned j = 0; j < dim_; ++j) s += xi[i] * gauss_[i * dim_ + j] * xi[j];
  return s;
}

void LevyModel::validate_gaussian() const {
  if (gauss_.size() != dim_ * dim_) throw ConfigError("A must be d x d");
  for (unsigned i = 0; i < dim_; ++i)
    for (unsigned j = 0; j < i; ++j)
      if (std::abs(gauss_[i * dim_ + j] - gauss_[j * dim_ + i]) > 1e-14)
        throw ConfigError("A must be symmetric");
  if (has_gaussian() && !(gaussian_ellipticity() > 1e-12))
    throw ConfigError("A must be zero or uniformly elliptic");
}

double LevyModel::radial(double s) const {
  if (no_jumps_) return 0.0;
  return std::exp(log_radial(s));
}

double LevyModel::log_radial(double s) const {
  if (no_jumps_) return -kInf;
  const double d = dim_;
  double v = 0.0;
  switch (radial_) {
    case Radial::power: v = -(*alpha_ + d) * std::log(s); break;
    case Radial::relativistic: {
      const double nu = 0.5 * (d + *alpha_);
      const double z = rel_mu_ * s;
      v = std::log(rel_k_) - (d + *alpha_) * std::log(s) + nu * std::log(z) + log_bessel_k(nu, z);
      break;
    }
    case Radial::profile: v = profile_.log_value(s); break;
  }
  return v + std::log(scale_);
}

double LevyModel::log_radial_tilted(double s, double u) const {
  if (no_jumps_) return -kInf;
  const double d = dim_;
  if (radial_ == Radial::relativistic) {
    const double nu = 0.5 * (d + *alpha_);
    const double z = rel_mu_ * s;
    return std::log(rel_k_) - (d + *alpha_) * std::log(s) + nu * std::log(z) +
           log_bessel_k_scaled(nu, z) + (u - rel_mu_) * s + std::log(scale_);
  }
  if (radial_ == Radial::profile && s > 1.0 && profile_.beta == 1.0) {
    return std::log(profile_.c0) + (u - profile_.m) * s - profile_.delta * std::log(s) +
           std::log(scale_);
  }
  return log_radial(s) + u * s;
}

double LevyModel::log_density1_tilted(double y, double a) const {
  if (no_jumps_ || y == 0.0) return -kInf;
  const double th = y > 0.0 ? 1.0 : -1.0;
  const double g = g_(std::span<const double>(&th, 1));
  return g == 0.0 ? -kInf : std::log(g) + log_radial_tilted(std::abs(y), a * th);
}

double LevyModel::density(std::span<const double> x) const {
  if (no_jumps_) return 0.0;
  const double s = norm(x);
  if (s == 0.0) return 0.0;
  Vec th = levyheat::scaled(x, 1.0 / s);
  const double g = g_(th);
  return g == 0.0 ? 0.0 : g * radial(s);
}

double LevyModel::log_density(std::span<const double> x) const {
  if (no_jumps_) return -kInf;
  const double s = norm(x);
  if (s == 0.0) return -kInf;
  Vec th = levyheat::scaled(x, 1.0 / s);
  const double g = g_(th);
  return g == 0.0 ? -kInf : std::log(g) + log_radial(s);
}

double LevyModel::density1(double y) const {
  if (no_jumps_ || y == 0.0) return 0.0;
  const double th = y > 0 ? 1.0 : -1.0;
  const double g = g_(std::span<const double>(&th, 1));
  return g == 0.0 ? 0.0 : g * radial(std::abs(y));
}

double LevyModel::log_density1(double y) const {
  if (no_jumps_ || y == 0.0) return -kInf;
  const double th = y > 0 ? 1.0 : -1.0;
  const double g = g_(std::span<const double>(&th, 1));
  return g == 0.0 ? -kInf : std::log(g) + log_radial(std::abs(y));
}

double LevyModel::radial_integral(double a, double b, double k) const {
  if (no_jumps_ || !(b > a)) return 0.0;
  const double d = dim_;
  switch (radial_) {
    case Radial::power: return scale_ * power_integral(1.0, k - *alpha_ - d, a, b);
    case Radial::profile: {
      const auto& p = profile_;
      double s = 0.0;
      if (a < 1.0) s += power_integral(p.c0 * std::exp(-p.m), k - p.inner_exponent, a, std::min(b, 1.0));
      if (b > 1.0) {
        const double lo = std::max(a, 1.0);
        if (p.m == 0.0) {
          s += power_integral(p.c0, k - p.delta, lo, b);
        } else {
          s += decaying_integral(
              [&](double u) { return std::exp(p.log_value(u) + k * std::log(u)); }, lo, b);
        }
      }
      return scale_ * s;
    }
    case Radial::relativistic: {
      auto f = [&](double u) { return std::exp(log_radial(u) + k * std::log(u)); };
      double s = 0.0;
      if (a < 1.0) {
        const double hi = std::min(b, 1.0);
        if (a == 0.0) {
          if (k - d - *alpha_ <= -1.0) return kInf;
          s += quad::endpoint_singular(f, 0.0, hi, 1e-12).value;
        } else {
          std::vector<double> pts{a};
          for (double x = 2.0 * a; x < hi; x *= 2.0) pts.push_back(x);
          pts.push_back(hi);
          s += quad::adaptive_pieces(f, pts, 1e-12).value;
        }
      }
      if (b > 1.0) s += decaying_integral(f, std::max(a, 1.0), b);
      return s;
    }
  }
  return 0.0;
}

double LevyModel::total_mass() const {
  if (no_jumps_) return 0.0;
  if (!finite_mass()) return kInf;
  return tail_mass(0.0);
}

double LevyModel::tail_mass(double r) const {
  if (no_jumps_) return 0.0;
  return g_int_ * radial_integral(r, kInf, dim_ - 1.0);
}

double LevyModel::low_reg_ratio(double r) const {
  return tail_mass(r) / (profile_(r) * std::pow(r, dim_));
}

double LevyModel::relativistic_phi(double xi) const {
  if (radial_ != Radial::relativistic) throw ConfigError("not a relativistic model");
  return relativistic_phi_laguerre(xi, 0.5 * (dim_ + *alpha_ - 1.0));
}

LevyModel LevyModel::with_drift(Vec b) const {
  if (b.size() != dim_) throw ConfigError("drift has wrong dimension");
  LevyModel out = *this;
  out.drift_ = std::move(b);
  return out;
}

LevyModel LevyModel::with_gaussian(Vec a) const {
  LevyModel out = *this;
  out.gauss_ = std::move(a);
  out.validate_gaussian();
  return out;
}

LevyModel LevyModel::scaled(double c) const {
  if (!(c > 0.0)) throw ConfigError("scale must be > 0");
  LevyModel out = *this;
  out.scale_ *= c;
  return out;
}

bool LevyModel::admissible_direction(std::span<const double> theta, double buffer) const {
  return g_(theta) > 0.0 && g_.discontinuity_distance(theta) > buffer;
}

namespace {

LevyModel base(unsigned dim) {
  if (dim < 1 || dim > 3) throw ConfigError("dimension must be 1, 2 or 3");
  return LevyModel{};
}

void check_g(const SphericalDensity& g, unsigned dim) {
  if (g.dim() != dim) throw ConfigError("g has wrong dimension");
  if (!(g.integral() > 0.0)) throw ConfigError("degenerate g: integral over the sphere is 0");
}

}  // namespace

LevyModel make_stable(unsigned dim, double alpha, SphericalDensity g) {
  LevyModel mdl = base(dim);
  if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("alpha must lie in (0, 2)");
  check_g(g, dim);
  mdl.dim_ = dim;
  mdl.family_ = Family::stable;
  mdl.drift_.assign(dim, 0.0);
  mdl.gauss_.assign(dim * dim, 0.0);
  mdl.g_int_ = g.integral();
  mdl.g_ = std::move(g);
  mdl.radial_ = LevyModel::Radial::power;
  mdl.alpha_ = alpha;
  mdl.profile_ = RadialProfile{dim, alpha + dim, 0.0, 0.0, alpha + dim, 1.0};
  return mdl;
}

LevyModel make_relativistic(unsigned dim, double alpha, double m) {
  LevyModel mdl = base(dim);
  if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("alpha must lie in (0, 2)");
  if (!(m > 0.0)) throw ConfigError("relativistic mass m must be > 0");
  const double d = dim;
  const double p = 0.5 * (d + alpha - 1.0);
  const double phi0 = std::pow(2.0, -p) * std::tgamma(2.0 * p + 1.0);
  mdl.dim_ = dim;
  mdl.family_ = Family::relativistic;
  mdl.drift_.assign(dim, 0.0);
  mdl.gauss_.assign(dim * dim, 0.0);
  mdl.g_ = SphericalDensity::constant(dim, 1.0);
  mdl.g_int_ = mdl.g_.integral();
  mdl.radial_ = LevyModel::Radial::relativistic;
  mdl.alpha_ = alpha;
  mdl.rel_m_ = m;
  mdl.rel_mu_ = std::pow(m, 1.0 / alpha);
  mdl.rel_c_ = std::tgamma(0.5 * (d + alpha)) /
               (std::pow(kPi, 0.5 * d) * std::pow(2.0, -alpha) *
                std::abs(std::tgamma(-0.5 * alpha)) * phi0);
  mdl.rel_k_ = mdl.rel_c_ * std::tgamma(p + 1.0) * std::sqrt(2.0 / kPi);
  mdl.kappa_ = mdl.rel_mu_;
  mdl.profile_ = RadialProfile{dim, d + alpha, mdl.rel_mu_, 1.0, 0.5 * (d + alpha + 1.0),
                               std::exp(mdl.rel_mu_)};
  return mdl;
}

LevyModel make_tempered(unsigned dim, RadialProfile profile, SphericalDensity g,
                        bool allow_failing) {
  LevyModel mdl = base(dim);
  profile.dim = dim;
  profile.validate();
  check_g(g, dim);
  if (profile.m > 0.0 && profile.beta > 1.0)
    throw ConfigError("beta > 1 with m > 0: no exponential rate kappa exists");
  const auto pc = classify_profile(profile.m, profile.beta, profile.delta, dim);
  const bool fails = pc.verdict == ProfileClass::Verdict::fails;
  if (fails && !allow_failing)
    throw ConfigError("profile fails the K(r) -> 0 classification (" + to_string(pc.verdict) +
                      "); pass the override to construct it anyway");
  mdl.dim_ = dim;
  if (profile.m > 0.0 && profile.beta == 1.0)
    mdl.family_ = Family::exponential;
  else if (profile.m > 0.0 && profile.beta > 0.0)
    mdl.family_ = Family::stretched;
  else
    mdl.family_ = Family::custom;
  mdl.drift_.assign(dim, 0.0);
  mdl.gauss_.assign(dim * dim, 0.0);
  mdl.g_int_ = g.integral();
  mdl.g_ = std::move(g);
  mdl.radial_ = LevyModel::Radial::profile;
  mdl.kappa_ = (profile.m > 0.0 && profile.beta == 1.0) ? profile.m : 0.0;
  mdl.profile_ = profile;
  mdl.k_infinite_ = fails;
  return mdl;
}

LevyModel make_compound_poisson(unsigned dim, RadialProfile profile, SphericalDensity g) {
  profile.dim = dim;
  if (!profile.finite_near_zero())
    throw ConfigError("compound Poisson needs inner exponent < d (finite measure)");
  LevyModel mdl = make_tempered(dim, profile, std::move(g), false);
  mdl.family_ = Family::compound_poisson;
  return mdl;
}

LevyModel make_gaussian(unsigned dim, Vec a) {
  LevyModel mdl = base(dim);
  mdl.dim_ = dim;
  mdl.family_ = Family::custom;
  mdl.drift_.assign(dim, 0.0);
  mdl.gauss_ = std::move(a);
  mdl.g_ = SphericalDensity::constant(dim, 0.0);
  mdl.no_jumps_ = true;
  mdl.validate_gaussian();
  if (!mdl.has_gaussian()) throw ConfigError("Gaussian model needs A != 0");
  return mdl;
}

// ---- diagnostics

ConditionCReport check_condition_C(const LevyModel& model, const std::vector<Vec>& thetas,
                                   const std::vector<Vec>& ys, const Vec& s_grid, double buffer) {
  ConditionCReport rep;
  std::vector<Vec> units;
  for (const auto& th : thetas) {
    Vec u = unit(th);
    if (!model.admissible_direction(u, buffer))
      rep.excluded_directions.push_back(u);
    else
      units.push_back(std::move(u));
  }
  const double kappa = model.kappa();
  for (double s : s_grid) {
    ConditionCRow row{s, 0.0, rep.excluded_directions.size()};
    for (const auto& u : units) {
      const Vec x = scaled(u, s);
      const double base_log = model.log_density(x);
      for (const auto& y : ys) {
        Vec xy = x;
        for (unsigned k = 0; k < model.dim(); ++k) xy[k] -= y[k];
        const double ratio = std::exp(model.log_density(xy) - base_log);
        const double dev = std::abs(ratio - std::exp(kappa * dot(u, y)));
        row.max_deviation = std::max(row.max_deviation, dev);
      }
    }
    rep.rows.push_back(row);
  }
  return rep;
}

ConditionBReport check_condition_B(const LevyModel& model, const Vec& small_r,
                                   const Vec& k_radii, double x_max) {
  if (small_r.empty() && k_radii.empty()) throw ConfigError("condition (B): empty grids");
  ConditionBReport rep;
  rep.small_r = small_r;
  rep.low_reg_min = kInf;
  for (double r : small_r) {
    const double v = model.low_reg_ratio(r);
    rep.low_reg.push_back(v);
    rep.low_reg_min = std::min(rep.low_reg_min, v);
  }
  if (!k_radii.empty()) {
    const auto table = k_table(model.profile(), k_radii, x_max);
    rep.k_radii = k_radii;
    for (const auto& e : table) {
      rep.k_values.push_back(e.value);
      rep.k_infinite = rep.k_infinite || e.divergent;
    }
    for (std::size_t i = 1; i < rep.k_values.size(); ++i)
      if (rep.k_values[i] > rep.k_values[i - 1] * (1.0 + 1e-9)) rep.k_nonincreasing = false;
    rep.k_decays = !rep.k_infinite && rep.k_values.back() < 0.5 * rep.k_values.front();
  }
  return rep;
}

}  // namespace levyheat
