#include "levyheat/symbol.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "levyheat/quadrature.hpp"

namespace levyheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kEulerGamma = boost::math::constants::euler<double>();

bool exp_decaying_tail(const LevyModel& m) {
  if (m.radial_kind() == LevyModel::Radial::relativistic) return true;
  const auto& p = m.profile();
  return m.radial_kind() == LevyModel::Radial::profile && p.m > 0.0 && p.beta > 0.0;
}

double log_F(const LevyModel& m, double s) {
  return m.log_radial(s) + (m.dim() - 1.0) * std::log(s);
}

// (1 - cos x) e^{lf} and (x - sin x) e^{lf} without 0 * inf near x = 0
double omc_exp(double x, double lf) {
  if (x < 1e-4) return std::exp(2.0 * std::log(x) - std::log(2.0) + lf) * (1.0 - x * x / 12.0);
  return quad::one_minus_cos(x) * std::exp(lf);
}
double emx_exp(double x, double lf) {
  if (std::abs(x) < 1e-4) return std::exp(2.0 * std::log(std::abs(x)) - std::log(2.0) + lf) * (1.0 + x / 3.0);
  return quad::expm1_minus_x(x) * std::exp(lf);
}
double xms_exp(double x, double lf) {
  if (x < 1e-3) return std::exp(3.0 * std::log(x) - std::log(6.0) + lf) * (1.0 - x * x / 20.0);
  return -quad::sin_minus_x(x) * std::exp(lf);
}

// Sum of Gauss rules over blocks no wider than `w`.
template <class Fre, class Fim>
void blocked(double a, double b, double w, const Fre& fre, const Fim& fim, SymbolValue& out) {
  double s = a;
  while (s < b) {
    const double e = std::min(b, s + w);
    out.re += quad::gauss20(fre, s, e);
    out.im += quad::gauss20(fim, s, e);
    s = e;
  }
}

// (int_c^inf cos(a s) F, int_c^inf sin(a s) F) for a > 0 by Ooura's method.
std::pair<double, double> fourier_tail(const quad::Fn& F, double c, double a) {
  thread_local boost::math::quadrature::ooura_fourier_cos<double> oc(1e-12, 8);
  thread_local boost::math::quadrature::ooura_fourier_sin<double> os(1e-12, 8);
  auto g = [&](double t) { return F(c + t); };
  const double C = oc.integrate(g, a).first;
  const double S = os.integrate(g, a).first;
  const double ca = std::cos(a * c);
  const double sa = std::sin(a * c);
  return {ca * C - sa * S, sa * C + ca * S};
}

// Point beyond which F is negligible (exponentially decaying tails).
double decay_cutoff(const LevyModel& m, double c) {
  const double ref = log_F(m, c) + std::log(std::max(c, 1.0));
  double S = std::max(2.0 * c, 2.0);
  while (log_F(m, S) + std::log(S) > ref - 46.0 && S < 1e8) S *= 1.5;
  return S;
}

SymbolValue radial_numeric(const LevyModel& m, double u, double lo, double hi) {
  SymbolValue out;
  const double a = std::abs(u);
  if (a == 0.0 || !(hi > lo)) return out;
  const double dm1 = m.dim() - 1.0;
  auto F = [&](double s) { return std::exp(m.log_radial(s) + dm1 * std::log(s)); };
  auto fre = [&](double s) { return s > 0.0 ? omc_exp(s * a, log_F(m, s)) : 0.0; };
  auto fim = [&](double s) {
    if (!(s > 0.0)) return 0.0;
    const double x = s * a;
    return s < 1.0 ? xms_exp(x, log_F(m, s)) : -std::sin(x) * F(s);
  };

  // non-oscillatory head [lo, s0]
  const double s0 = std::min(hi, std::max(lo, 1.0 / a));
  if (s0 > lo) {
    std::vector<double> pts{lo};
    if (lo < 1.0 && s0 > 1.0) pts.push_back(1.0);
    pts.push_back(s0);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (pts[i] == 0.0) {
        out.re += quad::endpoint_singular(fre, 0.0, pts[i + 1], 1e-13).value;
        out.im += quad::endpoint_singular(fim, 0.0, pts[i + 1], 1e-13).value;
      } else {
        out.re += quad::adaptive(fre, pts[i], pts[i + 1], 1e-13).value;
        out.im += quad::adaptive(fim, pts[i], pts[i + 1], 1e-13).value;
      }
    }
  }
  const double half = kPi / a;
  // oscillatory part below 1
  if (s0 < 1.0 && hi > s0) blocked(s0, std::min(hi, 1.0), half, fre, fim, out);
  // oscillatory part above 1
  const double c = std::max(s0, 1.0);
  if (hi > c) {
    if (std::isfinite(hi)) {
      blocked(c, hi, half, fre, fim, out);
    } else {
      const bool decays = exp_decaying_tail(m);
      const double S = decays ? decay_cutoff(m, c) : kInf;
      if (decays && a * (S - c) / kPi < 2000.0) {
        blocked(c, S, half, fre, fim, out);
      } else {
        const auto [ci, si] = fourier_tail(F, c, a);
        out.re += m.radial_integral(c, kInf, dm1) - ci;
        out.im += -si;
      }
    }
  }
  if (u < 0.0) out.im = -out.im;
  return out;
}

// coefficient and exponent when rho(s) s^{d-1} = c s^e on (0, top]
bool power_head(const LevyModel& m, double& c, double& e, double& top) {
  const double d = m.dim();
  if (m.radial_kind() == LevyModel::Radial::power) {
    c = m.scale();
    e = -1.0 - *m.alpha();
    top = 1.0;
    return true;
  }
  if (m.radial_kind() == LevyModel::Radial::profile) {
    const auto& p = m.profile();
    c = m.scale() * p.c0 * std::exp(-p.m);
    e = -p.inner_exponent + d - 1.0;
    top = 1.0;
    return true;
  }
  return false;
}

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

}  // namespace

double stable_radial_re(double alpha, double u) {
  const double a = std::abs(u);
  if (alpha == 1.0) return 0.5 * kPi * a;
  return std::tgamma(1.0 - alpha) * std::cos(0.5 * kPi * alpha) / alpha * std::pow(a, alpha);
}

double stable_radial_im(double alpha, double u) {
  if (u == 0.0) return 0.0;
  if (alpha == 1.0) return -u * (1.0 - kEulerGamma) + u * std::log(std::abs(u));
  return sgn(u) * std::pow(std::abs(u), alpha) * std::tgamma(-alpha) *
             std::sin(0.5 * kPi * alpha) +
         u / (1.0 - alpha);
}

SymbolValue radial_symbol(const LevyModel& model, double u, double lo, double hi) {
  if (model.no_jumps() || u == 0.0) return {};
  if (model.radial_kind() == LevyModel::Radial::power && lo == 0.0 && std::isinf(hi)) {
    const double al = *model.alpha();
    return {model.scale() * stable_radial_re(al, u), model.scale() * stable_radial_im(al, u)};
  }
  if (model.radial_kind() == LevyModel::Radial::power && std::isinf(hi) && lo > 0.0) {
    const SymbolValue full = radial_symbol(model, u);
    const SymbolValue head = radial_numeric(model, u, 0.0, lo);
    return {full.re - head.re, full.im - head.im};
  }
  return radial_numeric(model, u, lo, hi);
}

std::vector<SymbolValue> radial_symbol_line(const LevyModel& model, double du,
                                            std::size_t count, double lo, double hi) {
  std::vector<SymbolValue> out(count);
  if (model.no_jumps() || count == 0) return out;
  double c = 0.0, e = 0.0, top = 0.0;
  const bool stable_full = model.radial_kind() == LevyModel::Radial::power && std::isinf(hi);
  if (stable_full && lo == 0.0) {
    for (std::size_t k = 1; k < count; ++k) out[k] = radial_symbol(model, k * du);
    return out;
  }
  const bool head = power_head(model, c, e, top);
  // range handled by the cumulative scaled integral
  double P = 0.0;
  if (head && (lo == 0.0 || (stable_full && lo <= 1.0))) P = stable_full ? lo : std::min(hi, top);
  if (P > 0.0) {
    // G(X) = int_0^X (1 - cos v) v^e dv, H(X) = int_0^X (v - sin v) v^e dv
    auto g = [e](double v) { return v > 0.0 ? omc_exp(v, e * std::log(v)) : 0.0; };
    auto h = [e](double v) { return v > 0.0 ? xms_exp(v, e * std::log(v)) : 0.0; };
    const double X1 = P * du;
    double G = quad::endpoint_singular(g, 0.0, X1, 1e-14).value;
    double H = quad::endpoint_singular(h, 0.0, X1, 1e-14).value;
    for (std::size_t k = 1; k < count; ++k) {
      if (k > 1) {
        const double a = P * du * (k - 1.0);
        const double b = P * du * static_cast<double>(k);
        G += quad::blocked_gauss(g, a, b, 1.0);
        H += quad::blocked_gauss(h, a, b, 1.0);
      }
      const double u = du * static_cast<double>(k);
      const double sc = c * std::pow(u, -e - 1.0);
      out[k] = {sc * G, sc * H};
    }
    if (stable_full) {
      for (std::size_t k = 1; k < count; ++k) {
        const SymbolValue f = radial_symbol(model, k * du);
        out[k] = {f.re - out[k].re, f.im - out[k].im};
      }
      return out;
    }
  }
  const double rest_lo = std::max(lo, P);
  if (hi > rest_lo) {
    parallel_for(count - 1, [&](std::size_t i) {
      const std::size_t k = i + 1;
      const SymbolValue r = radial_numeric(model, k * du, rest_lo, hi);
      out[k].re += r.re;
      out[k].im += r.im;
    });
  }
  return out;
}

namespace {

template <class RS>
SymbolValue angular(const LevyModel& model, std::span<const double> xi, const RS& rs) {
  const unsigned d = model.dim();
  const auto& g = model.angular();
  SymbolValue out;
  if (d == 1) {
    const double pl = 1.0, mi = -1.0;
    const double p1 = g(std::span<const double>(&pl, 1));
    const double m1 = g(std::span<const double>(&mi, 1));
    const SymbolValue r = rs(xi[0]);
    out.re = (p1 + m1) * r.re;
    out.im = (p1 - m1) * r.im;
    return out;
  }
  if (d == 2) {
    const double phx = std::atan2(xi[1], xi[0]);
    const double rho = norm(xi);
    std::vector<double> pts{0.0, 2.0 * kPi};
    for (double j : g.jump_angles()) pts.push_back(j);
    for (double k : {phx + 0.5 * kPi, phx - 0.5 * kPi, phx + 1.5 * kPi, phx - 1.5 * kPi, phx,
                     phx + kPi, phx - kPi})
      if (k > 0.0 && k < 2.0 * kPi) pts.push_back(k);
    std::sort(pts.begin(), pts.end());
    auto fre = [&](double a) {
      const double gv = g.at_angle(a);
      return gv == 0.0 ? 0.0 : gv * rs(rho * std::cos(a - phx)).re;
    };
    auto fim = [&](double a) {
      const double gv = g.at_angle(a);
      return gv == 0.0 ? 0.0 : gv * rs(rho * std::cos(a - phx)).im;
    };
    out.re = quad::adaptive_pieces(fre, pts, 1e-11, 12).value;
    out.im = quad::adaptive_pieces(fim, pts, 1e-11, 12).value;
    return out;
  }
  const auto rule = quad::sphere_rule(d, 128);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double gv = g(rule.nodes[i]);
    if (gv == 0.0) continue;
    const SymbolValue r = rs(dot(xi, rule.nodes[i]));
    out.re += rule.weights[i] * gv * r.re;
    out.im += rule.weights[i] * gv * r.im;
  }
  return out;
}

}  // namespace

SymbolValue phi(const LevyModel& model, std::span<const double> xi) {
  if (model.no_jumps() || norm(xi) == 0.0) return {};
  if (model.radial_kind() == LevyModel::Radial::relativistic) {
    const double al = *model.alpha();
    const double mu = model.rel_mu();
    const double r2 = dot(xi, xi);
    return {model.scale() * (std::pow(mu * mu + r2, 0.5 * al) - model.rel_mass()), 0.0};
  }
  return angular(model, xi, [&](double u) { return radial_symbol(model, u); });
}

SymbolValue phi_band(const LevyModel& model, std::span<const double> xi, double lo, double hi) {
  if (model.no_jumps() || norm(xi) == 0.0) return {};
  return angular(model, xi, [&](double u) { return radial_symbol(model, u, lo, hi); });
}

std::complex<double> psi(const LevyModel& model, std::span<const double> xi) {
  const SymbolValue p = phi(model, xi);
  return {model.quad_form(xi) + p.re, p.im - dot(xi, model.drift())};
}

double re_phi(const LevyModel& model, std::span<const double> xi) { return phi(model, xi).re; }

// ---- StableDirectionTable

StableDirectionTable::StableDirectionTable(const LevyModel& model, unsigned angles) {
  if (model.radial_kind() != LevyModel::Radial::power || model.dim() != 2)
    throw ConfigError("direction table needs a d = 2 stable model");
  alpha_ = *model.alpha();
  m1_ = scaled(model.angular().first_moment(), model.scale());
  re_.resize(angles);
  im_.resize(angles);
  const double sc = model.scale();
  const double al = alpha_;
  const auto& g = model.angular();
  // Omega(w) = int g(theta) [C |<w,theta>|^alpha + i I~(<w,theta>)] dtheta
  auto rs = [al](double v) {
    SymbolValue s;
    s.re = stable_radial_re(al, v);
    if (v != 0.0) {
      s.im = al == 1.0 ? -v * (1.0 - kEulerGamma) + v * std::log(std::abs(v))
                       : sgn(v) * std::pow(std::abs(v), al) * std::tgamma(-al) *
                             std::sin(0.5 * kPi * al);
    }
    return s;
  };
  parallel_for(angles, [&](std::size_t j) {
    const double ph = 2.0 * kPi * j / angles;
    std::vector<double> pts{0.0, 2.0 * kPi};
    for (double jj : g.jump_angles()) pts.push_back(jj);
    for (double k : {ph + 0.5 * kPi, ph - 0.5 * kPi, ph + 1.5 * kPi, ph - 1.5 * kPi})
      if (k > 0.0 && k < 2.0 * kPi) pts.push_back(k);
    std::sort(pts.begin(), pts.end());
    re_[j] = sc * quad::adaptive_pieces(
                      [&](double a) { return g.at_angle(a) * rs(std::cos(a - ph)).re; }, pts,
                      1e-12, 12)
                      .value;
    im_[j] = sc * quad::adaptive_pieces(
                      [&](double a) { return g.at_angle(a) * rs(std::cos(a - ph)).im; }, pts,
                      1e-12, 12)
                      .value;
  });
  max_re_ = *std::max_element(re_.begin(), re_.end());
}

SymbolValue StableDirectionTable::operator()(std::span<const double> xi) const {
  const double rho = norm(xi);
  if (rho == 0.0) return {};
  const std::size_t n = re_.size();
  double ph = std::atan2(xi[1], xi[0]);
  if (ph < 0) ph += 2.0 * kPi;
  const double x = ph / (2.0 * kPi) * n;
  const auto i0 = static_cast<std::ptrdiff_t>(std::floor(x));
  const double f = x - i0;
  // 4-point Lagrange on the periodic table
  const double w[4] = {-f * (f - 1) * (f - 2) / 6.0, (f + 1) * (f - 1) * (f - 2) / 2.0,
                       -(f + 1) * f * (f - 2) / 2.0, (f + 1) * f * (f - 1) / 6.0};
  double re = 0.0, im = 0.0;
  for (int k = 0; k < 4; ++k) {
    const std::size_t idx = static_cast<std::size_t>(((i0 - 1 + k) % static_cast<std::ptrdiff_t>(n) + n) % n);
    re += w[k] * re_[idx];
    im += w[k] * im_[idx];
  }
  const double ra = std::pow(rho, alpha_);
  SymbolValue out{ra * re, ra * im};
  const double wm = dot(xi, m1_) / rho;
  if (wm != 0.0) out.im += rho * wm * (alpha_ == 1.0 ? std::log(rho) : 1.0 / (1.0 - alpha_));
  return out;
}

// ---- PsiTable

PsiTable::PsiTable(const LevyModel& model, double r_min, double r_max, unsigned per_decade) {
  if (model.no_jumps()) {
    kind_ = Kind::none;
    sup_ = 0.0;
    finite_ = true;
    return;
  }
  if (model.radial_kind() == LevyModel::Radial::relativistic) {
    kind_ = Kind::relativistic;
    alpha_ = *model.alpha();
    m_ = model.rel_mass();
    mu_ = model.rel_mu();
    c_ = model.scale();
    return;
  }
  if (model.radial_kind() == LevyModel::Radial::power) {
    kind_ = Kind::stable;
    alpha_ = *model.alpha();
    if (model.dim() == 1) {
      const Vec e{1.0};
      c_ = re_phi(model, e);
    } else {
      // direction sampling, doubled until the sup settles
      double prev = -1.0;
      for (unsigned n = 64; n <= 4096; n *= 2) {
        const auto rule = quad::sphere_rule(model.dim(), model.dim() == 2 ? n : n / 8);
        double best = 0.0;
        for (const auto& w : rule.nodes) best = std::max(best, re_phi(model, w));
        c_ = best;
        if (std::abs(best - prev) <= 1e-6 * best) break;
        prev = best;
      }
    }
    return;
  }
  kind_ = Kind::table;
  finite_ = model.finite_mass();
  const double lmin = std::log10(r_min);
  const double lmax = std::log10(r_max);
  const auto n = static_cast<std::size_t>(std::ceil((lmax - lmin) * per_decade)) + 1;
  r_.resize(n);
  v_.resize(n);
  std::vector<Vec> dirs;
  if (model.dim() == 1)
    dirs = {{1.0}};
  else
    dirs = quad::sphere_rule(model.dim(), 16).nodes;
  Vec raw(n);
  parallel_for(n, [&](std::size_t i) {
    const double r = std::pow(10.0, lmin + (lmax - lmin) * i / (n - 1.0));
    r_[i] = r;
    double best = 0.0;
    for (const auto& w : dirs) best = std::max(best, re_phi(model, scaled(w, r)));
    raw[i] = best;
  });
  double run = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    run = std::max(run, raw[i]);
    v_[i] = run;
  }
  sup_ = finite_ ? v_.back() : kInf;
}

double PsiTable::operator()(double r) const {
  if (r <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::none: return 0.0;
    case Kind::stable: return c_ * std::pow(r, alpha_);
    case Kind::relativistic: return c_ * (std::pow(mu_ * mu_ + r * r, 0.5 * alpha_) - m_);
    case Kind::table: break;
  }
  const std::size_t n = r_.size();
  if (r <= r_.front()) {
    const double p = std::log(v_[1] / v_[0]) / std::log(r_[1] / r_[0]);
    return v_[0] * std::pow(r / r_[0], p);
  }
  if (r >= r_.back()) {
    if (finite_) return v_.back();
    const double p = std::log(v_[n - 1] / v_[n - 2]) / std::log(r_[n - 1] / r_[n - 2]);
    return v_.back() * std::pow(r / r_.back(), p);
  }
  const auto it = std::upper_bound(r_.begin(), r_.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - r_.begin());
  const double f = std::log(r / r_[i - 1]) / std::log(r_[i] / r_[i - 1]);
  return std::exp(std::log(v_[i - 1]) + f * std::log(v_[i] / v_[i - 1]));
}

double PsiTable::inverse(double s) const {
  if (!(s > 0.0)) throw OutOfRange("Psi inverse needs s > 0");
  if (s >= sup_) throw OutOfRange("s = " + std::to_string(s) + " is not below Psi(inf) = " +
                                  std::to_string(sup_));
  switch (kind_) {
    case Kind::none: throw OutOfRange("Psi is identically zero");
    case Kind::stable: return std::pow(s / c_, 1.0 / alpha_);
    case Kind::relativistic: {
      const double q = std::pow(s / c_ + m_, 2.0 / alpha_) - mu_ * mu_;
      return std::sqrt(std::max(q, 0.0));
    }
    case Kind::table: break;
  }
  const std::size_t n = r_.size();
  const auto it = std::upper_bound(v_.begin(), v_.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - v_.begin());
  if (i == 0) {
    const double p = std::log(v_[1] / v_[0]) / std::log(r_[1] / r_[0]);
    return r_[0] * std::pow(s / v_[0], 1.0 / p);
  }
  if (i == n) {
    const double p = std::log(v_[n - 1] / v_[n - 2]) / std::log(r_[n - 1] / r_[n - 2]);
    return r_.back() * std::pow(s / v_.back(), 1.0 / p);
  }
  const double f = std::log(s / v_[i - 1]) / std::log(v_[i] / v_[i - 1]);
  return std::exp(std::log(r_[i - 1]) + f * std::log(r_[i] / r_[i - 1]));
}

double PsiTable::max_doubling() const {
  switch (kind_) {
    case Kind::none: return 1.0;
    case Kind::stable: return std::pow(2.0, alpha_);
    default: break;
  }
  double best = 0.0;
  const Vec grid = r_.empty() ? Vec{} : r_;
  if (kind_ == Kind::relativistic) {
    for (int k = -30; k <= 30; ++k) {
      const double r = std::pow(10.0, k / 10.0);
      best = std::max(best, (*this)(2.0 * r) / (*this)(r));
    }
    return best;
  }
  for (double r : grid)
    if (2.0 * r <= r_.back()) best = std::max(best, (*this)(2.0 * r) / (*this)(r));
  return best;
}

void PsiTable::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  os << "r,psi\n" << std::setprecision(17);
  if (kind_ == Kind::table) {
    for (std::size_t i = 0; i < r_.size(); ++i) os << r_[i] << ',' << v_[i] << '\n';
    return;
  }
  for (int k = -90; k <= 120; ++k) {
    const double r = std::pow(10.0, k / 30.0);
    os << r << ',' << (*this)(r) << '\n';
  }
}

double psi_max(const LevyModel& model, double r) { return PsiTable(model)(r); }

double psi_inverse(const LevyModel& model, double s) { return PsiTable(model).inverse(s); }

double h_of_t(const PsiTable& table, double t) {
  if (!(t > 0.0)) throw ConfigError("h(t) needs t > 0");
  return 1.0 / table.inverse(1.0 / t);
}

double h_of_t(const LevyModel& model, double t) { return h_of_t(PsiTable(model), t); }

Vec annulus_moment(const LevyModel& model, double a, double c) {
  Vec m1 = model.angular().first_moment();
  if (norm(m1) == 0.0 || model.no_jumps()) return Vec(model.dim(), 0.0);
  const double rad = model.radial_integral(a, c, model.dim());
  for (double& v : m1) v *= rad;
  return m1;
}

Vec drift_correction(const LevyModel& model, double r) {
  if (r < 0.0 || (r == 0.0 && !model.finite_mass()))
    throw ConfigError("b_r needs r > 0 (r = 0 only for finite measures)");
  Vec b = model.drift();
  if (r == 1.0) return b;
  if (r < 1.0) {
    const Vec m = annulus_moment(model, r, 1.0);
    for (unsigned k = 0; k < model.dim(); ++k) b[k] -= m[k];
  } else {
    const Vec m = annulus_moment(model, 1.0, r);
    for (unsigned k = 0; k < model.dim(); ++k) b[k] += m[k];
  }
  return b;
}

namespace {

// int_c^inf e^{su} F(s) ds over nested cutoffs [c 2^k, c 2^{k+1}].
double nested_exp_tail(const LevyModel& m, double u, double c) {
  auto f = [&](double s) { return std::exp(m.log_radial_tilted(s, u) + (m.dim() - 1.0) * std::log(s)); };
  double sum = 0.0;
  double lo = c;
  for (int k = 0; k < 1000; ++k) {
    const double hi = 2.0 * lo;
    const double inc = quad::adaptive(f, lo, hi, 1e-12, 10).value;
    if (!std::isfinite(inc))
      throw DivergentMoment("exponential moment tail overflows near |y| = " + std::to_string(lo));
    sum += inc;
    if (k >= 3 && inc <= 1e-10 * std::abs(sum)) return sum;
    if (sum == 0.0 && k >= 3) return 0.0;
    lo = hi;
    if (!std::isfinite(lo)) break;
  }
  throw DivergentMoment("exponential moment tail does not settle on nested cutoffs");
}

// E(u) = int_0^inf (1 - e^{su} + su 1_{s<1}) F(s) ds.
double exp_radial(const LevyModel& m, double u) {
  if (u == 0.0) return 0.0;
  auto inner = [&](double s) { return s > 0.0 ? -emx_exp(s * u, log_F(m, s)) : 0.0; };
  const double head = quad::endpoint_singular(inner, 0.0, 1.0, 1e-13).value;
  const double tail_mass = m.radial_integral(1.0, kInf, m.dim() - 1.0);
  return head + tail_mass - nested_exp_tail(m, u, 1.0);
}

template <class Radial>
double angular_real(const LevyModel& model, std::span<const double> xi, const Radial& rad) {
  const unsigned d = model.dim();
  const auto& g = model.angular();
  if (d == 1) {
    const double p = 1.0, q = -1.0;
    const double gp = g(std::span<const double>(&p, 1));
    const double gm = g(std::span<const double>(&q, 1));
    double s = 0.0;
    if (gp > 0.0) s += gp * rad(xi[0]);
    if (gm > 0.0) s += gm * rad(-xi[0]);
    return s;
  }
  const auto rule = quad::sphere_rule(d, d == 2 ? 256 : 64);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double gv = g(rule.nodes[i]);
    if (gv > 0.0) s += rule.weights[i] * gv * rad(dot(xi, rule.nodes[i]));
  }
  return s;
}

}  // namespace

double exp_moment_exponent(const LevyModel& model, std::span<const double> xi) {
  if (norm(xi) == 0.0) return 0.0;
  double v = -dot(xi, model.drift()) - model.quad_form(xi);
  if (model.no_jumps()) return v;
  return v + angular_real(model, xi, [&](double u) { return exp_radial(model, u); });
}

double exp_tail_integral(const LevyModel& model, std::span<const double> xi, double r) {
  if (!(r > 0.0)) throw ConfigError("exp tail integral needs r > 0");
  if (model.no_jumps()) return 0.0;
  return angular_real(model, xi, [&](double u) { return nested_exp_tail(model, u, r); });
}

ConditionDReport check_condition_D(const LevyModel& model, const Vec& t_grid) {
  ConditionDReport rep;
  if (model.no_jumps()) {
    rep.applicable = false;
    rep.note = "no jump part: Phi = 0, condition (D) not applicable";
    return rep;
  }
  if (model.finite_mass()) {
    rep.convergent = false;
    rep.bounded = false;
    rep.note = "finite Levy measure: Re Phi <= 2|nu| is bounded, the integral diverges";
    for (double t : t_grid) rep.rows.push_back({t, kInf, NAN, kInf});
    return rep;
  }
  const PsiTable table(model);
  const unsigned d = model.dim();
  for (double t : t_grid) {
    double integral = 0.0;
    auto radial_part = [&](const Vec& w) {
      auto f = [&](double rho) {
        if (rho == 0.0) return 0.0;
        return std::exp(-t * re_phi(model, scaled(w, rho)) + d * std::log(rho));
      };
      return quad::half_line(f, 0.0, 1e-9).value;
    };
    if (d == 1) {
      integral = radial_part({1.0}) + radial_part({-1.0});
    } else {
      const auto rule = quad::sphere_rule(d, d == 2 ? 64 : 16);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        integral += rule.weights[i] * radial_part(rule.nodes[i]);
    }
    const double scale = std::pow(table.inverse(1.0 / t), d + 1.0);
    rep.rows.push_back({t, integral, scale, integral / scale});
  }
  double lo = kInf, hi = 0.0;
  for (const auto& r : rep.rows) {
    if (!std::isfinite(r.ratio)) rep.convergent = false;
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  rep.bounded = rep.convergent && hi <= 100.0 * lo;
  return rep;
}

}  // namespace levyheat
