#include "levyheat/tail_line.hpp"

#include <algorithm>
#include <functional>

#include "levyheat/quadrature.hpp"

namespace levyheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using LogFn = std::function<double(double)>;

// log int exp(la(x - y) + lb(y)) dy over |y| >= excl. `ell` is the feature
// length (r, or 1 for finite measures); `singular` marks integrable
// singularities of lb at 0 and of la at 0.
double log_conv(const LogFn& la, const LogFn& lb, double x, double excl, double ell,
                double rel_tol, bool singular) {
  const double B = 2.0 * std::abs(x) + 64.0 * ell;
  std::vector<double> pts{-B, B, x, 0.5 * x, 0.0};
  const double s0 = singular ? ell / 64.0 : ell / 4.0;
  for (double s = s0; s < B; s *= 2.0) {
    for (double c : {0.0, x}) {
      pts.push_back(c + s);
      pts.push_back(c - s);
    }
  }
  if (excl > 0.0) {
    for (double k = 1.0; k <= 4.0; k += 1.0) {
      pts.push_back(k * excl);
      pts.push_back(-k * excl);
      pts.push_back(x + k * excl);
      pts.push_back(x - k * excl);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  pts.erase(std::remove_if(pts.begin(), pts.end(), [&](double p) { return p < -B || p > B; }),
            pts.end());

  auto L = [&](double y) {
    if (std::abs(y) < excl) return -kInf;
    return la(x - y) + lb(y);
  };
  double ref = -kInf;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i], b = pts[i + 1];
    for (double y : {a + 1e-9 * (b - a), 0.5 * (a + b), b - 1e-9 * (b - a)}) {
      const double v = L(y);
      if (std::isfinite(v)) ref = std::max(ref, v);
    }
  }
  if (!std::isfinite(ref)) return -kInf;
  for (int attempt = 0; attempt < 4; ++attempt) {
    double peak = -kInf;
    auto f = [&](double y) {
      const double v = L(y) - ref;
      if (v > peak) peak = v;
      return v > -700.0 ? std::exp(std::min(v, 600.0)) : 0.0;
    };
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double a = pts[i], b = pts[i + 1];
      if (excl > 0.0 && a >= -excl && b <= excl) continue;
      const bool sing = singular && (a == 0.0 || b == 0.0 || a == x || b == x);
      sum += sing ? quad::endpoint_singular(f, a, b, rel_tol).value
                  : quad::adaptive(f, a, b, rel_tol, 10).value;
    }
    sum += quad::half_line(f, B, rel_tol).value;
    sum += quad::half_line([&](double z) { return f(-z); }, B, rel_tol).value;
    if (peak > 500.0) {
      ref += peak;
      continue;
    }
    return sum > 0.0 ? ref + std::log(sum) : -kInf;
  }
  throw NumericalError("convolution integrand could not be scaled at x = " + std::to_string(x));
}

}  // namespace

TailLine::TailLine(const LevyModel& model, double r, Options opt)
    : model_(&model), r_(r), opt_(opt) {
  if (model.dim() != 1) throw ConfigError("TailLine is one-dimensional");
  if (r < 0.0 || (r == 0.0 && !model.finite_mass()))
    throw ConfigError("TailLine needs r > 0 (r = 0 only for finite measures)");
  if (opt_.n_max < 1) opt_.n_max = 1;
  mass_ = r == 0.0 ? model.total_mass() : model.tail_mass(r);
  const double ell = r > 0.0 ? r : 1.0;
  h_ = ell / opt_.per_r;
  // uniform block covers every kink +-k r of the tables, then geometric spacing
  n_in_ = static_cast<std::size_t>(std::ceil(1.0 / opt_.growth));
  if (r > 0.0) n_in_ = std::max<std::size_t>(n_in_, (opt_.n_max + 1) * opt_.per_r);
  x_in_ = h_ * static_cast<double>(n_in_);
  Vec pos;
  for (std::size_t k = 0; k <= n_in_; ++k) pos.push_back(h_ * static_cast<double>(k));
  for (double x = x_in_ * (1.0 + opt_.growth); pos.back() < opt_.x_max; x *= 1.0 + opt_.growth)
    pos.push_back(x);
  opt_.x_max = pos.back();
  half_ = pos.size() - 1;
  x_.resize(2 * half_ + 1);
  for (std::size_t k = 0; k <= half_; ++k) {
    x_[half_ + k] = pos[k];
    x_[half_ - k] = -pos[k];
  }
  if (r > 0.0) {
    kinks_.push_back(half_);
    for (std::size_t k = 1; k * opt_.per_r <= n_in_; ++k) {
      kinks_.push_back(half_ - k * opt_.per_r);
      kinks_.push_back(half_ + k * opt_.per_r);
    }
    std::sort(kinks_.begin(), kinks_.end());
  }

  const double one = 1.0, minus = -1.0;
  const double gp = model.angular()(std::span<const double>(&one, 1));
  const double gm = model.angular()(std::span<const double>(&minus, 1));
  log_g_plus_ = gp > 0.0 ? std::log(gp) : -kInf;
  log_g_minus_ = gm > 0.0 ? std::log(gm) : -kInf;
  {
    const double lo = r > 0.0 ? r : 1e-12;
    const double hi = 8.0 * opt_.x_max + 64.0 * ell;
    radial_.lo = std::log(lo);
    radial_.step = std::log(10.0) / 2000.0;
    const auto m = static_cast<std::size_t>((std::log(hi) - radial_.lo) / radial_.step) + 4;
    radial_.v.resize(m);
    parallel_for(m, [&](std::size_t i) {
      radial_.v[i] = model.log_radial(std::exp(radial_.lo + radial_.step * static_cast<double>(i)));
    });
  }

  const bool sym = model.angular().symmetric();
  logq_.assign(opt_.n_max + 1, Vec());
  for (unsigned n = 2; n <= opt_.n_max; ++n) {
    Vec& t = logq_[n];
    t.assign(x_.size(), -kInf);
    const std::size_t first = sym ? half_ : 0;
    parallel_for(x_.size() - first, [&](std::size_t i) { t[first + i] = compute(n, x_[first + i]); });
    if (sym)
      for (std::size_t k = 1; k <= half_; ++k) t[half_ - k] = t[half_ + k];
  }
}

double TailLine::RadialTable::operator()(double s) const {
  const double p = (std::log(s) - lo) / step;
  if (p < 1.0 || p > static_cast<double>(v.size()) - 3.0) return kInf;
  const auto j = static_cast<std::size_t>(p);
  const double u = p - static_cast<double>(j - 1);
  const double l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
  const double l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
  const double l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
  const double l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
  return l0 * v[j - 1] + l1 * v[j] + l2 * v[j + 1] + l3 * v[j + 2];
}

double TailLine::log_nu(double x) const {
  const double a = std::abs(x);
  if (a < r_ || x == 0.0) return -kInf;
  const double lg = x > 0.0 ? log_g_plus_ : log_g_minus_;
  if (!std::isfinite(lg)) return -kInf;
  double lr = radial_(a);
  if (lr == kInf) lr = model_->log_radial(a);
  return lg + lr;
}

double TailLine::u_of(double x) const {
  const double a = std::abs(x);
  const double u = a <= x_in_ ? a / h_
                              : static_cast<double>(n_in_) + std::log(a / x_in_) / std::log1p(opt_.growth);
  return x < 0.0 ? -u : u;
}

double TailLine::log_interp(const Vec& table, double x) const {
  const double u = u_of(x);
  const double lim = static_cast<double>(half_);
  if (std::abs(u) >= lim) {
    const std::size_t e = x > 0.0 ? 2 * half_ : 0;
    return table[e] + log_nu(x) - log_nu(x_[e]);
  }
  const double p = u + lim;
  const auto j = static_cast<std::size_t>(std::floor(p));
  std::size_t i0 = std::min(j > 0 ? j - 1 : 0, x_.size() - 4);
  // keep the stencil on one side of a kink
  for (std::size_t k : kinks_) {
    if (k > i0 && k < i0 + 3) {
      i0 = p < static_cast<double>(k) ? k - 3 : k;
      break;
    }
  }
  const double s = p - static_cast<double>(i0);
  const double v0 = table[i0], v1 = table[i0 + 1], v2 = table[i0 + 2], v3 = table[i0 + 3];
  if (!(std::isfinite(v0) && std::isfinite(v1) && std::isfinite(v2) && std::isfinite(v3))) {
    const double w = p - static_cast<double>(j);
    const double a = std::exp(table[j]);
    const double b = j + 1 < table.size() ? std::exp(table[j + 1]) : 0.0;
    const double v = (1.0 - w) * a + w * b;
    return v > 0.0 ? std::log(v) : -kInf;
  }
  // cubic Lagrange on the unit-spaced nodes 0..3
  const double l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  const double l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
  const double l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
  const double l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
  return l0 * v0 + l1 * v1 + l2 * v2 + l3 * v3;
}

double TailLine::log_q(unsigned n, double x) const {
  if (n == 0 || n > opt_.n_max) throw ConfigError("TailLine: n out of range");
  if (n == 1) return log_nu(x);
  return log_interp(logq_[n], x);
}

double TailLine::operator()(unsigned n, double x) const { return std::exp(log_q(n, x)); }

double TailLine::compute(unsigned n, double x) const {
  const double ell = r_ > 0.0 ? r_ : 1.0;
  LogFn prev = n == 2 ? LogFn([&](double z) { return log_nu(z); })
                      : LogFn([&](double z) { return log_interp(logq_[n - 1], z); });
  const bool sing = r_ == 0.0 && model_->profile().inner_exponent > 0.0;
  // the interpolated tables are only accurate to ~1e-6, tighter tolerances just refine noise
  const double tol = n == 2 ? opt_.rel_tol : std::max(opt_.rel_tol, 1e-7);
  return log_conv(prev, [&](double y) { return log_nu(y); }, x, r_, ell, tol, sing);
}

double convolution_power_direct(const LevyModel& model, double r, unsigned n, double x) {
  if (model.dim() != 1) throw ConfigError("convolution_power_direct is one-dimensional");
  const double ell = r > 0.0 ? r : 1.0;
  const bool sing = r == 0.0 && model.profile().inner_exponent > 0.0;
  LogFn nu = [&](double y) {
    return (std::abs(y) < r || y == 0.0) ? -kInf : model.log_density1(y);
  };
  LogFn q2 = [&](double z) { return log_conv(nu, nu, z, r, ell, 1e-9, sing); };
  switch (n) {
    case 1: return std::exp(nu(x));
    case 2: return std::exp(q2(x));
    case 3: return std::exp(log_conv(q2, nu, x, r, ell, 1e-7, sing));
    case 4: return std::exp(log_conv(q2, q2, x, 0.0, ell, 1e-7, false));
    default: throw ConfigError("convolution_power_direct supports n <= 4");
  }
}

}  // namespace levyheat
