#include "levyheat/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <boost/math/distributions/poisson.hpp>

#include "levyheat/convolve.hpp"
#include "levyheat/symbol.hpp"
#include "levyheat/tail_line.hpp"

namespace levyheat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double log_nu_at(const LevyModel& model, std::span<const double> x) {
  return model.dim() == 1 ? model.log_density1(x[0]) : model.log_density(x);
}

RatioSeries blank(const char* kind, double t, std::span<const double> theta,
                  std::span<const double> y) {
  RatioSeries s;
  s.kind = kind;
  s.t = t;
  s.theta.assign(theta.begin(), theta.end());
  s.y.assign(y.begin(), y.end());
  return s;
}

void check_radii(const Vec& s_list) {
  if (s_list.empty()) throw ConfigError("empty probe radius list");
  for (std::size_t i = 1; i < s_list.size(); ++i)
    if (!(s_list[i] > s_list[i - 1])) throw ConfigError("probe radii must increase strictly");
}

Vec probe_point(std::span<const double> theta, std::span<const double> y, double s) {
  Vec x(theta.size());
  for (std::size_t a = 0; a < x.size(); ++a) x[a] = s * theta[a] - y[a];
  return x;
}

void attach_limit(RatioSeries& out, const LevyModel& model, double t,
                  std::span<const double> theta, std::span<const double> y) {
  try {
    out.limit = predicted_limit(model, t, theta, y);
  } catch (const DivergentMoment& e) {
    out.limit = kNaN;
    out.limit_note = std::string("no finite limit: ") + e.what();
  }
}

}  // namespace

unsigned poisson_terms(double tm, double tol, unsigned cap) {
  unsigned n = 1;
  if (tm <= 0.0) return n;
  const boost::math::poisson_distribution<double> pois(tm);
  while (n < cap && boost::math::cdf(boost::math::complement(pois, n - 1.0)) > tol) ++n;
  return n;
}

double predicted_limit(const LevyModel& model, double t, std::span<const double> theta,
                       std::span<const double> y) {
  const double k = model.kappa();
  if (k == 0.0) return 1.0;
  const Vec u = unit(theta);
  const Vec xi = scaled(u, k);
  const double pt = exp_moment_exponent(model, xi);
  return std::exp(-t * pt + k * dot(u, y));
}

Vec default_probe_radii(const LevyModel& model, double t) {
  const double base = std::max(1.0, h_of_t(model, t));
  double lo = 8.0 * base, hi = 128.0 * base;
  if (model.kappa() > 0.0) {
    const double cap = 60.0 / model.kappa();
    hi = std::min(hi, cap);
    if (lo >= hi) lo = hi / 8.0;
  }
  Vec out;
  for (int i = 0; i < 5; ++i) out.push_back(lo * std::pow(hi / lo, i / 4.0));
  return out;
}

// ---- kernel ratio

RatioSeries kernel_ratio_series(const FarField& far, const LevyModel& model,
                                std::span<const double> theta, std::span<const double> y,
                                const Vec& s_list) {
  check_radii(s_list);
  RatioSeries out = blank("kernel", far.t(), theta, y);
  attach_limit(out, model, far.t(), theta, y);
  out.points.resize(s_list.size());
  const double lt = std::log(far.t());
  parallel_for(s_list.size(), [&](std::size_t i) {
    const double s = s_list[i];
    RatioPoint& p = out.points[i];
    p.s = s;
    const Vec x = probe_point(theta, y, s);
    const Vec xs = scaled(theta, s);
    try {
      const FarFieldValue v = far(x[0]);
      p.ratio = std::exp(v.log_value - lt - log_nu_at(model, xs));
      p.accuracy = v.accuracy;
      p.refused = v.refused;
      p.note = v.note;
    } catch (const LevyError& e) {
      p.refused = true;
      p.note = e.what();
      p.ratio = kNaN;
    }
  });
  return out;
}

RatioSeries kernel_ratio_series(const KernelField& kernel, const LevyModel& model,
                                std::span<const double> theta, std::span<const double> y,
                                const Vec& s_list, double certify_rel) {
  check_radii(s_list);
  RatioSeries out = blank("kernel", kernel.t, theta, y);
  attach_limit(out, model, kernel.t, theta, y);
  for (double s : s_list) {
    RatioPoint p;
    p.s = s;
    const Vec x = probe_point(theta, y, s);
    const Vec xs = scaled(theta, s);
    const double v = interpolate(kernel.field, x);
    const Certification c = certify_point(model, kernel, x, certify_rel);
    p.ratio = v / (kernel.t * std::exp(log_nu_at(model, xs)));
    p.accuracy = v > 0.0 ? (c.periodization + c.roundoff) / v : kNaN;
    p.refused = !c.ok;
    if (!c.ok) p.note = "outside the certified window";
    out.points.push_back(p);
  }
  return out;
}

RatioSeries kernel_ratio_series(const LevyModel& model, double t, std::span<const double> theta,
                                std::span<const double> y, const Vec& s_list,
                                const RatioOptions& opt) {
  if (model.dim() == 1) {
    FarField::Options fo;
    fo.use_oracle = opt.use_oracle;
    fo.r = opt.r;
    double reach = 0.0;
    for (double s : s_list) reach = std::max(reach, s + norm(y));
    fo.x_max = std::max(1e4, 4.0 * reach);
    const FarField far(model, t, fo);
    return kernel_ratio_series(far, model, theta, y, s_list);
  }
  if (!opt.grid) throw ConfigError("kernel ratio in d >= 2 needs a spectral grid");
  const KernelField k = heat_kernel_spectral(model, t, *opt.grid);
  return kernel_ratio_series(k, model, theta, y, s_list, opt.certify_rel);
}

// ---- convolution ratio

RatioSeries convolution_ratio_series(const LevyModel& model, double r, unsigned n,
                                     std::span<const double> theta, std::span<const double> y,
                                     const Vec& s_list) {
  if (model.dim() != 1) throw ConfigError("convolution ratio series are implemented for d = 1");
  if (n < 1 || n > 4) throw ConfigError("convolution power must lie in 1..4");
  if (!(r > 0.0)) throw ConfigError("convolution ratio needs r > 0");
  check_radii(s_list);
  RatioSeries out = blank("convolution", r, theta, y);
  out.n = n;
  const double I = exp_moment_integral(model, r, theta, 1);
  out.limit = std::exp(model.kappa() * dot(theta, y)) * n * std::pow(I, n - 1.0);
  TailLine::Options lo;
  lo.n_max = std::max(2U, n);
  lo.x_max = std::max(1e4, 4.0 * (s_list.back() + norm(y)));
  const TailLine line(model, r, lo);
  out.points.resize(s_list.size());
  parallel_for(s_list.size(), [&](std::size_t i) {
    RatioPoint& p = out.points[i];
    p.s = s_list[i];
    const double x = p.s * theta[0] - y[0];
    p.ratio = std::exp(line.log_q(n, x) - model.log_density1(p.s * theta[0]));
    p.accuracy = n == 1 ? 0.0 : 2e-5;
  });
  return out;
}

// ---- compound Poisson ratio

RatioSeries compound_ratio_series(const TailLine& line, const LevyModel& model, double t,
                                  std::span<const double> theta, std::span<const double> y,
                                  const Vec& s_list) {
  if (model.dim() != 1) throw ConfigError("compound ratio series are implemented for d = 1");
  check_radii(s_list);
  const double r = line.r();
  RatioSeries out = blank("compound", t, theta, y);
  const double M = line.mass();
  const double I = exp_moment_integral(model, r, theta, 1);
  out.limit = std::exp(model.kappa() * dot(theta, y) + t * (I - M));
  const unsigned nmax = std::min(line.n_max(), poisson_terms(t * M, 1e-9, 16));
  Vec lc(nmax + 1);
  for (unsigned k = 1; k <= nmax; ++k) lc[k] = -t * M + k * std::log(t) - std::lgamma(k + 1.0);
  out.points.resize(s_list.size());
  parallel_for(s_list.size(), [&](std::size_t i) {
    RatioPoint& p = out.points[i];
    p.s = s_list[i];
    const double x = p.s * theta[0] - y[0];
    const double ref = std::log(t) + model.log_density1(p.s * theta[0]);
    double sum = 0.0, last = 0.0;
    for (unsigned k = 1; k <= nmax; ++k) {
      const double lq = line.log_q(k, x);
      last = std::isfinite(lq) ? std::exp(lc[k] + lq - ref) : 0.0;
      sum += last;
    }
    p.ratio = sum;
    p.accuracy = 2e-5 + (sum > 0.0 ? last / sum : 0.0);
    if (p.accuracy > 0.1) {
      p.refused = true;
      p.note = "series truncated by the tail line term cap";
    }
  });
  return out;
}

RatioSeries compound_ratio_series(const LevyModel& model, double t, std::span<const double> theta,
                                  std::span<const double> y, const Vec& s_list,
                                  std::optional<double> r_opt) {
  if (model.dim() != 1) throw ConfigError("compound ratio series are implemented for d = 1");
  check_radii(s_list);
  const double r = r_opt ? *r_opt : h_of_t(model, t);
  if (r == 0.0 && !model.finite_mass()) throw ConfigError("r = 0 needs a finite Levy measure");
  const double M = r == 0.0 ? model.total_mass() : model.tail_mass(r);
  TailLine::Options lo;
  lo.n_max = std::max(2U, poisson_terms(t * M, 1e-9, 16));
  lo.x_max = std::max(1e4, 4.0 * (s_list.back() + norm(y)));
  const TailLine line(model, r, lo);
  return compound_ratio_series(line, model, t, theta, y, s_list);
}

// ---- verdicts

ConvergenceVerdict diagnose(const RatioSeries& series, double tolerance) {
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  std::vector<const RatioPoint*> pts;
  for (const auto& p : series.points)
    if (!p.refused && std::isfinite(p.ratio)) pts.push_back(&p);
  ConvergenceVerdict v;
  v.tolerance = tolerance;
  v.valid_points = pts.size();
  if (pts.size() < 4) throw NumericalError("diagnose needs at least 4 valid points");
  const bool has_limit = std::isfinite(series.limit);
  Vec dev, acc, s;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (has_limit) {
      dev.push_back(std::abs(pts[i]->ratio / series.limit - 1.0));
      acc.push_back(pts[i]->accuracy);
    } else if (i > 0) {
      dev.push_back(std::abs(pts[i]->ratio / pts[i - 1]->ratio - 1.0));
      acc.push_back(pts[i]->accuracy + pts[i - 1]->accuracy);
    } else {
      continue;
    }
    s.push_back(pts[i]->s);
  }
  const std::size_t k = dev.size();
  v.final_deviation = dev.back();
  v.trend = true;
  for (std::size_t i = k - 2; i < k; ++i)
    if (dev[i] > dev[i - 1] + acc[i] + acc[i - 1]) v.trend = false;
  v.pass = v.final_deviation <= tolerance && v.trend;
  if (!has_limit) v.note = "no finite limit; deviations are successive relative changes";

  Vec lx, ly;
  for (std::size_t i = 0; i < k; ++i) {
    if (dev[i] > 3.0 * acc[i] && dev[i] > 0.0) {
      lx.push_back(std::log(s[i]));
      ly.push_back(std::log(dev[i]));
    }
  }
  if (lx.size() >= 2) {
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    v.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  } else {
    v.slope = kNaN;
    if (!v.note.empty()) v.note += "; ";
    v.note += "slope indeterminate (deviations at the accuracy floor)";
  }
  return v;
}

SandwichReport sandwich_check(const LevyModel& model, const Vec& t_set, const std::vector<Vec>& ys,
                              const std::vector<Vec>& thetas, double epsilon, const Vec& s_list,
                              const RatioOptions& opt) {
  check_radii(s_list);
  SandwichReport rep;
  rep.epsilon = epsilon;
  rep.worst_deviation.assign(s_list.size(), 0.0);
  for (double t : t_set) {
    std::optional<FarField> far;
    std::optional<KernelField> kern;
    if (model.dim() == 1) {
      FarField::Options fo;
      fo.use_oracle = opt.use_oracle;
      fo.r = opt.r;
      far.emplace(model, t, fo);
    } else {
      if (!opt.grid) throw ConfigError("sandwich check in d >= 2 needs a spectral grid");
      kern.emplace(heat_kernel_spectral(model, t, *opt.grid));
    }
    for (const Vec& th : thetas) {
      for (const Vec& y : ys) {
        const RatioSeries s = far ? kernel_ratio_series(*far, model, th, y, s_list)
                                  : kernel_ratio_series(*kern, model, th, y, s_list, opt.certify_rel);
        if (!std::isfinite(s.limit)) {
          rep.excluded.push_back("t=" + std::to_string(t) + ": " + s.limit_note);
          continue;
        }
        for (std::size_t i = 0; i < s.points.size(); ++i) {
          const RatioPoint& p = s.points[i];
          if (p.refused) {
            rep.excluded.push_back("t=" + std::to_string(t) + " s=" + std::to_string(p.s) + ": " +
                                   p.note);
            continue;
          }
          ++rep.probed;
          rep.worst_deviation[i] = std::max(rep.worst_deviation[i], std::abs(p.ratio - s.limit));
        }
      }
    }
  }
  rep.holds = false;
  for (std::size_t i = s_list.size(); i-- > 0;) {
    if (rep.worst_deviation[i] > epsilon) break;
    rep.holds = true;
    rep.radius = s_list[i];
  }
  return rep;
}

// ---- export

void RatioSeries::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw LevyError("cannot write " + path);
  out.precision(17);
  out << "s,R,accuracy,limit,refused\n";
  for (const auto& p : points)
    out << p.s << ',' << p.ratio << ',' << p.accuracy << ',' << limit << ',' << p.refused << '\n';
}

namespace {
nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }
}  // namespace

nlohmann::json RatioSeries::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["t"] = t;
  if (n > 0) j["n"] = n;
  j["theta"] = theta;
  j["y"] = y;
  j["limit"] = num(limit);
  if (!limit_note.empty()) j["limit_note"] = limit_note;
  j["points"] = nlohmann::json::array();
  for (const auto& p : points) {
    nlohmann::json q{{"s", p.s}, {"R", num(p.ratio)}, {"accuracy", num(p.accuracy)},
                     {"refused", p.refused}};
    if (!p.note.empty()) q["note"] = p.note;
    j["points"].push_back(q);
  }
  return j;
}

nlohmann::json ConvergenceVerdict::to_json() const {
  nlohmann::json j{{"final_deviation", num(final_deviation)},
                   {"trend", trend},
                   {"tolerance", tolerance},
                   {"pass", pass},
                   {"slope", num(slope)},
                   {"valid_points", valid_points}};
  if (!note.empty()) j["note"] = note;
  return j;
}

nlohmann::json SandwichReport::to_json() const {
  return {{"holds", holds},       {"radius", holds ? nlohmann::json(radius) : nlohmann::json(nullptr)},
          {"epsilon", epsilon},   {"probed", probed},
          {"excluded", excluded}, {"worst_deviation", worst_deviation}};
}

}  // namespace levyheat
