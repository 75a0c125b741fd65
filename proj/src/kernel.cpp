#include "levyheat/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/poisson.hpp>

#include "levyheat/fft.hpp"
#include "levyheat/quadrature.hpp"
#include "levyheat/symbol.hpp"

namespace levyheat {

namespace {

constexpr double kNyquistTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool on_nyquist(const Grid& g, std::span<const double> xi) {
  const double top = 0.5 * static_cast<double>(g.n) * g.dual_spacing() * (1.0 - 1e-12);
  for (double v : xi)
    if (std::abs(v) >= top) return true;
  return false;
}

// conjugate partners are implicit in the half layout
double slot_weight(const Grid& g, std::span<const double> xi) {
  const double last = std::abs(xi[g.dim - 1]) / g.dual_spacing();
  return (last < 0.5 || last > 0.5 * static_cast<double>(g.n) - 0.5) ? 1.0 : 2.0;
}

struct Inverted {
  DensityField field;
  double l2 = 0.0;
};

// invert hat(xi) = exp(-t E(xi)) after the Nyquist test
Inverted invert_exponent(const Grid& grid, const std::vector<cplx>& E, double t,
                         const char* what) {
  std::vector<cplx> hat(E.size());
  double nyq = 0.0, l2 = 0.0;
  for (std::size_t h = 0; h < E.size(); ++h) {
    hat[h] = std::exp(-t * E[h]);
    const Vec xi = half_frequency(grid, h);
    const double a = std::abs(hat[h]);
    if (on_nyquist(grid, xi)) nyq = std::max(nyq, a);
    l2 += slot_weight(grid, xi) * a * a;
  }
  if (nyq > kNyquistTol)
    throw GridError(std::string(what) + ": transform is " + std::to_string(nyq) +
                    " at the Nyquist shell; use a finer spacing (larger N or smaller L)");
  Inverted out{invert_spectrum(grid, hat), std::sqrt(l2)};
  out.field.clip(1e-12);
  return out;
}

void check_mass(const DensityField& f, const char* what) {
  const double m = f.mass();
  if (std::abs(m - 1.0) > 1e-6)
    throw GridError(std::string(what) + ": mass " + std::to_string(m) + " differs from 1");
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::spectral: return "spectral";
    case Provenance::decomposition: return "decomposition";
    case Provenance::oracle: return "oracle";
  }
  return "?";
}

std::vector<cplx> exponent_on_grid(const LevyModel& model, const Grid& grid, double lo,
                                   double hi) {
  const std::size_t count = fft::half_size(grid.dims());
  std::vector<cplx> out(count, cplx{});
  if (model.no_jumps()) return out;
  const bool full = lo == 0.0 && std::isinf(hi);
  const auto kind = model.radial_kind();
  if (full && kind == LevyModel::Radial::relativistic) {
    parallel_for(count, [&](std::size_t h) {
      const Vec xi = half_frequency(grid, h);
      out[h] = phi(model, xi).value();
    });
    return out;
  }
  if (grid.dim == 1) {
    const double one = 1.0, minus = -1.0;
    const double gp = model.angular()(std::span<const double>(&one, 1));
    const double gm = model.angular()(std::span<const double>(&minus, 1));
    const double du = grid.dual_spacing();
    if (full && kind == LevyModel::Radial::power) {
      for (std::size_t h = 0; h < count; ++h) {
        const Vec xi = half_frequency(grid, h);
        out[h] = phi(model, xi).value();
      }
      return out;
    }
    const auto line = radial_symbol_line(model, du, grid.n / 2 + 1, lo, hi);
    for (std::size_t h = 0; h < count; ++h) {
      const double f = half_frequency(grid, h)[0];
      const auto k = static_cast<std::size_t>(std::llround(std::abs(f) / du));
      const double sg = f < 0.0 ? -1.0 : 1.0;
      out[h] = {(gp + gm) * line[k].re, sg * (gp - gm) * line[k].im};
    }
    return out;
  }
  if (grid.dim == 2 && full && kind == LevyModel::Radial::power) {
    const StableDirectionTable table(model);
    parallel_for(count, [&](std::size_t h) {
      const Vec xi = half_frequency(grid, h);
      out[h] = table(xi).value();
    });
    return out;
  }
  parallel_for(count, [&](std::size_t h) {
    const Vec xi = half_frequency(grid, h);
    out[h] = (full ? phi(model, xi) : phi_band(model, xi, lo, hi)).value();
  });
  return out;
}

KernelField heat_kernel_spectral(const LevyModel& model, double t, const Grid& grid) {
  if (!(t > 0.0)) throw ConfigError("heat kernel needs t > 0");
  if (model.dim() != grid.dim) throw ConfigError("model and grid dimensions differ");
  auto E = exponent_on_grid(model, grid);
  const Vec& b = model.drift();
  for (std::size_t h = 0; h < E.size(); ++h) {
    const Vec xi = half_frequency(grid, h);
    E[h] += cplx(model.quad_form(xi), -dot(xi, b));
  }
  auto inv = invert_exponent(grid, E, t, "heat kernel");
  check_mass(inv.field, "heat kernel");
  return {std::move(inv.field), t, Provenance::spectral, inv.l2};
}

namespace {

std::vector<cplx> small_jump_exponent(const LevyModel& model, double r, const Grid& grid) {
  std::vector<cplx> E(fft::half_size(grid.dims()), cplx{});
  if (r <= 0.0 || model.no_jumps()) return E;
  E = exponent_on_grid(model, grid, 0.0, r);
  if (r > 1.0) {
    const Vec m1 = annulus_moment(model, 1.0, r);
    for (std::size_t h = 0; h < E.size(); ++h) E[h] += cplx(0.0, dot(half_frequency(grid, h), m1));
  }
  return E;
}

}  // namespace

KernelField small_jump_kernel(const LevyModel& model, double r, double t, const Grid& grid) {
  if (!(r > 0.0)) throw ConfigError("small-jump kernel needs r > 0");
  if (model.finite_mass())
    throw GridError("small-jump part of a finite measure has an atom; no density on a grid");
  auto inv = invert_exponent(grid, small_jump_exponent(model, r, grid), t, "small-jump kernel");
  check_mass(inv.field, "small-jump kernel");
  return {std::move(inv.field), t, Provenance::spectral, inv.l2};
}

KernelField lambda_kernel(const LevyModel& model, double r, double t, const Grid& grid) {
  if (!model.has_gaussian() && (r == 0.0 || model.finite_mass()))
    throw GridError("lambda_t is not a density without a Gaussian part");
  auto E = small_jump_exponent(model, r, grid);
  for (std::size_t h = 0; h < E.size(); ++h) E[h] += model.quad_form(half_frequency(grid, h));
  auto inv = invert_exponent(grid, E, t, "lambda_t");
  check_mass(inv.field, "lambda_t");
  return {std::move(inv.field), t, Provenance::spectral, inv.l2};
}

// ---- relativistic oracle

double half_stable_subordinator(double t, double s) {
  if (s <= 0.0) return 0.0;
  return t / (2.0 * std::sqrt(kPi)) * std::pow(s, -1.5) * std::exp(-t * t / (4.0 * s));
}

double relativistic_oracle_log(unsigned d, double m, double t, double x) {
  if (!(t > 0.0) || m < 0.0) throw ConfigError("relativistic oracle needs t > 0, m >= 0");
  // s = e^u; log integrand g(u)
  const double a = 0.25 * (x * x + t * t);
  const double c = 0.5 * (d + 1.0);
  const double m2 = m * m;
  const double base = m * t + std::log(t / (2.0 * std::sqrt(kPi))) -
                      0.5 * d * std::log(4.0 * kPi);
  auto g = [&](double u) { return -c * u - a * std::exp(-u) - m2 * std::exp(u); };
  const double w = m2 > 0.0 ? (-c + std::sqrt(c * c + 4.0 * m2 * a)) / (2.0 * m2) : a / c;
  const double us = std::log(w);
  const double gs = g(us);
  const double sigma = 1.0 / std::sqrt(a / w + m2 * w);
  auto f = [&](double u) {
    const double v = g(u) - gs;
    return v > -745.0 ? std::exp(v) : 0.0;
  };
  std::vector<double> pts;
  for (int k = -64; k <= 64; k += 2) pts.push_back(us + k * sigma);
  double sum = quad::adaptive_pieces(f, pts, 1e-13, 12).value;
  sum += quad::adaptive(f, -kInf, pts.front(), 1e-13, 12).value;
  sum += quad::half_line(f, pts.back(), 1e-13).value;
  if (!(sum > 0.0) || !std::isfinite(sum))
    throw NumericalError("relativistic oracle quadrature failed at x = " + std::to_string(x));
  return base + gs + std::log(sum);
}

double relativistic_oracle(unsigned d, double m, double t, double x) {
  return std::exp(relativistic_oracle_log(d, m, t, x));
}

// ---- decomposition

DecompositionReport decomposition_check(const LevyModel& model, double t, const Grid& grid,
                                        std::optional<double> r) {
  DecompositionReport rep;
  rep.r = r ? *r : h_of_t(model, t);
  const KernelField lam = lambda_kernel(model, rep.r, t, grid);
  const CompoundPoisson cp = compound_poisson(model, rep.r, t, grid, Boundary::periodic);
  rep.tail_mass = cp.base_mass;
  rep.terms = cp.terms;
  DensityField sum = lam.field;
  sum *= std::exp(-t * cp.base_mass);
  sum += convolve(lam.field, cp.field, Boundary::periodic);
  const Vec br = drift_correction(model, rep.r);
  if (norm(br) > 0.0) {
    const Vec shift = scaled(br, t);
    sum = apply_multiplier(sum, [&](std::span<const double> xi) {
      return std::exp(cplx(0.0, dot(xi, shift)));
    });
  }
  rep.assembled = std::move(sum);
  rep.reference = heat_kernel_spectral(model, t, grid).field;
  rep.sup_residual = relative_sup_error(rep.assembled, rep.reference);
  rep.mass_residual = std::abs(rep.assembled.mass() - 1.0);
  return rep;
}

double semigroup_residual(const LevyModel& model, double t, double s, const Grid& grid) {
  const auto a = heat_kernel_spectral(model, t, grid);
  const auto b = heat_kernel_spectral(model, s, grid);
  const auto c = heat_kernel_spectral(model, t + s, grid);
  return relative_sup_error(convolve(a.field, b.field, Boundary::periodic), c.field);
}

double periodization_estimate(const LevyModel& model, double t, const Grid& grid,
                              std::span<const double> x) {
  const int K = grid.dim == 1 ? 64 : (grid.dim == 2 ? 8 : 3);
  const double P = 2.0 * grid.half_width;
  std::vector<int> k(grid.dim, -K);
  Vec y(grid.dim);
  double sum = 0.0;
  while (true) {
    bool zero = true;
    for (unsigned a = 0; a < grid.dim; ++a) {
      y[a] = x[a] + P * k[a];
      zero = zero && k[a] == 0;
    }
    if (!zero) sum += model.density(y);
    unsigned a = 0;
    while (a < grid.dim && ++k[a] > K) k[a++] = -K;
    if (a == grid.dim) break;
  }
  return t * sum;
}

double roundoff_floor(const Grid& grid, double l2) {
  const double n = static_cast<double>(grid.size());
  return 4.0 * std::numeric_limits<double>::epsilon() * std::log2(n) * l2 /
         std::pow(2.0 * grid.half_width, grid.dim);
}

double interpolate(const DensityField& f, std::span<const double> x) {
  const Grid& g = f.grid();
  if (g.dim == 1) return f.interpolate(x[0]);
  std::vector<std::size_t> i0(g.dim);
  Vec fr(g.dim);
  for (unsigned a = 0; a < g.dim; ++a) {
    const double u = x[a] / g.spacing() + static_cast<double>(g.n / 2);
    if (u < 0.0 || u >= static_cast<double>(g.n - 1)) return 0.0;
    i0[a] = static_cast<std::size_t>(u);
    fr[a] = u - static_cast<double>(i0[a]);
  }
  double sum = 0.0;
  for (unsigned corner = 0; corner < (1U << g.dim); ++corner) {
    std::size_t idx = 0;
    double w = 1.0;
    for (unsigned a = 0; a < g.dim; ++a) {
      const bool up = (corner >> a) & 1U;
      idx = idx * g.n + i0[a] + (up ? 1 : 0);
      w *= up ? fr[a] : 1.0 - fr[a];
    }
    sum += w * f[idx];
  }
  return sum;
}

Certification certify_point(const LevyModel& model, const KernelField& k,
                            std::span<const double> x, double rel) {
  Certification c;
  const double v = interpolate(k.field, x);
  c.periodization = periodization_estimate(model, k.t, k.field.grid(), x);
  c.roundoff = roundoff_floor(k.field.grid(), k.spectrum_l2);
  c.ok = v > 0.0 && c.periodization < rel * v && c.roundoff < rel * v;
  return c;
}

// ---- far field

FarField::FarField(const LevyModel& model, double t, Options opt)
    : model_(&model), t_(t), opt_(opt) {
  if (model.dim() != 1) throw ConfigError("far field is implemented for d = 1");
  if (!(t > 0.0)) throw ConfigError("far field needs t > 0");
  const double one = 1.0, minus = -1.0;
  const double gp = model.angular()(std::span<const double>(&one, 1));
  const double gm = model.angular()(std::span<const double>(&minus, 1));
  if (opt.use_oracle && !model.has_gaussian()) {
    const auto kind = model.radial_kind();
    if (kind == LevyModel::Radial::power && *model.alpha() == 1.0 && gp == gm) {
      oracle_ = Oracle::cauchy;
      cauchy_gamma_ = (gp + gm) * model.scale() * 0.5 * kPi;
    } else if (kind == LevyModel::Radial::relativistic && *model.alpha() == 1.0 &&
               model.scale() == 1.0) {
      oracle_ = Oracle::relativistic;
    }
    if (oracle_ != Oracle::none) {
      shift_ = t * model.drift()[0];
      return;
    }
  }
  r_ = opt.r ? *opt.r : h_of_t(model, t);
  if (r_ == 0.0 && !model.finite_mass()) throw ConfigError("far field with r = 0 needs a finite measure");
  mass_ = r_ == 0.0 ? model.total_mass() : model.tail_mass(r_);
  shift_ = t * drift_correction(model, r_)[0];

  const double tm = t * mass_;
  n_max_ = 1;
  if (tm > 0.0) {
    const boost::math::poisson_distribution<double> pois(tm);
    while (n_max_ < opt.n_cap && boost::math::cdf(boost::math::complement(pois, n_max_ - 1.0)) >
                                     opt.series_tol)
      ++n_max_;
  }
  TailLine::Options lo;
  lo.n_max = std::max(2U, n_max_);
  lo.x_max = opt.x_max;
  line_ = std::make_shared<TailLine>(model, r_, lo);

  point_mass_ = r_ == 0.0 && !model.has_gaussian();
  if (point_mass_) return;
  double ell = r_;
  const Vec& A = model.gaussian();
  if (!A.empty()) ell = std::max(ell, 3.0 * std::sqrt(t * A[0]));
  double L = 8.0 * ell;
  std::size_t n = 256;
  while (true) {
    if (n > (1U << 18)) throw GridError("far field: lambda_t does not fit on a grid of 2^18 nodes");
    const Grid g(1, n, L);
    try {
      lambda_ = lambda_kernel(model, r_, t, g).field;
    } catch (const GridError&) {
      n *= 2;
      continue;
    }
    const double sup = lambda_.sup();
    double edge = 0.0;
    for (std::size_t j = 0; j < n / 16; ++j)
      edge = std::max({edge, lambda_[j], lambda_[n - 1 - j]});
    if (edge <= 1e-13 * sup) break;
    L *= 2.0;
    n *= 2;
  }
  const double sup = lambda_.sup();
  const double dx = lambda_.grid().spacing();
  for (std::size_t j = 0; j < lambda_.size(); ++j) {
    if (lambda_[j] <= 1e-17 * sup) continue;
    z_.push_back(lambda_.grid().node(j));
    w_.push_back(dx * lambda_[j]);
  }
}

FarFieldValue FarField::evaluate(double x, double log_ref) const {
  FarFieldValue out;
  if (oracle_ == Oracle::cauchy) {
    const double y = x - shift_;
    const double g = cauchy_gamma_ * t_;
    out.value = g / (kPi * (g * g + y * y));
    out.log_value = std::log(out.value);
    out.accuracy = 1e-15;
    out.note = "closed form";
    return out;
  }
  if (oracle_ == Oracle::relativistic) {
    out.log_value = relativistic_oracle_log(1, model_->rel_mass(), t_, x - shift_);
    out.value = std::exp(out.log_value);
    out.accuracy = 1e-10;
    out.note = "subordinator quadrature";
    return out;
  }
  const double y = x - shift_;
  const double e0 = -t_ * mass_;
  // log weights of the series terms: log(e^{-tM} t^n / n!)
  Vec lc(n_max_ + 1);
  for (unsigned k = 1; k <= n_max_; ++k) lc[k] = e0 + k * std::log(t_) - std::lgamma(k + 1.0);
  Vec term(n_max_ + 1, 0.0);
  double atom = 0.0;
  if (point_mass_) {
    for (unsigned k = 1; k <= n_max_; ++k) {
      const double lq = line_->log_q(k, y);
      if (std::isfinite(lq)) term[k] = std::exp(lc[k] + lq - log_ref);
    }
  } else {
    const double lam = lambda_.interpolate(y);
    if (lam > 0.0) atom = std::exp(e0 + std::log(lam) - log_ref);
    for (unsigned k = 1; k <= n_max_; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < z_.size(); ++j) {
        const double lq = line_->log_q(k, y - z_[j]);
        if (std::isfinite(lq)) s += w_[j] * std::exp(lc[k] + lq - log_ref);
      }
      term[k] = s;
    }
  }
  double total = atom;
  for (unsigned k = 1; k <= n_max_; ++k) total += term[k];
  out.value = total;
  out.terms.assign(term.begin() + 1, term.end());
  if (!(total > 0.0)) {
    out.refused = true;
    out.log_value = -kInf;
    out.note = "all series terms vanish";
    return out;
  }
  for (double& v : out.terms) v /= total;
  // remainder estimate: geometric continuation of the last term
  const double last = out.terms.back();
  const double tm = t_ * mass_;
  const double q = tm / (n_max_ + 1.0);
  const double rem = q < 1.0 ? last * q / (1.0 - q) : kInf;
  out.accuracy = 2e-5 + rem;
  if (n_max_ >= 3 && out.terms[2] > 0.1 && n_max_ >= opt_.n_cap) {
    out.refused = true;
    out.note = "third term contributes " + std::to_string(out.terms[2]) + " with the term cap reached";
  } else if (out.accuracy > 0.1) {
    out.refused = true;
    out.note = "series remainder too large";
  }
  out.log_value = log_ref + std::log(total);
  return out;
}

FarFieldValue FarField::operator()(double x) const {
  double log_ref = 0.0;
  if (oracle_ == Oracle::none) {
    log_ref = line_->log_q(1, x - shift_);
    if (!std::isfinite(log_ref)) log_ref = line_->log_q(std::min(2U, n_max_), x - shift_);
    if (!std::isfinite(log_ref)) log_ref = 0.0;
  }
  FarFieldValue v = evaluate(x, log_ref);
  v.value = std::exp(v.log_value);
  return v;
}

FarFieldValue FarField::ratio_to_nu(double x) const {
  const double ln = model_->log_density1(x);
  if (!std::isfinite(ln)) throw ConfigError("nu vanishes at x = " + std::to_string(x));
  FarFieldValue v = evaluate(x, ln);
  if (oracle_ != Oracle::none) v.value = std::exp(v.log_value - ln);
  return v;
}

}  // namespace levyheat
