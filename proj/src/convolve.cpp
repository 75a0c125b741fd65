#include "levyheat/convolve.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>

#include "levyheat/fft.hpp"
#include "levyheat/quadrature.hpp"
#include "levyheat/symbol.hpp"

namespace levyheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kImages = 16;

// 8-point Gauss-Legendre on [-1, 1].
const std::array<std::pair<double, double>, 8>& gl8() {
  static const auto rule = [] {
    using G = boost::math::quadrature::gauss<double, 8>;
    std::array<std::pair<double, double>, 8> r{};
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < 4; ++i) {
      r[2 * i] = {x[i], w[i]};
      r[2 * i + 1] = {-x[i], w[i]};
    }
    return r;
  }();
  return rule;
}

// Integral of w over [a, b] minus (-r, r).
template <class W>
double piece_integral(const W& w, double a, double b, double r) {
  double s = 0.0;
  auto add = [&](double lo, double hi) {
    if (!(hi > lo)) return;
    if (lo == 0.0 || hi == 0.0) {
      s += quad::endpoint_singular(w, lo, hi, 1e-13).value;
    } else {
      s += quad::gauss20(w, lo, hi);
    }
  };
  if (r > 0.0) {
    add(a, std::min(b, -r));
    add(std::max(a, r), b);
  } else if (a < 0.0 && b > 0.0) {
    add(a, 0.0);
    add(0.0, b);
  } else {
    add(a, b);
  }
  return s;
}

// Tabulated T(X) = int_X^inf w on [x0, x1], linear interpolation.
struct TailTable {
  double x0 = 0.0, dx = 1.0;
  Vec v;
  template <class W>
  TailTable(const W& w, double a, double b, std::size_t m = 512) : x0(a), dx((b - a) / m), v(m + 1) {
    parallel_for(m + 1, [&](std::size_t i) {
      const double X = a + dx * static_cast<double>(i);
      const double val = quad::half_line(w, X, 1e-10).value;
      if (!std::isfinite(val)) throw DivergentMoment("tilted tail integral diverges");
      v[i] = val;
    });
  }
  double operator()(double X) const {
    const double u = std::clamp((X - x0) / dx, 0.0, static_cast<double>(v.size() - 1));
    const auto j = std::min(static_cast<std::size_t>(u), v.size() - 2);
    const double f = u - static_cast<double>(j);
    return (1.0 - f) * v[j] + f * v[j + 1];
  }
};

DensityField sample_1d(const LevyModel& model, double r, const Grid& grid, bool periodic,
                       double tilt) {
  auto w = [&](double y) {
    if (std::abs(y) < r || y == 0.0) return 0.0;
    const double lv = model.log_density1_tilted(y, tilt);
    return std::isfinite(lv) ? std::exp(lv) : 0.0;
  };
  const double dx = grid.spacing();
  const double L = grid.half_width;
  DensityField out(grid);
  const int K = periodic ? kImages : 0;
  parallel_for(grid.n, [&](std::size_t j) {
    const double c = grid.node(j);
    double s = 0.0;
    for (int k = -K; k <= K; ++k) {
      const double cc = c + 2.0 * L * k;
      const double a = cc - 0.5 * dx, b = cc + 0.5 * dx;
      if (k != 0 && w(a > 0.0 ? a : b) == 0.0) continue;
      s += piece_integral(w, a, b, r);
    }
    out[j] = s;
  });
  if (periodic) {
    const double X0 = (2.0 * K) * L, X1 = (2.0 * K + 2.0) * L;
    auto wl = [&](double z) { return w(-z); };
    const TailTable right(w, X0, X1);
    const TailTable left(wl, X0, X1);
    // sum_{k>K} F(k) = int_{K+1/2}^inf F + F'(K+1/2)/24 + ..., F(k) = dx w(c + 2Lk)
    const double f = dx / (2.0 * L);
    const double h = 1e-3 * L;
    auto slope = [&](const auto& fn, double X) { return (fn(X + h) - fn(X - h)) / (2.0 * h); };
    for (std::size_t j = 0; j < grid.n; ++j) {
      const double c = grid.node(j);
      const double Xr = c + (2.0 * K + 1.0) * L;
      const double Xl = (2.0 * K + 1.0) * L - c;
      out[j] += f * (right(Xr) + left(Xl)) +
                dx * 2.0 * L / 24.0 * (slope(w, Xr) + slope(wl, Xl));
    }
  }
  for (std::size_t j = 0; j < grid.n; ++j) {
    out[j] /= dx;
    if (!std::isfinite(out[j]))
      throw GridError("non-finite sample of nu_r at x = " + std::to_string(grid.node(j)));
  }
  return out;
}

DensityField sample_2d(const LevyModel& model, double r, const Grid& grid, bool periodic,
                       std::span<const double> tilt) {
  const double t0 = tilt.empty() ? 0.0 : tilt[0];
  const double t1 = tilt.empty() ? 0.0 : tilt[1];
  auto w = [&](double a, double b) {
    const double rr = std::hypot(a, b);
    if (rr < r || rr == 0.0) return 0.0;
    const std::array<double, 2> y{a, b};
    const double lv = model.log_density(y) + t0 * a + t1 * b;
    return std::isfinite(lv) ? std::exp(lv) : 0.0;
  };
  const auto& rule = gl8();
  const double dx = grid.spacing();
  const double L = grid.half_width;
  // cell integral; cells cut by the sphere |y| = r or at the origin are subdivided
  auto cell = [&](double ca, double cb) {
    const double h = 0.5 * dx;
    const double near = std::hypot(std::max(0.0, std::abs(ca) - h), std::max(0.0, std::abs(cb) - h));
    const double far = std::hypot(std::abs(ca) + h, std::abs(cb) + h);
    const bool cut = (near < r && far > r) || near == 0.0;
    const int sub = cut ? 16 : 1;
    const double hs = h / sub;
    double s = 0.0;
    for (int p = 0; p < sub; ++p) {
      for (int q = 0; q < sub; ++q) {
        const double a0 = ca - h + (2 * p + 1) * hs;
        const double b0 = cb - h + (2 * q + 1) * hs;
        for (const auto& [xa, wa] : rule)
          for (const auto& [xb, wb] : rule) s += wa * wb * w(a0 + hs * xa, b0 + hs * xb);
      }
    }
    return s * hs * hs;
  };
  DensityField out(grid);
  const int K = periodic ? 1 : 0;
  parallel_for(grid.n, [&](std::size_t i) {
    for (std::size_t j = 0; j < grid.n; ++j) {
      double s = 0.0;
      for (int ka = -K; ka <= K; ++ka)
        for (int kb = -K; kb <= K; ++kb)
          s += cell(grid.node(i) + 2.0 * L * ka, grid.node(j) + 2.0 * L * kb);
      out[i * grid.n + j] = s / (dx * dx);
    }
  });
  return out;
}

std::vector<std::size_t> half_index(const Grid& g, std::size_t h) {
  const std::size_t last = g.n / 2 + 1;
  std::vector<std::size_t> idx(g.dim);
  idx[g.dim - 1] = h % last;
  h /= last;
  for (int a = static_cast<int>(g.dim) - 2; a >= 0; --a) {
    idx[a] = h % g.n;
    h /= g.n;
  }
  return idx;
}

int parity(const std::vector<std::size_t>& idx) {
  std::size_t s = 0;
  for (auto k : idx) s += k;
  return (s & 1U) ? -1 : 1;
}

}  // namespace

double RestrictedMeasure::operator()(std::span<const double> y) const {
  return norm(y) < r ? 0.0 : model->density(y);
}

RestrictedMeasure restrict_measure(const LevyModel& model, double r) {
  if (r < 0.0) throw ConfigError("cutoff r must be nonnegative");
  if (r == 0.0 && !model.finite_mass()) throw ConfigError("r = 0 needs a finite Levy measure");
  return {&model, r, r == 0.0 ? model.total_mass() : model.tail_mass(r)};
}

DensityField sample(const std::function<double(std::span<const double>)>& density, const Grid& grid) {
  DensityField out(grid);
  parallel_for(grid.size(), [&](std::size_t i) {
    const Vec x = out.coords(i);
    const double v = density(x);
    if (!std::isfinite(v)) {
      std::string where;
      for (double c : x) where += (where.empty() ? "" : ",") + std::to_string(c);
      throw GridError("non-finite density sample at node (" + where + ")");
    }
    out[i] = v;
  });
  return out;
}

DensityField sample_restricted(const LevyModel& model, double r, const Grid& grid, bool periodic,
                               std::span<const double> tilt) {
  if (grid.dim != model.dim()) throw GridError("grid and model dimensions differ");
  if (r < 0.0 || (r == 0.0 && !model.finite_mass()))
    throw ConfigError("sampling nu_r needs r > 0 for infinite measures");
  if (model.no_jumps()) return DensityField(grid);
  if (grid.dim == 1) return sample_1d(model, r, grid, periodic, tilt.empty() ? 0.0 : tilt[0]);
  if (grid.dim == 2) return sample_2d(model, r, grid, periodic, tilt);
  throw GridError("sampling is implemented for d = 1, 2");
}

Vec half_frequency(const Grid& grid, std::size_t h) {
  const auto idx = half_index(grid, h);
  Vec xi(grid.dim);
  for (unsigned a = 0; a < grid.dim; ++a) xi[a] = grid.frequency(idx[a]);
  return xi;
}

std::vector<cplx> spectrum(const DensityField& f) {
  const Grid& g = f.grid();
  auto R = fft::r2c(f.values(), g.dims());
  const double vol = g.cell_volume();
  for (std::size_t h = 0; h < R.size(); ++h)
    R[h] = vol * static_cast<double>(parity(half_index(g, h))) * std::conj(R[h]);
  return R;
}

DensityField invert_spectrum(const Grid& grid, const std::vector<cplx>& hat) {
  std::vector<cplx> c(hat.size());
  for (std::size_t h = 0; h < hat.size(); ++h)
    c[h] = static_cast<double>(parity(half_index(grid, h))) * std::conj(hat[h]);
  Vec v = fft::c2r(c, grid.dims());
  const double norm_ = std::pow(2.0 * grid.half_width, -static_cast<double>(grid.dim));
  for (double& x : v) x *= norm_;
  return DensityField(grid, std::move(v));
}

DensityField invert_spectrum(const Grid& grid,
                             const std::function<cplx(std::span<const double>)>& hat) {
  std::vector<cplx> h(fft::half_size(grid.dims()));
  parallel_for(h.size(), [&](std::size_t k) { h[k] = hat(half_frequency(grid, k)); });
  return invert_spectrum(grid, h);
}

DensityField apply_multiplier(const DensityField& f,
                              const std::function<cplx(std::span<const double>)>& multiplier) {
  auto S = spectrum(f);
  const Grid& g = f.grid();
  parallel_for(S.size(), [&](std::size_t k) { S[k] *= multiplier(half_frequency(g, k)); });
  return invert_spectrum(g, S);
}

DensityField convolve(const DensityField& a, const DensityField& b, Boundary boundary,
                      double spill_tol) {
  if (!(a.grid() == b.grid())) throw GridError("convolve: grid mismatch");
  const Grid& g = a.grid();
  if (boundary == Boundary::periodic) {
    auto A = spectrum(a);
    const auto B = spectrum(b);
    for (std::size_t k = 0; k < A.size(); ++k) A[k] *= B[k];
    return invert_spectrum(g, A);
  }
  // zero-padded linear convolution on (2N)^d
  const std::size_t n = g.n, n2 = 2 * n;
  std::vector<int> dims(g.dim, static_cast<int>(n2));
  std::size_t total = 1;
  for (unsigned i = 0; i < g.dim; ++i) total *= n2;
  auto pad = [&](const DensityField& f) {
    Vec p(total, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      std::size_t src = i, dst = 0, mul = 1;
      for (unsigned ax = 0; ax < g.dim; ++ax) {
        dst += (src % n) * mul;
        src /= n;
        mul *= n2;
      }
      p[dst] = f[i];
    }
    return p;
  };
  auto A = fft::r2c(pad(a), dims);
  const auto B = fft::r2c(pad(b), dims);
  for (std::size_t k = 0; k < A.size(); ++k) A[k] *= B[k];
  const Vec c = fft::c2r(A, dims);
  const double scale = g.cell_volume() / static_cast<double>(total);
  DensityField out(g);
  double inside = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t src = i, dst = 0, mul = 1;
    for (unsigned ax = 0; ax < g.dim; ++ax) {
      dst += (src % n + n / 2) * mul;
      src /= n;
      mul *= n2;
    }
    out[i] = c[dst] * scale;
    inside += out[i];
  }
  double all = 0.0;
  for (double v : c) all += v;
  const double spill = std::abs(all * scale - inside) / std::max(std::abs(all * scale), 1e-300);
  if (spill > spill_tol)
    throw GridError("convolution spills " + std::to_string(spill) +
                    " of its mass outside the window; enlarge L");
  return out;
}

DensityField nfold(const DensityField& base, unsigned n, Boundary boundary, double spill_tol) {
  if (n == 0) throw ConfigError("nfold needs n >= 1");
  DensityField result;
  bool have = false;
  DensityField p = base;
  unsigned k = n;
  while (k > 0) {
    if (k & 1U) {
      result = have ? convolve(result, p, boundary, spill_tol) : p;
      have = true;
    }
    k >>= 1U;
    if (k > 0) p = convolve(p, p, boundary, spill_tol);
  }
  const double want = std::pow(base.mass(), n);
  if (std::abs(result.mass() - want) > 1e-6 * std::abs(want))
    throw GridError("n-fold convolution lost mass (aliasing); enlarge the grid");
  return result;
}

CompoundPoisson compound_poisson_series(const DensityField& base, double t, Boundary boundary,
                                        unsigned extra_terms) {
  if (!(t > 0.0)) throw ConfigError("compound Poisson needs t > 0");
  const double M = base.mass();
  const double lam = t * M;
  DensityField term = base;
  term *= t;
  DensityField sum = term;
  unsigned n = 1;
  const double sup0 = base.sup() / std::max(M, 1e-300);
  auto remainder = [&](unsigned k) {
    // sum_{j>k} lam^j / j!
    double s = 0.0, c = std::pow(lam, k) / std::tgamma(k + 1.0);
    for (unsigned j = k + 1; j < k + 400; ++j) {
      c *= lam / j;
      s += c;
      if (c < 1e-18 * s) break;
    }
    return s;
  };
  unsigned stop = 0;
  while (true) {
    if (stop == 0 && sup0 * remainder(n) < 1e-12 * sum.sup()) stop = n + extra_terms;
    if (stop != 0 && n >= stop) break;
    if (n > 2000) throw NumericalError("compound Poisson series does not truncate");
    term = convolve(term, base, boundary, 1e-3);
    term *= t / (n + 1.0);
    sum += term;
    ++n;
  }
  sum *= std::exp(-lam);
  return {std::move(sum), n, M};
}

CompoundPoisson compound_poisson(const LevyModel& model, double r, double t, const Grid& grid,
                                 Boundary boundary) {
  const DensityField base = sample_restricted(model, r, grid, boundary == Boundary::periodic);
  return compound_poisson_series(base, t, boundary);
}

DensityField compound_poisson_spectral(const DensityField& base, double t) {
  auto S = spectrum(base);
  const double M = base.mass();
  for (auto& s : S) s = std::exp(-t * M) * (std::exp(t * s) - 1.0);
  return invert_spectrum(base.grid(), S);
}

// ---- K(r)

double k_ratio(const RadialProfile& f, double r, double x) {
  const double lfx = f.log_value(x);
  auto pair = [&](double a, double b) { return std::exp(f.log_value(a) + f.log_value(b) - lfx); };
  const unsigned d = f.dim;
  if (d == 1) {
    // both outer half-lines give int_r^inf f(x+u) f(u) du
    double s = 2.0 * quad::half_line([&](double u) { return pair(x + u, u); }, r, 1e-10).value;
    if (x > 2.0 * r) {
      std::vector<double> pts{r};
      for (double p = 2.0 * r; p < 0.5 * x; p *= 2.0) pts.push_back(p);
      pts.push_back(0.5 * x);
      s += 2.0 * quad::adaptive_pieces([&](double y) { return pair(x - y, y); }, pts, 1e-10, 12).value;
    }
    return s;
  }
  // two-center reduction: |y| = rho, |x - y| = u, dy = |S^{d-2}| rho^{d-2} u sin^{d-3} / x du drho
  const double area = quad::sphere_area(d - 1);
  auto inner = [&](double rho) {
    const double lo = std::max(r, std::abs(x - rho));
    const double hi = x + rho;
    if (!(hi > lo)) return 0.0;
    auto fu = [&](double u) {
      const double c = (x * x + rho * rho - u * u) / (2.0 * x * rho);
      const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
      const double ang = d == 3 ? 1.0 : std::pow(sn, d - 3.0);
      return pair(u, rho) * ang * u;
    };
    const double v = d == 3 ? quad::adaptive(fu, lo, hi, 1e-9, 10).value
                            : quad::endpoint_singular(fu, lo, hi, 1e-9).value;
    return area * std::pow(rho, d - 2.0) * v / x;
  };
  std::vector<double> pts{r};
  for (double p : {x - r, x, x + r})
    if (p > pts.back()) pts.push_back(p);
  double s = quad::adaptive_pieces(inner, pts, 1e-8, 10).value;
  s += quad::half_line(inner, pts.back(), 1e-8).value;
  return s;
}

namespace {

std::pair<double, double> k_sup(const RadialProfile& f, double r, double x_max, unsigned points) {
  Vec vals(points);
  const double x0 = 1.0 + 1e-3;
  const double q = std::log(x_max / x0) / (points - 1.0);
  parallel_for(points, [&](std::size_t i) { vals[i] = k_ratio(f, r, x0 * std::exp(q * i)); });
  const auto it = std::max_element(vals.begin(), vals.end());
  return {*it, x0 * std::exp(q * static_cast<double>(it - vals.begin()))};
}

}  // namespace

KEstimate k_function(const RadialProfile& f, double r, double x_max, unsigned points) {
  if (r < 1.0) throw ConfigError("K(r) is defined for r >= 1");
  KEstimate e;
  e.r = r;
  auto [v, at] = k_sup(f, r, x_max, points);
  for (int k = 0; k < 12; ++k) {
    const double x2 = 2.0 * x_max;
    const auto [v2, at2] = k_sup(f, r, x2, points);
    const bool settled = std::abs(v2 - v) < 0.01 * std::abs(v);
    x_max = x2;
    v = v2;
    at = at2;
    if (settled) {
      e.value = v;
      e.x_at_sup = at;
      e.x_max = x_max;
      return e;
    }
  }
  e.value = v;
  e.x_at_sup = at;
  e.x_max = x_max;
  e.divergent = true;
  return e;
}

std::vector<KEstimate> k_table(const RadialProfile& f, const Vec& radii, double x_max) {
  std::vector<KEstimate> out;
  double common = x_max;
  for (double r : radii) {
    const auto e = k_function(f, r, x_max);
    common = std::max(common, e.x_max);
    out.push_back(e);
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const auto [v, at] = k_sup(f, radii[i], common, 64);
    out[i].value = v;
    out[i].x_at_sup = at;
    out[i].x_max = common;
  }
  return out;
}

double exp_moment_integral(const LevyModel& model, double r, std::span<const double> theta,
                           unsigned n) {
  const Vec xi = scaled(theta, model.kappa());
  double I = 0.0;
  if (model.kappa() == 0.0) {
    I = r == 0.0 ? model.total_mass() : model.tail_mass(r);
  } else if (r > 0.0) {
    I = exp_tail_integral(model, xi, r);
  } else {
    if (!model.finite_mass()) throw ConfigError("r = 0 needs a finite Levy measure");
    // int e^{<xi,y>} nu = |nu| - int (1 - e^{<xi,y>} + <xi,y> 1_B) nu + <xi, int_B y nu>
    const double jump = exp_moment_exponent(model, xi) + dot(xi, model.drift()) + model.quad_form(xi);
    I = model.total_mass() - jump + dot(xi, annulus_moment(model, 0.0, 1.0));
  }
  return std::pow(I, n);
}

}  // namespace levyheat
