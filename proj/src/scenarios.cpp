#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "levyheat/asymptotics.hpp"
#include "levyheat/harness.hpp"
#include "levyheat/kernel.hpp"
#include "levyheat/quadrature.hpp"
#include "levyheat/symbol.hpp"

namespace levyheat {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double fit_slope(const Vec& x, const Vec& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Vec times(const Vec& v, double c) {
  Vec out = v;
  for (double& x : out) x *= c;
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

json series_json(const RatioSeries& s, const ConvergenceVerdict& v) {
  json j = s.to_json();
  j["verdict"] = v.to_json();
  return j;
}

// K(r) -> 0 verdicts for f(s) = e^{-m s^beta} s^{-delta}: {m, beta, delta, d, verdict}.
struct ClassRow {
  double m, beta, delta;
  unsigned d;
  ProfileClass::Verdict expect;
};

std::vector<ClassRow> classification_table() {
  using V = ProfileClass::Verdict;
  return {
      {0, 0, 0.5, 1, V::fails},        {0, 0, 1, 1, V::fails},
      {0, 0, 1.5, 1, V::poly_ok},      {0, 0, 3, 1, V::poly_ok},
      {0, 0, 2, 2, V::fails},          {0, 0, 2.5, 2, V::poly_ok},
      {0, 0, 3, 3, V::fails},          {0, 0, 3.5, 3, V::poly_ok},
      {0, 0, 1.9, 2, V::fails},        {0, 1, 2, 1, V::poly_ok},
      {1, 0.5, 0, 1, V::stretched_ok}, {1, 0.5, 1, 1, V::stretched_ok},
      {0.5, 0.3, 0, 2, V::stretched_ok}, {2, 0.9, 5, 3, V::stretched_ok},
      {1, 0.1, 0.5, 2, V::stretched_ok}, {1, 0.99, 0, 3, V::stretched_ok},
      {0.1, 0.5, 2, 1, V::stretched_ok}, {3, 0.7, 1.5, 2, V::stretched_ok},
      {1, 0.5, 0, 3, V::stretched_ok}, {1, 0.25, 4, 1, V::stretched_ok},
      {1, 1, 0.5, 1, V::fails},        {1, 1, 1, 1, V::fails},
      {1, 1, 1.01, 1, V::exp_ok},      {1, 1, 1.5, 1, V::exp_ok},
      {1, 1, 3, 1, V::exp_ok},         {2, 1, 0, 1, V::fails},
      {1, 1, 1, 2, V::fails},          {1, 1, 1.5, 2, V::fails},
      {1, 1, 1.6, 2, V::exp_ok},       {1, 1, 2.5, 2, V::exp_ok},
      {0.5, 1, 1.49, 2, V::fails},     {0.5, 1, 3, 2, V::exp_ok},
      {1, 1, 2, 3, V::fails},          {1, 1, 2.01, 3, V::exp_ok},
      {1, 1, 1, 3, V::fails},          {1, 1, 4, 3, V::exp_ok},
      {1, 1.5, 3, 1, V::fails},        {1, 2, 0, 2, V::fails},
      {0, 0, 1.01, 1, V::poly_ok},     {0, 0, 0, 1, V::fails},
      {0, 0, 2.01, 2, V::poly_ok},     {0, 0, 3.01, 3, V::poly_ok},
      {0.2, 0.5, 0.2, 1, V::stretched_ok}, {5, 0.8, 0, 2, V::stretched_ok},
      {1, 1, 0.99, 1, V::fails},       {3, 1, 1.2, 1, V::exp_ok},
      {0.1, 1, 1.7, 2, V::exp_ok},     {0.1, 1, 1.4, 2, V::fails},
      {2, 1, 2.5, 3, V::exp_ok},       {2, 1, 1.99, 3, V::fails},
  };
}

// Ratio series check: verdict pass at `tol`.
void ratio_check(Context& ctx, const std::string& name, const std::string& prov,
                 const std::function<RatioSeries()>& make, double tol) {
  ctx.check(name, prov, "ratio converges to the predicted limit", tol, [&](CheckResult& r) {
    const RatioSeries s = make();
    const ConvergenceVerdict v = diagnose(s, tol);
    r.measured = series_json(s, v);
    if (auto p = ctx.artifact(r, name + ".csv"); !p.empty()) s.write_csv(p);
    r.status = status_of(v.pass);
    r.note = v.note;
  });
}

// ---------------------------------------------------------------------------

void cauchy_oracle(Context& ctx) {
  const LevyModel mdl = ctx.model();
  const double tol1 = ctx.tol("spectral");
  ctx.check("spectral_vs_closed_form", "DERIVED", "t/(pi(t^2+x^2)) on |x| <= 20", tol1,
            [&](CheckResult& r) {
              const Grid g = ctx.grid("spectral_grid", 1);
              const double xr = ctx.number("spectral_window");
              std::ofstream csv;
              if (auto p = ctx.artifact(r, "spectral_vs_closed_form.csv"); !p.empty()) {
                csv.open(p);
                csv << "t,x,spectral,exact\n";
              }
              double worst = 0.0;
              for (double t : ctx.numbers("spectral_t")) {
                const KernelField k = heat_kernel_spectral(mdl, t, g);
                double err = 0.0;
                for (std::size_t j = 0; j < g.n; ++j) {
                  const double x = g.node(j);
                  if (std::abs(x) > xr) continue;
                  const double ex = t / (kPi * (t * t + x * x));
                  err = std::max(err, std::abs(k.field[j] - ex) / ex);
                  if (csv.is_open() && j % 64 == 0) csv << t << ',' << x << ',' << k.field[j] << ',' << ex << '\n';
                }
                r.measured["t=" + fmt(t)] = err;
                worst = std::max(worst, err);
              }
              r.measured["sup_rel_error"] = worst;
              r.status = status_of(worst < tol1);
            });

  const double tol_exact = ctx.tol("ratio_exact");
  const double tol_verdict = ctx.tol("ratio_verdict");
  for (double t : ctx.numbers("ratio_t")) {
    const std::string name = "ratio_t" + fmt(t);
    ctx.check(name, "DERIVED", "R(s) = x^2/(t^2+x^2); R(100t) > 0.999; verdict pass", tol_exact,
              [&](CheckResult& r) {
                const double th[1] = {1.0}, y[1] = {0.0};
                const RatioSeries s =
                    kernel_ratio_series(mdl, t, th, y, times(ctx.numbers("ratio_s_over_t"), t));
                const ConvergenceVerdict v = diagnose(s, tol_verdict);
                double err = 0.0, at100 = 0.0;
                for (const auto& p : s.points) {
                  const double x = p.s;
                  err = std::max(err, std::abs(p.ratio - x * x / (t * t + x * x)));
                  if (std::abs(p.s - 100.0 * t) < 1e-9 * t) at100 = p.ratio;
                }
                r.measured = series_json(s, v);
                r.measured["max_error_vs_exact"] = err;
                r.measured["ratio_at_100t"] = at100;
                if (auto p = ctx.artifact(r, name + ".csv"); !p.empty()) s.write_csv(p);
                r.status = status_of(err < tol_exact && at100 > 0.999 && v.pass);
              });
  }

  const double tol_far = ctx.tol("far_field");
  ctx.check("far_field_1e3", "DERIVED", "decomposed p_1(1000) matches the closed form", tol_far,
            [&](CheckResult& r) {
              const FarField far(mdl, 1.0);
              const double x = 1e3;
              const FarFieldValue v = far(x);
              const double ex = 1.0 / (kPi * (1.0 + x * x));
              const double err = std::abs(v.value / ex - 1.0);
              r.measured = {{"value", v.value}, {"exact", ex}, {"rel_error", err},
                            {"accuracy", v.accuracy}, {"terms", far.terms()}};
              r.status = status_of(!v.refused && err < tol_far);
            });

  const double eps = ctx.tol("sandwich_eps");
  ctx.check("sandwich", "DERIVED", "(1 -+ eps) t nu(x) band holds beyond R <= 100 t_max", eps,
            [&](CheckResult& r) {
              const Vec ts = ctx.numbers("sandwich_t");
              std::vector<Vec> ys, ths{{1.0}, {-1.0}};
              for (double y : ctx.numbers("sandwich_y")) ys.push_back({y});
              const SandwichReport rep =
                  sandwich_check(mdl, ts, ys, ths, eps, ctx.numbers("sandwich_s"));
              r.measured = rep.to_json();
              const double tmax = *std::max_element(ts.begin(), ts.end());
              r.status = status_of(rep.holds && rep.radius <= 100.0 * tmax);
            });

  const double tol_dec = ctx.tol("decomposition");
  ctx.check("decomposition", "DERIVED", "assembled p_t equals the spectral p_t", tol_dec,
            [&](CheckResult& r) {
              const DecompositionReport d =
                  decomposition_check(mdl, ctx.number("decomposition_t"), ctx.grid("decomposition_grid", 1));
              r.measured = {{"r", d.r}, {"tail_mass", d.tail_mass}, {"terms", d.terms},
                            {"sup_residual", d.sup_residual}, {"mass_residual", d.mass_residual}};
              r.status = status_of(d.sup_residual < tol_dec);
            });
}

void stable1d(Context& ctx) {
  const LevyModel mdl = ctx.model();
  const double tol = ctx.tol("ratio");
  const double t = ctx.number("t");
  const FarField far(mdl, t);
  for (double dir : {1.0, -1.0}) {
    const Vec th{dir}, y{0.0};
    ratio_check(ctx, dir > 0 ? "ratio_plus" : "ratio_minus", "PAPER",
                [&] { return kernel_ratio_series(far, mdl, th, y, ctx.numbers("s")); }, tol);
  }

  const double tol_k = ctx.tol("k_slope");
  for (double a : ctx.numbers("k_alpha")) {
    ctx.check("k_slope_alpha" + fmt(a), "PAPER", "log-log slope of K(r) = -alpha", tol_k,
              [&](CheckResult& r) {
                const RadialProfile f{1, 1.0 + a, 0.0, 0.0, 1.0 + a, 1.0};
                const Vec radii = ctx.numbers("k_radii");
                const auto ks = k_table(f, radii);
                Vec vals;
                for (const auto& k : ks) vals.push_back(k.value);
                const double slope = fit_slope(radii, vals);
                r.measured = {{"radii", radii}, {"K", vals}, {"slope", slope}};
                if (auto p = ctx.artifact(r, "k_alpha" + fmt(a) + ".csv"); !p.empty()) {
                  std::ofstream o(p);
                  o << "r,K\n";
                  for (std::size_t i = 0; i < radii.size(); ++i) o << radii[i] << ',' << vals[i] << '\n';
                }
                r.status = status_of(std::abs(slope + a) <= tol_k);
              });
  }

  const double tol_c = ctx.tol("convolution");
  ctx.check("convolution_ratio_n2", "PAPER", "nu_r^{2*}(s)/nu_r(s) -> 2 |nu_r|", tol_c,
            [&](CheckResult& r) {
              const Vec th{1.0}, y{0.0};
              const RatioSeries s =
                  convolution_ratio_series(mdl, ctx.number("convolution_r"), 2, th, y, ctx.numbers("convolution_s"));
              const double dev = std::abs(s.points.back().ratio / s.limit - 1.0);
              r.measured = s.to_json();
              r.measured["final_deviation"] = dev;
              if (auto p = ctx.artifact(r, "convolution_ratio_n2.csv"); !p.empty()) s.write_csv(p);
              r.status = status_of(dev <= tol_c);
            });
}

void stable2d_quadrants(Context& ctx) {
  const LevyModel mdl = ctx.model();
  const double tol = ctx.tol("ratio");
  const double budget = ctx.number("runtime_budget_s");
  ctx.check("quadrant_ratios", "PAPER", "p_t(s theta)/(t s^{-alpha-2}) -> g(theta) in {1, 2}", tol,
            [&](CheckResult& r) {
              const double t = ctx.number("t");
              const double alpha = *mdl.alpha();
              const KernelField k = heat_kernel_spectral(mdl, t, ctx.grid("grid", 2));
              const Vec s_list = ctx.numbers("s");
              const double band = ctx.number("min_abs_product");
              const unsigned nd = static_cast<unsigned>(ctx.number("directions"));
              std::ofstream csv;
              if (auto p = ctx.artifact(r, "quadrant_ratios.csv"); !p.empty()) {
                csv.open(p);
                csv << "angle,s,ratio,expected,certified\n";
              }
              double worst = 0.0;
              std::size_t used = 0, uncertified = 0;
              json rows = json::array();
              for (unsigned i = 0; i < nd; ++i) {
                const double phi = (i + 0.5) * 2.0 * kPi / nd;
                const double th[2] = {std::cos(phi), std::sin(phi)};
                if (std::abs(th[0] * th[1]) <= band) continue;
                const double expect = mdl.angular()(th);
                double best_s = 0.0, best_r = kNaN;
                for (double s : s_list) {
                  const double x[2] = {s * th[0], s * th[1]};
                  const Certification c = certify_point(mdl, k, x);
                  const double ratio = interpolate(k.field, x) / (t * std::pow(s, -alpha - 2.0));
                  if (csv.is_open()) csv << phi << ',' << s << ',' << ratio << ',' << expect << ',' << c.ok << '\n';
                  if (c.ok) best_s = s, best_r = ratio;
                }
                if (!(best_s > 0.0)) {
                  ++uncertified;
                  continue;
                }
                ++used;
                const double dev = std::abs(best_r / expect - 1.0);
                worst = std::max(worst, dev);
                rows.push_back({{"angle", phi}, {"s", best_s}, {"ratio", best_r}, {"expected", expect},
                                {"deviation", dev}});
              }
              r.measured = {{"directions", rows}, {"worst_deviation", worst}, {"used", used},
                            {"uncertified", uncertified}};
              r.status = status_of(used > 0 && worst <= tol);
            });
  ctx.check("runtime", "INVARIANT", "quadrant check within the runtime budget", budget,
            [&](CheckResult& r) {
              const double rt = ctx.results().back().runtime;
              r.measured = {{"runtime_s", rt}};
              r.status = status_of(rt < budget);
            });
}

void relativistic1d(Context& ctx) {
  const LevyModel mdl = ctx.model();
  const double m = mdl.rel_mass(), kappa = mdl.kappa();
  const double tol_psi = ctx.tol("psi_tilde");
  ctx.check("psi_tilde", "PAPER", "psi~(kappa theta) = -m", tol_psi, [&](CheckResult& r) {
    double worst = 0.0;
    for (double dir : {1.0, -1.0}) {
      const double xi[1] = {kappa * dir};
      const double v = exp_moment_exponent(mdl, xi);
      r.measured[dir > 0 ? "plus" : "minus"] = v;
      worst = std::max(worst, std::abs(v + m));
    }
    r.measured["error"] = worst;
    r.status = status_of(worst <= tol_psi);
  });

  const double tol_r = ctx.tol("ratio");
  ctx.check("oracle_ratios", "PAPER", "R(s) within tolerance of e^{mt + m<theta,y>}", tol_r,
            [&](CheckResult& r) {
              const double s = ctx.number("ratio_s");
              double worst = 0.0;
              json rows = json::array();
              for (double t : ctx.numbers("ratio_t"))
                for (double yy : ctx.numbers("ratio_y"))
                  for (double dir : {1.0, -1.0}) {
                    const Vec th{dir}, y{yy};
                    RatioOptions o;
                    o.use_oracle = true;
                    const RatioSeries rs = kernel_ratio_series(mdl, t, th, y, {s}, o);
                    const double lim = std::exp(m * t + m * dir * yy);
                    const double dev = std::abs(rs.points[0].ratio / lim - 1.0);
                    worst = std::max(worst, dev);
                    rows.push_back({{"t", t}, {"y", yy}, {"theta", dir}, {"ratio", rs.points[0].ratio},
                                    {"limit", lim}, {"deviation", dev}});
                  }
              r.measured = {{"rows", rows}, {"worst_deviation", worst}};
              r.status = status_of(worst <= tol_r);
            });

  const double tol_far = ctx.tol("far_field");
  ctx.check("far_field_vs_oracle", "DERIVED", "decomposed p_t(x) equals the subordinator oracle",
            tol_far, [&](CheckResult& r) {
              const double t = ctx.number("far_t");
              const FarField far(mdl, t);
              double worst = 0.0;
              for (double x : ctx.numbers("far_x")) {
                const FarFieldValue v = far(x);
                const double o = relativistic_oracle(1, m, t, x);
                const double e = std::abs(v.value / o - 1.0);
                r.measured["x=" + fmt(x)] = {{"value", v.value}, {"oracle", o}, {"rel_error", e}};
                worst = std::max(worst, v.refused ? kInf : e);
              }
              r.measured["worst"] = worst;
              r.status = status_of(worst <= tol_far);
            });

  const double tol_id = ctx.tol("oracle_identity");
  ctx.check("oracle_identities", "DERIVED",
            "m -> 0 gives Cauchy; unit mass; Laplace transform of eta is e^{-t sqrt(lambda)}", tol_id,
            [&](CheckResult& r) {
              double cauchy = 0.0;
              for (double t : {0.5, 1.0})
                for (double x : {0.0, 1.0, 3.0, 10.0}) {
                  const double ex = t / (kPi * (t * t + x * x));
                  cauchy = std::max(cauchy, std::abs(relativistic_oracle(1, 0.0, t, x) / ex - 1.0));
                }
              const double t = 1.0;
              const auto pm = quad::adaptive([&](double x) { return relativistic_oracle(1, m, t, x); },
                                             -kInf, kInf, 1e-12);
              double laplace = 0.0;
              for (double lam : {1.0, 4.0, 9.0}) {
                const auto q = quad::half_line(
                    [&](double s) { return std::exp(-lam * s) * half_stable_subordinator(t, s); }, 0.0);
                laplace = std::max(laplace, std::abs(q.value / std::exp(-t * std::sqrt(lam)) - 1.0));
              }
              r.measured = {{"cauchy_limit", cauchy}, {"mass_error", std::abs(pm.value - 1.0)},
                            {"laplace", laplace}};
              r.status = status_of(cauchy <= tol_id && std::abs(pm.value - 1.0) <= tol_id &&
                                   laplace <= tol_id);
            });

  const double tol_sp = ctx.tol("spectral");
  ctx.check("spectral_vs_oracle", "DERIVED", "FFT kernel equals the oracle on |x| <= 10", tol_sp,
            [&](CheckResult& r) {
              const Grid g = ctx.grid("spectral_grid", 1);
              const double t = ctx.number("far_t");
              const KernelField k = heat_kernel_spectral(mdl, t, g);
              double err = 0.0;
              for (std::size_t j = 0; j < g.n; ++j) {
                const double x = g.node(j);
                if (std::abs(x) > 10.0) continue;
                const double o = relativistic_oracle(1, m, t, x);
                err = std::max(err, std::abs(k.field[j] - o) / o);
              }
              r.measured = {{"sup_rel_error", err}};
              r.status = status_of(err <= tol_sp);
            });

  const double tol_c = ctx.tol("compound");
  ratio_check(ctx, "compound_ratio", "PAPER",
              [&] {
                const Vec th{1.0}, y{0.0};
                return compound_ratio_series(mdl, ctx.number("far_t"), th, y, ctx.numbers("compound_s"));
              },
              tol_c);
}

void stretched_exp1d(Context& ctx) {
  const LevyModel mdl = ctx.model();
  const double t = ctx.number("t");
  const FarField far(mdl, t);
  for (double dir : {1.0, -1.0}) {
    const Vec th{dir}, y{0.0};
    ratio_check(ctx, dir > 0 ? "ratio_plus" : "ratio_minus", "PAPER",
                [&] { return kernel_ratio_series(far, mdl, th, y, ctx.numbers("s")); },
                ctx.tol("ratio"));
  }
}

void exponential_tempered1d(Context& ctx) {
  const LevyModel mdl = ctx.model();
  const double t = ctx.number("t");
  const FarField far(mdl, t);
  for (double yy : ctx.numbers("y")) {
    const Vec th{1.0}, y{yy};
    ratio_check(ctx, "ratio_y" + fmt(yy), "PAPER",
                [&] { return kernel_ratio_series(far, mdl, th, y, ctx.numbers("s")); }, ctx.tol("ratio"));
  }
  ratio_check(ctx, "convolution_ratio_n2", "PAPER",
              [&] {
                const Vec th{1.0}, y{ctx.number("convolution_y")};
                return convolution_ratio_series(mdl, ctx.number("convolution_r"), 2, th, y,
                                                ctx.numbers("s"));
              },
              ctx.tol("convolution"));
}

void jump_diffusion(Context& ctx) {
  const LevyModel mdl = ctx.model();
  const Grid g = ctx.grid("grid", 1);
  const double tol = ctx.tol("decomposition");
  ctx.check("decomposition", "DERIVED", "assembled p_t (r = 0) equals the spectral p_t", tol,
            [&](CheckResult& r) {
              const DecompositionReport d = decomposition_check(mdl, ctx.number("t"), g, 0.0);
              r.measured = {{"tail_mass", d.tail_mass}, {"terms", d.terms},
                            {"sup_residual", d.sup_residual}, {"mass_residual", d.mass_residual}};
              r.status = status_of(d.sup_residual < tol);
            });
  const double tol_s = ctx.tol("semigroup");
  ctx.check("semigroup", "INVARIANT", "p_t * p_s = p_{t+s}", tol_s, [&](CheckResult& r) {
    const double e = semigroup_residual(mdl, 0.25, 0.25, g);
    r.measured = {{"residual", e}};
    r.status = status_of(e < tol_s);
  });
}

void compound_pure(Context& ctx) {
  LevyModel base = ctx.model();
  const Vec b = annulus_moment(base, 0.0, 1.0);
  const LevyModel mdl = base.with_drift(b);
  const Grid g = ctx.grid("grid", 1);
  const double tol = ctx.tol("series_vs_spectral");
  ctx.check("series_vs_spectral", "DERIVED", "p~_t series equals the inverse of exp(t(nu^ - |nu|))",
            tol, [&](CheckResult& r) {
              const DensityField nu = sample_restricted(mdl, 0.0, g, true);
              double worst = 0.0;
              for (double t : ctx.numbers("t")) {
                const CompoundPoisson cp = compound_poisson_series(nu, t);
                const double e = relative_sup_error(cp.field, compound_poisson_spectral(nu, t));
                r.measured["t=" + fmt(t)] = {{"sup_error", e}, {"terms", cp.terms}};
                worst = std::max(worst, e);
              }
              r.measured["drift_b"] = b;
              r.status = status_of(worst < tol);
            });

  const TailLine line(mdl, 0.0, TailLine::Options{16, 1e4});
  for (double t : ctx.numbers("t"))
    for (double yy : ctx.numbers("y")) {
      const Vec th{1.0}, y{yy};
      ratio_check(ctx, "ratio_t" + fmt(t) + "_y" + fmt(yy), "PAPER",
                  [&] { return compound_ratio_series(line, mdl, t, th, y, ctx.numbers("s")); },
                  ctx.tol("ratio"));
    }

  const double tol_sc = ctx.tol("scaling");
  ctx.check("scaling", "DERIVED", "R for c nu at time t equals R for nu at time c t", tol_sc,
            [&](CheckResult& r) {
              const Vec th{1.0}, y{0.0};
              const Vec s = ctx.numbers("scaling_s");
              double worst = 0.0;
              for (double c : ctx.numbers("scaling_c")) {
                const RatioSeries a = compound_ratio_series(mdl.scaled(c), 1.0, th, y, s, 0.0);
                const RatioSeries bb = compound_ratio_series(line, mdl, c, th, y, s);
                for (std::size_t i = 0; i < s.size(); ++i)
                  worst = std::max(worst, std::abs(a.points[i].ratio / bb.points[i].ratio - 1.0));
              }
              r.measured = {{"worst_rel_difference", worst}};
              r.status = status_of(worst <= tol_sc);
            });
}

void counterexample(Context& ctx) {
  const LevyModel mdl = ctx.model();
  ctx.check("divergent_moment", "PAPER", "psi~(m theta) raises DivergentMoment", 0.0,
            [&](CheckResult& r) {
              const double xi[1] = {mdl.profile().m};
              try {
                const double v = exp_moment_exponent(mdl, xi);
                r.measured = {{"raised", false}, {"value", v}};
                r.status = Status::fail;
              } catch (const DivergentMoment& e) {
                r.measured = {{"raised", true}, {"message", e.what()}};
                r.status = Status::demonstrated_fail;
              }
            });
  const double tol = ctx.tol("ratio");
  ctx.check("ratio_diverges", "PAPER", "ratio series fails to converge", tol, [&](CheckResult& r) {
    const Vec th{1.0}, y{0.0};
    const RatioSeries s = kernel_ratio_series(mdl, ctx.number("t"), th, y, ctx.numbers("s"));
    const ConvergenceVerdict v = diagnose(s, tol);
    r.measured = series_json(s, v);
    if (auto p = ctx.artifact(r, "ratio_diverges.csv"); !p.empty()) s.write_csv(p);
    r.status = v.pass ? Status::fail : Status::demonstrated_fail;
    r.note = v.note;
  });
  ctx.check("k_divergence_flag", "PAPER", "K(r) estimate flags divergence", 0.0, [&](CheckResult& r) {
    const KEstimate k = k_function(mdl.profile(), ctx.number("k_r"));
    r.measured = {{"divergent", k.divergent}, {"value", k.value}, {"x_max", k.x_max}};
    r.status = status_of(k.divergent);
  });
}

void invariant_suite(Context& ctx) {
  const LevyModel mdl = ctx.model();
  const Grid g = ctx.grid("grid", 1);
  const double tm = ctx.tol("mass");
  ctx.check("mass", "INVARIANT", "int p_t = 1", tm, [&](CheckResult& r) {
    const KernelField k = heat_kernel_spectral(mdl, 0.5, g);
    const double e = std::abs(k.field.mass() - 1.0);
    r.measured = {{"mass_error", e}};
    r.status = status_of(e <= tm);
  });
  const double ts = ctx.tol("semigroup");
  ctx.check("semigroup", "INVARIANT", "p_t * p_s = p_{t+s}", ts, [&](CheckResult& r) {
    const double a = semigroup_residual(mdl, 0.25, 0.25, g);
    const double b = semigroup_residual(mdl, 0.5, 1.0, g);
    r.measured = {{"0.25+0.25", a}, {"0.5+1.0", b}};
    r.status = status_of(std::max(a, b) <= ts);
  });
  const double tc = ctx.tol("convolution_mass");
  ctx.check("convolution_mass", "INVARIANT", "|f * g| = |f| |g| (linear)", tc, [&](CheckResult& r) {
    const Grid gl = ctx.grid("linear_grid", 1);
    const DensityField a = sample_restricted(mdl, 1.0, gl, false);
    const DensityField b = sample_restricted(mdl, 2.0, gl, false);
    const double e = std::abs(convolve(a, b, Boundary::linear).mass() / (a.mass() * b.mass()) - 1.0);
    r.measured = {{"rel_error", e}};
    r.status = status_of(e <= tc);
  });
  const double tf = ctx.tol("factorization");
  ctx.check("factorization", "INVARIANT", "int e^{kappa<theta,x>} nu_r^{n*} = I^n, n <= 4", tf,
            [&](CheckResult& r) {
              double worst = 0.0;
              for (double dir : {1.0, -1.0}) {
                const double th[1] = {dir};
                const double tilt[1] = {mdl.kappa() * dir};
                const DensityField base = sample_restricted(mdl, 1.0, g, true, tilt);
                for (unsigned n = 1; n <= 4; ++n) {
                  const double e = std::abs(nfold(base, n).mass() / exp_moment_integral(mdl, 1.0, th, n) - 1.0);
                  worst = std::max(worst, e);
                }
              }
              r.measured = {{"worst_rel_error", worst}};
              r.status = status_of(worst <= tf);
            });
  const double td = ctx.tol("doubling_grid");
  ctx.check("psi_doubling", "INVARIANT", "sup Psi(2r)/Psi(r) finite and stable under refinement", td,
            [&](CheckResult& r) {
              const PsiTable a(mdl, 1e-3, 1e4, 32), b(mdl, 1e-3, 1e4, 64);
              const double da = a.max_doubling(), db = b.max_doubling();
              r.measured = {{"per_decade_32", da}, {"per_decade_64", db}};
              if (auto p = ctx.artifact(r, "psi.csv"); !p.empty()) b.write_csv(p);
              r.status = status_of(std::isfinite(da) && std::abs(da / db - 1.0) <= td);
            });
  const double ti = ctx.tol("psi_inverse");
  ctx.check("psi_inverse", "INVARIANT", "Psi(Psi^-(s)) = s", ti, [&](CheckResult& r) {
    const PsiTable p(mdl);
    double worst = 0.0;
    for (double s : {0.1, 1.0, 10.0, 100.0}) worst = std::max(worst, std::abs(p(p.inverse(s)) / s - 1.0));
    r.measured = {{"worst_rel_error", worst}};
    r.status = status_of(worst <= ti);
  });
  const double tu = ctx.tol("unimodal");
  ctx.check("unimodality", "INVARIANT", "symmetric stable kernel is non-increasing in |x|", tu,
            [&](CheckResult& r) {
              const LevyModel st = make_stable(1, 1.5, SphericalDensity::constant(1, 1.0));
              const KernelField k = heat_kernel_spectral(st, 1.0, g);
              double worst = 0.0;
              for (std::size_t j = g.n / 2; j + 1 < g.n; ++j)
                worst = std::max(worst, k.field[j + 1] - k.field[j]);
              worst /= k.field.sup();
              r.measured = {{"max_rise", worst}};
              r.status = status_of(worst <= tu);
            });
  const double budget = ctx.number("runtime_budget_s");
  ctx.check("runtime", "INVARIANT", "suite within the runtime budget", budget, [&](CheckResult& r) {
    double total = 0.0;
    for (const auto& c : ctx.results()) total += c.runtime;
    r.measured = {{"runtime_s", total}};
    r.status = status_of(total < budget);
  });
}

void profile_classification(Context& ctx) {
  ctx.check("three_case_table", "PAPER", "classify_profile agrees on every row", 0.0,
            [&](CheckResult& r) {
              std::size_t mismatches = 0;
              json rows = json::array();
              for (const auto& row : classification_table()) {
                const ProfileClass c = classify_profile(row.m, row.beta, row.delta, row.d);
                const bool ok = c.verdict == row.expect;
                mismatches += !ok;
                rows.push_back({{"m", row.m}, {"beta", row.beta}, {"delta", row.delta}, {"d", row.d},
                                {"expected", to_string(row.expect)}, {"got", to_string(c.verdict)}});
              }
              if (auto p = ctx.artifact(r, "three_case_table.csv"); !p.empty()) {
                std::ofstream o(p);
                o << "m,beta,delta,d,expected,got\n";
                for (const auto& j : rows)
                  o << j["m"] << ',' << j["beta"] << ',' << j["delta"] << ',' << j["d"] << ','
                    << j["expected"].get<std::string>() << ',' << j["got"].get<std::string>() << '\n';
              }
              r.measured = {{"rows", rows.size()}, {"mismatches", mismatches}};
              r.status = status_of(mismatches == 0);
            });
}

json exponential_profile(double inner, double delta, json g) {
  return {{"family", "exponential"}, {"d", 1},          {"m", 1.0},   {"beta", 1.0},
          {"delta", delta},          {"inner_exponent", inner}, {"c0", 1.0}, {"g", std::move(g)}};
}

json two_sided(double p, double m) { return {{"kind", "two_sided"}, {"plus", p}, {"minus", m}}; }

std::vector<Scenario> make_builtins() {
  std::vector<Scenario> v;
  v.emplace_back(
      "cauchy_oracle", "Cauchy process: spectral kernel, far field, ratio and decomposition vs closed forms",
      json{{"model", {{"family", "stable"}, {"d", 1}, {"alpha", 1.0}, {"g", {{"kind", "constant"}, {"value", 1.0 / kPi}}}}},
           {"spectral_grid", {{"n", 1 << 23}, {"L", 32768.0}}},
           {"spectral_t", {0.1, 0.5, 2.0}},
           {"spectral_window", 20.0},
           {"ratio_t", {0.5, 1.0, 2.0}},
           {"ratio_s_over_t", {8, 16, 32, 64, 100, 128}},
           {"sandwich_t", {0.5, 1.0}},
           {"sandwich_y", {0.0, 1.0, -1.0}},
           {"sandwich_s", {8, 16, 32, 64, 100}},
           {"decomposition_t", 0.5},
           {"decomposition_grid", {{"n", 1 << 16}, {"L", 81.92}}},
           {"tolerances",
            {{"spectral", 1e-6}, {"ratio_exact", 1e-3}, {"ratio_verdict", 1e-2}, {"far_field", 1e-4},
             {"sandwich_eps", 0.05}, {"decomposition", 1e-5}}}},
      cauchy_oracle);
  v.emplace_back(
      "stable1d", "Asymmetric 1-D stable law: ratio -> 1, K(r) slopes, two-fold convolution ratio",
      json{{"model", {{"family", "stable"}, {"d", 1}, {"alpha", 1.5}, {"g", two_sided(1.0, 0.5)}}},
           {"t", 1.0},
           {"s", {16, 32, 64, 128, 256, 512}},
           {"k_alpha", {0.5, 1.0, 1.5}},
           {"k_radii", {2, 4, 8, 16, 32, 64}},
           {"convolution_r", 1.0},
           {"convolution_s", {62.5, 125, 250, 500, 1000}},
           {"tolerances", {{"ratio", 0.05}, {"k_slope", 0.1}, {"convolution", 0.02}}}},
      stable1d);
  v.emplace_back(
      "stable2d_quadrants", "2-D stable law with quadrant-wise constant g: ratios {1, 2} by quadrant sign",
      json{{"model", {{"family", "stable"}, {"d", 2}, {"alpha", 1.8},
                      {"g", {{"kind", "quadrant"}, {"same", 1.0}, {"opposite", 2.0}}}}},
           {"t", 0.01},
           {"grid", {{"n", 1024}, {"L", 64.0}}},
           {"s", {4, 6, 8, 12, 16, 20, 24}},
           {"directions", 32},
           {"min_abs_product", 0.1},
           {"runtime_budget_s", 180.0},
           {"tolerances", {{"ratio", 0.05}}}},
      stable2d_quadrants);
  v.emplace_back(
      "relativistic1d", "Relativistic alpha = 1, m = 1: tilted exponent, oracle ratios and far field",
      json{{"model", {{"family", "relativistic"}, {"d", 1}, {"alpha", 1.0}, {"m", 1.0}}},
           {"ratio_s", 40.0},
           {"ratio_t", {0.5, 1.0}},
           {"ratio_y", {0.0, 0.5, -0.5}},
           {"far_t", 1.0},
           {"far_x", {10.0, 40.0, -40.0}},
           {"spectral_grid", {{"n", 1 << 16}, {"L", 200.0}}},
           {"compound_s", {5, 10, 20, 40, 80}},
           {"tolerances", {{"psi_tilde", 1e-6}, {"ratio", 0.05}, {"far_field", 0.01},
                           {"oracle_identity", 1e-8}, {"spectral", 1e-4}, {"compound", 0.05}}}},
      relativistic1d);
  v.emplace_back(
      "stretched_exp1d", "Stretched exponential tail (beta = 1/2): kappa = 0, ratio -> 1",
      json{{"model", {{"family", "stretched"}, {"d", 1}, {"m", 1.0}, {"beta", 0.5}, {"delta", 1.0},
                      {"inner_exponent", 1.5}, {"c0", 1.0}, {"g", two_sided(1.0, 0.5)}}},
           {"t", 1.0},
           {"s", {40, 80, 160, 320, 640, 1280, 2560, 5000}},
           {"tolerances", {{"ratio", 0.05}}}},
      stretched_exp1d);
  v.emplace_back(
      "exponential_tempered1d", "Exponentially tempered tail (kappa = 1): kernel and convolution ratios",
      json{{"model", exponential_profile(1.5, 3.0, two_sided(1.0, 0.5))},
           {"t", 1.0},
           {"y", {0.0, 0.5, -0.5}},
           {"s", {10, 20, 40, 80, 160}},
           {"convolution_r", 1.0},
           {"convolution_y", 0.5},
           {"tolerances", {{"ratio", 0.05}, {"convolution", 0.05}}}},
      exponential_tempered1d);
  {
    json mdl = exponential_profile(0.0, 1.5, two_sided(1.0, 0.5));
    mdl["family"] = "compound_poisson";
    mdl["A"] = {1.0};
    mdl["b"] = {0.3};
    v.emplace_back("compound_poisson_jump_diffusion",
                   "Finite jump measure plus Brownian part: decomposition with r = 0 and semigroup",
                   json{{"model", mdl},
                        {"t", 0.5},
                        {"grid", {{"n", 1 << 14}, {"L", 64.0}}},
                        {"tolerances", {{"decomposition", 1e-5}, {"semigroup", 1e-5}}}},
                   jump_diffusion);
  }
  {
    json mdl = exponential_profile(0.0, 3.0, two_sided(1.0, 0.5));
    mdl["family"] = "compound_poisson";
    v.emplace_back("compound_poisson_pure",
                   "Pure compound Poisson: p~_t series vs spectral, ratio limit and time scaling",
                   json{{"model", mdl},
                        {"t", {0.5, 1.0}},
                        {"y", {0.0, 0.5, -0.5}},
                        {"s", {10, 20, 40, 80, 160}},
                        {"grid", {{"n", 1 << 14}, {"L", 64.0}}},
                        {"scaling_c", {0.5, 2.0}},
                        {"scaling_s", {10, 40, 160}},
                        {"tolerances", {{"series_vs_spectral", 1e-8}, {"ratio", 0.05}, {"scaling", 1e-6}}}},
                   compound_pure);
  }
  {
    json mdl = exponential_profile(2.0, 1.0, {{"kind", "constant"}, {"value", 1.0}});
    mdl["family"] = "tempered";
    mdl["allow_failing"] = true;
    v.emplace_back("counterexample_no_K",
                   "Exponential tail with delta = (d+1)/2: no finite limit, expected to fail",
                   json{{"model", mdl},
                        {"t", 1.0},
                        {"s", {8, 16, 32, 64, 128, 256}},
                        {"k_r", 2.0},
                        {"tolerances", {{"ratio", 0.05}}}},
                   counterexample);
  }
  v.emplace_back(
      "invariant_suite", "Mass, semigroup, convolution mass, moment factorization, Psi doubling and inverse",
      json{{"model", exponential_profile(2.5, 3.0, two_sided(1.0, 0.5))},
           {"grid", {{"n", 4096}, {"L", 32.0}}},
           {"linear_grid", {{"n", 1 << 14}, {"L", 64.0}}},
           {"runtime_budget_s", 120.0},
           {"tolerances", {{"mass", 1e-6}, {"semigroup", 1e-5}, {"convolution_mass", 1e-9},
                           {"factorization", 1e-4}, {"doubling_grid", 1e-3}, {"psi_inverse", 1e-8},
                           {"unimodal", 1e-12}}}},
      invariant_suite);
  v.emplace_back("profile_classification", "Three-case K(r) -> 0 classification on a 50-row table",
                 json{{"tolerances", json::object()}}, profile_classification);
  return v;
}

}  // namespace

const std::vector<Scenario>& builtin_scenarios() {
  static const std::vector<Scenario> list = make_builtins();
  return list;
}

}  // namespace levyheat
