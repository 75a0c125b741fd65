// levyheat command line front end.
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "levyheat/asymptotics.hpp"
#include "levyheat/config.hpp"
#include "levyheat/harness.hpp"
#include "levyheat/kernel.hpp"
#include "levyheat/symbol.hpp"

using namespace levyheat;
using nlohmann::json;

namespace {

// A model file may hold the model itself or a scenario config with a "model" section.
LevyModel load_model(const std::string& path) {
  if (path.empty()) throw ConfigError("--config is required");
  json j = load_json(path);
  if (j.contains("model")) j = j.at("model");
  return model_from_json(j);
}

void print_series(const RatioSeries& s) {
  std::printf("# kind=%s t=%g limit=%.12g %s\n", s.kind.c_str(), s.t, s.limit, s.limit_note.c_str());
  std::printf("s,ratio,accuracy,refused\n");
  for (const auto& p : s.points) std::printf("%.10g,%.12g,%.3g,%d\n", p.s, p.ratio, p.accuracy, p.refused);
  try {
    const ConvergenceVerdict v = diagnose(s, 0.05);
    std::printf("# verdict(0.05) %s\n", v.to_json().dump().c_str());
  } catch (const NumericalError&) {
  }
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levyheat: heat kernels and far-field asymptotics of Levy semigroups"};
  app.require_subcommand(1);
  std::string config;
  unsigned jobs = 0;
  app.add_option("--jobs", jobs, "worker threads (default: all cores)");

  // psi
  auto* psi_cmd = app.add_subcommand("psi", "Psi and Psi^- tables");
  double r_min = 1e-3, r_max = 1e4;
  std::vector<double> psi_s;
  psi_cmd->add_option("--config", config, "model JSON")->required();
  psi_cmd->add_option("--r-min", r_min);
  psi_cmd->add_option("--r-max", r_max);
  psi_cmd->add_option("--inverse", psi_s, "also print Psi^-(s) for these s");

  // kfunc
  auto* k_cmd = app.add_subcommand("kfunc", "K(r) table and log-log slope for a radial profile");
  RadialProfile prof;
  std::vector<double> radii{2, 4, 8, 16, 32, 64};
  double k_xmax = 256.0;
  k_cmd->add_option("--m", prof.m);
  k_cmd->add_option("--beta", prof.beta);
  k_cmd->add_option("--delta", prof.delta)->required();
  k_cmd->add_option("--inner", prof.inner_exponent);
  k_cmd->add_option("--d", prof.dim);
  k_cmd->add_option("--radii", radii);
  k_cmd->add_option("--x-max", k_xmax);

  // classify
  auto* c_cmd = app.add_subcommand("classify", "three-case K(r) -> 0 verdict");
  double cm = 0, cb = 0, cd = 0;
  unsigned cdim = 1;
  c_cmd->add_option("--m", cm)->required();
  c_cmd->add_option("--beta", cb);
  c_cmd->add_option("--delta", cd)->required();
  c_cmd->add_option("--d", cdim);

  // kernel
  auto* kern_cmd = app.add_subcommand("kernel", "spectral heat kernel export");
  double t = 1.0;
  std::size_t grid_n = 4096;
  double grid_l = 32.0;
  std::string out_path;
  kern_cmd->add_option("--config", config)->required();
  kern_cmd->add_option("--t", t);
  kern_cmd->add_option("--grid-n", grid_n);
  kern_cmd->add_option("--grid-l", grid_l);
  kern_cmd->add_option("--out", out_path, "CSV, or binary dump when the name ends in .bin")->required();

  // farfield
  auto* far_cmd = app.add_subcommand("farfield", "far-field point values p_t(x), d = 1");
  std::vector<double> xs;
  bool oracle = false;
  far_cmd->add_option("--config", config)->required();
  far_cmd->add_option("--t", t);
  far_cmd->add_option("--x", xs)->required();
  far_cmd->add_flag("--oracle", oracle);

  // ratio / convratio / poissonratio
  std::vector<double> theta{1.0}, y{0.0}, s_list;
  double r = 1.0, eps = 0.05;
  unsigned n = 2;
  std::optional<double> r_opt;
  auto* ratio_cmd = app.add_subcommand("ratio", "p_t(s theta - y) / (t nu(s theta))");
  ratio_cmd->add_option("--config", config)->required();
  ratio_cmd->add_option("--t", t);
  ratio_cmd->add_option("--theta", theta);
  ratio_cmd->add_option("--y", y);
  ratio_cmd->add_option("--s", s_list)->required();
  ratio_cmd->add_flag("--oracle", oracle);
  ratio_cmd->add_option("--grid-n", grid_n, "spectral grid (d >= 2)");
  ratio_cmd->add_option("--grid-l", grid_l);
  auto* conv_cmd = app.add_subcommand("convratio", "nu_r^{n*}(s theta - y) / nu_r(s theta), d = 1");
  conv_cmd->add_option("--config", config)->required();
  conv_cmd->add_option("--r", r);
  conv_cmd->add_option("--n", n);
  conv_cmd->add_option("--theta", theta);
  conv_cmd->add_option("--y", y);
  conv_cmd->add_option("--s", s_list)->required();
  auto* pois_cmd = app.add_subcommand("poissonratio", "pbar_t^r(s theta - y) / (t nu(s theta)), d = 1");
  pois_cmd->add_option("--config", config)->required();
  pois_cmd->add_option("--t", t);
  pois_cmd->add_option("--r", r_opt, "split radius (default h(t); 0 for finite measures)");
  pois_cmd->add_option("--theta", theta);
  pois_cmd->add_option("--y", y);
  pois_cmd->add_option("--s", s_list)->required();

  // sandwich
  auto* sw_cmd = app.add_subcommand("sandwich", "two-sided band check of p_t(x - y) against t nu(x)");
  std::vector<double> ts{0.5, 1.0}, ys{0.0};
  sw_cmd->add_option("--config", config)->required();
  sw_cmd->add_option("--t", ts);
  sw_cmd->add_option("--y", ys);
  sw_cmd->add_option("--eps", eps);
  sw_cmd->add_option("--s", s_list)->required();
  sw_cmd->add_flag("--oracle", oracle);

  // verify
  auto* v_cmd = app.add_subcommand("verify", "run a builtin scenario, or all of them");
  std::string scenario;
  RunOptions ro;
  ro.out_dir = default_out_dir();
  std::optional<std::size_t> v_grid_n;
  std::optional<double> v_grid_l;
  v_cmd->add_option("scenario", scenario, "scenario name or 'all'")->required();
  v_cmd->add_option("--config", config, "JSON merged into the scenario config");
  v_cmd->add_option("--out", ro.out_dir, "output directory (default $LEVYHEAT_OUT or ./out)");
  v_cmd->add_option("--jobs", ro.jobs, "scenarios run concurrently");
  v_cmd->add_option("--tolerance-scale", ro.tolerance_scale);
  v_cmd->add_option("--grid-n", v_grid_n);
  v_cmd->add_option("--grid-l", v_grid_l);

  auto* list_cmd = app.add_subcommand("list", "list builtin scenarios");
  auto* show_cmd = app.add_subcommand("show-config", "print a scenario's config");
  show_cmd->add_option("scenario", scenario)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (jobs > 0) set_default_jobs(jobs);

  try {
    if (*psi_cmd) {
      const LevyModel mdl = load_model(config);
      const PsiTable tab(mdl, r_min, r_max);
      std::printf("r,Psi\n");
      for (std::size_t i = 0; i < tab.radii().size(); ++i)
        std::printf("%.10g,%.12g\n", tab.radii()[i], tab.values()[i]);
      std::printf("# max_doubling %.12g\n", tab.max_doubling());
      for (double s : psi_s) std::printf("# Psi^-(%g) = %.12g\n", s, tab.inverse(s));
    } else if (*k_cmd) {
      prof.validate();
      const auto ks = k_table(prof, radii, k_xmax);
      std::printf("r,K,x_at_sup,divergent\n");
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      bool div = false;
      for (const auto& k : ks) {
        std::printf("%.10g,%.12g,%.6g,%d\n", k.r, k.value, k.x_at_sup, k.divergent);
        div = div || k.divergent;
        const double lx = std::log(k.r), ly = std::log(k.value);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
      }
      const double m = static_cast<double>(ks.size());
      std::printf("# slope %.6g%s\n", (m * sxy - sx * sy) / (m * sxx - sx * sx),
                  div ? " (divergence flagged)" : "");
    } else if (*c_cmd) {
      const ProfileClass pc = classify_profile(cm, cb, cd, cdim);
      std::cout << upper(to_string(pc.verdict)) << '\n';
    } else if (*kern_cmd) {
      const LevyModel mdl = load_model(config);
      const KernelField k = heat_kernel_spectral(mdl, t, Grid(mdl.dim(), grid_n, grid_l));
      if (out_path.size() > 4 && out_path.substr(out_path.size() - 4) == ".bin")
        k.field.write_binary(out_path);
      else
        k.field.write_csv(out_path);
      std::printf("mass %.15g sup %.15g\n", k.field.mass(), k.field.sup());
    } else if (*far_cmd) {
      const LevyModel mdl = load_model(config);
      FarField::Options fo;
      fo.use_oracle = oracle;
      const FarField far(mdl, t, fo);
      std::printf("# r=%g tail_mass=%.12g terms=%u\nx,p,accuracy,refused\n", far.r(), far.tail_mass(),
                  far.terms());
      for (double x : xs) {
        const FarFieldValue v = far(x);
        std::printf("%.10g,%.12g,%.3g,%d\n", x, v.value, v.accuracy, v.refused);
      }
    } else if (*ratio_cmd) {
      const LevyModel mdl = load_model(config);
      RatioOptions o;
      o.use_oracle = oracle;
      if (mdl.dim() > 1) o.grid = Grid(mdl.dim(), grid_n, grid_l);
      if (y.size() == 1 && mdl.dim() > 1) y.assign(mdl.dim(), y[0]);
      print_series(kernel_ratio_series(mdl, t, unit(theta), y, s_list, o));
    } else if (*conv_cmd) {
      const LevyModel mdl = load_model(config);
      print_series(convolution_ratio_series(mdl, r, n, unit(theta), y, s_list));
    } else if (*pois_cmd) {
      const LevyModel mdl = load_model(config);
      print_series(compound_ratio_series(mdl, t, unit(theta), y, s_list, r_opt));
    } else if (*sw_cmd) {
      const LevyModel mdl = load_model(config);
      std::vector<Vec> yv, th{{1.0}, {-1.0}};
      for (double v : ys) yv.push_back({v});
      RatioOptions o;
      o.use_oracle = oracle;
      const SandwichReport rep = sandwich_check(mdl, ts, yv, th, eps, s_list, o);
      std::cout << rep.to_json().dump(2) << '\n';
      return rep.holds ? 0 : 1;
    } else if (*v_cmd) {
      if (!config.empty()) ro.overrides = load_json(config);
      ro.grid_n = v_grid_n;
      ro.grid_l = v_grid_l;
      std::vector<std::string> names;
      if (scenario == "all")
        for (const auto& s : builtin_scenarios()) names.push_back(s.name());
      else
        names.push_back(find_scenario(scenario).name());
      const auto reports = verify(names, ro);
      for (const auto& rep : reports) {
        std::printf("%-34s %s  (%.1fs)\n", rep.name.c_str(), rep.pass() ? "PASS" : "FAIL", rep.runtime);
        for (const auto& c : rep.checks)
          std::printf("    %-30s %-17s %s\n", c.name.c_str(), to_string(c.status).c_str(), c.note.c_str());
      }
      return exit_code(reports);
    } else if (*list_cmd) {
      for (const auto& s : builtin_scenarios())
        std::printf("%-34s %s\n", s.name().c_str(), s.description().c_str());
    } else if (*show_cmd) {
      std::cout << find_scenario(scenario).config().dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
