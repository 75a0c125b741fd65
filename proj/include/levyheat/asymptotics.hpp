#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "levyheat/kernel.hpp"
#include "levyheat/model.hpp"

namespace levyheat {

struct RatioPoint {
  double s = 0.0;
  double ratio = 0.0;
  double accuracy = 0.0;
  bool refused = false;
  std::string note;
};

struct RatioSeries {
  std::string kind;      // kernel | convolution | compound
  double t = 0.0;        // time (or r for convolution series)
  unsigned n = 0;        // convolution power
  Vec theta;
  Vec y;
  double limit = 0.0;    // NaN when the predicted limit does not exist
  std::string limit_note;
  std::vector<RatioPoint> points;

  void write_csv(const std::string& path) const;
  nlohmann::json to_json() const;
};

struct ConvergenceVerdict {
  double final_deviation = 0.0;
  bool trend = false;
  double tolerance = 0.0;
  bool pass = false;
  double slope = 0.0;          // log-log decay order of |R - l|, NaN when indeterminate
  std::size_t valid_points = 0;
  std::string note;

  nlohmann::json to_json() const;
};

/// 1 when kappa = 0, else e^{-t psi~(kappa theta) + kappa <theta,y>}.
/// DivergentMoment propagates.
double predicted_limit(const LevyModel& model, double t, std::span<const double> theta,
                       std::span<const double> y);

struct RatioOptions {
  bool use_oracle = false;
  std::optional<double> r;      // far-field split radius (default h(t))
  std::optional<Grid> grid;     // d >= 2: spectral grid
  double certify_rel = 0.01;    // d >= 2: certification threshold
};

/// R(s) = p_t(s theta - y) / (t nu(s theta)).
RatioSeries kernel_ratio_series(const LevyModel& model, double t, std::span<const double> theta,
                                std::span<const double> y, const Vec& s_list,
                                const RatioOptions& opt = {});
/// Same with a prebuilt far field (d = 1).
RatioSeries kernel_ratio_series(const FarField& far, const LevyModel& model,
                                std::span<const double> theta, std::span<const double> y,
                                const Vec& s_list);
/// Same with a prebuilt spectral kernel (any d); points failing certification are refused.
RatioSeries kernel_ratio_series(const KernelField& kernel, const LevyModel& model,
                                std::span<const double> theta, std::span<const double> y,
                                const Vec& s_list, double certify_rel = 0.01);

/// R(s) = nu_r^{n*}(s theta - y) / nu_r(s theta), limit e^{kappa<theta,y>} n I^{n-1}
/// with I = int e^{kappa<theta,z>} nu_r(z) dz. d = 1.
RatioSeries convolution_ratio_series(const LevyModel& model, double r, unsigned n,
                                     std::span<const double> theta, std::span<const double> y,
                                     const Vec& s_list);

/// R(s) = pbar_t^r(s theta - y) / (t nu(s theta)), limit
/// e^{kappa<theta,y>} exp(t int_{|z|>r} (e^{kappa<theta,z>} - 1) nu(dz)).
/// r defaults to h(t); r = 0 (finite measures) gives the p~_t series. d = 1.
RatioSeries compound_ratio_series(const LevyModel& model, double t, std::span<const double> theta,
                                  std::span<const double> y, const Vec& s_list,
                                  std::optional<double> r = std::nullopt);
/// Same with a prebuilt TailLine (its r and mass are used; terms are capped by its n_max).
RatioSeries compound_ratio_series(const TailLine& line, const LevyModel& model, double t,
                                  std::span<const double> theta, std::span<const double> y,
                                  const Vec& s_list);
/// Number of compound Poisson terms for a remainder below `tol` at intensity t|nu_r|.
unsigned poisson_terms(double t_mass, double tol = 1e-9, unsigned cap = 16);

/// Final deviation plus trend over the last three points; log-log slope of |R - l|.
/// Without a finite limit the successive relative changes play the role of the deviation.
ConvergenceVerdict diagnose(const RatioSeries& series, double tolerance);

struct SandwichReport {
  bool holds = false;
  double radius = 0.0;          // smallest probed R with the band holding beyond it
  double epsilon = 0.0;
  std::size_t probed = 0;
  std::vector<std::string> excluded;
  Vec worst_deviation;          // per probe radius, max |R - l|

  nlohmann::json to_json() const;
};

/// Checks (l - eps) t nu(x) <= p_t(x - y) <= (l + eps) t nu(x) for x = s theta on all
/// probed (t, theta, y).
SandwichReport sandwich_check(const LevyModel& model, const Vec& t_set, const std::vector<Vec>& ys,
                              const std::vector<Vec>& thetas, double epsilon, const Vec& s_list,
                              const RatioOptions& opt = {});

/// Default probe radii {8, 16, 32, 64, 128} max(1, h(t)).
Vec default_probe_radii(const LevyModel& model, double t);

}  // namespace levyheat
