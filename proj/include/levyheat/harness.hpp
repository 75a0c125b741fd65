#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "levyheat/config.hpp"
#include "levyheat/grid.hpp"

namespace levyheat {

enum class Status { pass, fail, demonstrated_fail, error };
std::string to_string(Status s);

struct CheckResult {
  std::string name;
  Status status = Status::error;
  std::string provenance;   // DERIVED | PAPER | INVARIANT
  std::string expected;
  double tolerance = 0.0;
  nlohmann::json measured = nlohmann::json::object();
  double runtime = 0.0;     // seconds
  std::vector<std::string> artifacts;
  std::string note;

  /// pass, or a failure the scenario declares as the expected outcome
  bool ok() const { return status == Status::pass || status == Status::demonstrated_fail; }
  nlohmann::json to_json() const;
};

struct ScenarioReport {
  std::string name;
  std::string description;
  nlohmann::json config;
  std::vector<CheckResult> checks;
  double runtime = 0.0;

  bool pass() const;
  bool infrastructure_error() const;
  nlohmann::json to_json() const;
};

struct RunOptions {
  std::string out_dir;                 // empty: no artifacts are written
  double tolerance_scale = 1.0;
  std::optional<std::size_t> grid_n;   // overrides every spectral grid
  std::optional<double> grid_l;
  unsigned jobs = 1;
  nlohmann::json overrides;            // merge patch applied to the scenario config
};

/// Output directory from LEVYHEAT_OUT, else "out".
std::string default_out_dir();

class Scenario;

/// What a scenario body sees while it runs.
class Context {
 public:
  Context(const Scenario& sc, const RunOptions& opt, nlohmann::json config);

  const nlohmann::json& config() const { return config_; }
  const nlohmann::json& at(const std::string& key) const;
  double number(const std::string& key) const;
  Vec numbers(const std::string& key) const;
  LevyModel model(const std::string& key = "model") const;
  /// tolerance from the "tolerances" section, times --tolerance-scale
  double tol(const std::string& key) const;
  /// Grid from a {"n", "L"} section, with --grid-n / --grid-l applied.
  Grid grid(const std::string& key, unsigned dim) const;

  /// Runs `body` as check `name`. Exceptions become status error.
  void check(const std::string& name, const std::string& provenance, const std::string& expected,
             double tolerance, const std::function<void(CheckResult&)>& body);
  /// Artifact path for a check (empty when artifacts are off); records it on `r`.
  std::string artifact(CheckResult& r, const std::string& file);

  std::vector<CheckResult>& results() { return results_; }

 private:
  const Scenario* sc_;
  const RunOptions* opt_;
  nlohmann::json config_;
  std::vector<CheckResult> results_;
};

class Scenario {
 public:
  using Body = std::function<void(Context&)>;
  Scenario(std::string name, std::string description, nlohmann::json config, Body body);

  const std::string& name() const { return name_; }
  const std::string& description() const { return description_; }
  const nlohmann::json& config() const { return config_; }
  void run(Context& ctx) const { body_(ctx); }

 private:
  std::string name_;
  std::string description_;
  nlohmann::json config_;
  Body body_;
};

const std::vector<Scenario>& builtin_scenarios();
const Scenario& find_scenario(const std::string& name);

ScenarioReport run_scenario(const Scenario& sc, const RunOptions& opt);
/// Runs the named scenarios on a pool of opt.jobs workers; reports come back in input order.
std::vector<ScenarioReport> verify(const std::vector<std::string>& names, const RunOptions& opt);
/// 0 all pass, 1 check failures, 2 infrastructure error.
int exit_code(const std::vector<ScenarioReport>& reports);

/// Pass/fail helper: status from a boolean.
inline Status status_of(bool ok) { return ok ? Status::pass : Status::fail; }

}  // namespace levyheat
