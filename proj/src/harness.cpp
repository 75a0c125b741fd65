#include "levyheat/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <thread>

namespace levyheat {

using nlohmann::json;

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::demonstrated_fail: return "demonstrated-fail";
    case Status::error: return "error";
  }
  return "error";
}

json CheckResult::to_json() const {
  json j{{"name", name},         {"status", to_string(status)}, {"provenance", provenance},
         {"expected", expected}, {"tolerance", tolerance},      {"measured", measured},
         {"runtime_s", runtime}, {"artifacts", artifacts}};
  if (!note.empty()) j["note"] = note;
  return j;
}

bool ScenarioReport::pass() const {
  for (const auto& c : checks)
    if (!c.ok()) return false;
  return true;
}

bool ScenarioReport::infrastructure_error() const {
  for (const auto& c : checks)
    if (c.status == Status::error) return true;
  return false;
}

json ScenarioReport::to_json() const {
  json j{{"scenario", name},
         {"description", description},
         {"status", pass() ? "pass" : "fail"},
         {"runtime_s", runtime},
         {"config", config},
         {"checks", json::array()}};
  for (const auto& c : checks) j["checks"].push_back(c.to_json());
  return j;
}

std::string default_out_dir() {
  const char* env = std::getenv("LEVYHEAT_OUT");
  return env && *env ? env : "out";
}

Context::Context(const Scenario& sc, const RunOptions& opt, json config)
    : sc_(&sc), opt_(&opt), config_(std::move(config)) {}

const json& Context::at(const std::string& key) const {
  if (!config_.contains(key)) throw ConfigError(sc_->name() + ": config lacks '" + key + "'");
  return config_.at(key);
}

double Context::number(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_number()) throw ConfigError(sc_->name() + ": '" + key + "' must be a number");
  return v.get<double>();
}

Vec Context::numbers(const std::string& key) const {
  const json& v = at(key);
  if (v.is_number()) return {v.get<double>()};
  try {
    return v.get<Vec>();
  } catch (const json::exception&) {
    throw ConfigError(sc_->name() + ": '" + key + "' must be a list of numbers");
  }
}

LevyModel Context::model(const std::string& key) const { return model_from_json(at(key)); }

double Context::tol(const std::string& key) const {
  const json& t = at("tolerances");
  if (!t.contains(key) || !t.at(key).is_number())
    throw ConfigError(sc_->name() + ": no tolerance '" + key + "'");
  const double v = t.at(key).get<double>() * opt_->tolerance_scale;
  if (!(v > 0.0)) throw ConfigError(sc_->name() + ": tolerance '" + key + "' must be > 0");
  return v;
}

Grid Context::grid(const std::string& key, unsigned dim) const {
  const json& g = at(key);
  std::size_t n = g.at("n").get<std::size_t>();
  double l = g.at("L").get<double>();
  if (opt_->grid_n) n = *opt_->grid_n;
  if (opt_->grid_l) l = *opt_->grid_l;
  return Grid(dim, n, l);
}

void Context::check(const std::string& name, const std::string& provenance,
                    const std::string& expected, double tolerance,
                    const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.name = name;
  r.provenance = provenance;
  r.expected = expected;
  r.tolerance = tolerance;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.status = Status::error;
    r.note = e.what();
  }
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  results_.push_back(std::move(r));
}

std::string Context::artifact(CheckResult& r, const std::string& file) {
  if (opt_->out_dir.empty()) return {};
  const auto dir = std::filesystem::path(opt_->out_dir) / sc_->name();
  std::filesystem::create_directories(dir);
  const std::string path = (dir / file).string();
  r.artifacts.push_back(path);
  return path;
}

Scenario::Scenario(std::string name, std::string description, json config, Body body)
    : name_(std::move(name)),
      description_(std::move(description)),
      config_(std::move(config)),
      body_(std::move(body)) {}

const Scenario& find_scenario(const std::string& name) {
  for (const auto& s : builtin_scenarios())
    if (s.name() == name) return s;
  throw ConfigError("unknown scenario '" + name + "'");
}

ScenarioReport run_scenario(const Scenario& sc, const RunOptions& opt) {
  json cfg = sc.config();
  if (!opt.overrides.is_null()) cfg.merge_patch(opt.overrides);
  Context ctx(sc, opt, cfg);
  ScenarioReport rep;
  rep.name = sc.name();
  rep.description = sc.description();
  rep.config = cfg;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    sc.run(ctx);
  } catch (const std::exception& e) {
    CheckResult r;
    r.name = "setup";
    r.status = Status::error;
    r.note = e.what();
    ctx.results().push_back(r);
  }
  rep.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.checks = std::move(ctx.results());
  if (!opt.out_dir.empty()) {
    const auto dir = std::filesystem::path(opt.out_dir) / sc.name();
    std::filesystem::create_directories(dir);
    save_json((dir / "report.json").string(), rep.to_json());
  }
  return rep;
}

std::vector<ScenarioReport> verify(const std::vector<std::string>& names, const RunOptions& opt) {
  std::vector<const Scenario*> list;
  for (const auto& n : names) list.push_back(&find_scenario(n));
  std::vector<ScenarioReport> out(list.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < list.size();) out[i] = run_scenario(*list[i], opt);
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, list.size()));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

int exit_code(const std::vector<ScenarioReport>& reports) {
  int code = 0;
  for (const auto& r : reports) {
    if (r.infrastructure_error()) return 2;
    if (!r.pass()) code = 1;
  }
  return code;
}

}  // namespace levyheat
