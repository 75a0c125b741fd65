#include "levyheat/config.hpp"

#include <fstream>
#include <set>

namespace levyheat {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

double num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("key '") + key + "' must be a number");
  return v.get<double>();
}

Vec vec(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError(std::string("key '") + key + "' must be an array");
  Vec out;
  for (const auto& e : v) {
    if (e.is_array()) {
      for (const auto& x : e) {
        if (!x.is_number()) throw ConfigError(std::string("key '") + key + "': non-numeric entry");
        out.push_back(x.get<double>());
      }
    } else if (e.is_number()) {
      out.push_back(e.get<double>());
    } else {
      throw ConfigError(std::string("key '") + key + "': non-numeric entry");
    }
  }
  return out;
}

}  // namespace

SphericalDensity AngularConfig::build(unsigned dim) const {
  if (kind == "constant") return SphericalDensity::constant(dim, value);
  if (kind == "two_sided") {
    if (dim != 1) throw ConfigError("two_sided g needs d = 1");
    return SphericalDensity::two_sided(plus, minus);
  }
  if (kind == "quadrant") {
    if (dim != 2) throw ConfigError("quadrant g needs d = 2");
    return SphericalDensity::quadrant(same, opposite);
  }
  if (kind == "cosine") return SphericalDensity::cosine(dim, a, b, direction);
  throw ConfigError("unknown g kind '" + kind + "'");
}

json AngularConfig::to_json() const {
  json j{{"kind", kind}};
  if (kind == "constant") j["value"] = value;
  else if (kind == "two_sided") j["plus"] = plus, j["minus"] = minus;
  else if (kind == "quadrant") j["same"] = same, j["opposite"] = opposite;
  else if (kind == "cosine") j["a"] = a, j["b"] = b, j["direction"] = direction;
  return j;
}

AngularConfig AngularConfig::from_json(const json& j) {
  AngularConfig g;
  if (j.is_number()) {
    g.value = j.get<double>();
    return g;
  }
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError("g: expected an object with a 'kind'");
  g.kind = j.at("kind").get<std::string>();
  if (g.kind == "constant") {
    check_keys(j, {"kind", "value"}, "g");
    g.value = num(j, "value", 1.0);
  } else if (g.kind == "two_sided") {
    check_keys(j, {"kind", "plus", "minus"}, "g");
    g.plus = num(j, "plus", 1.0);
    g.minus = num(j, "minus", 1.0);
  } else if (g.kind == "quadrant") {
    check_keys(j, {"kind", "same", "opposite"}, "g");
    g.same = num(j, "same", 1.0);
    g.opposite = num(j, "opposite", 1.0);
  } else if (g.kind == "cosine") {
    check_keys(j, {"kind", "a", "b", "direction"}, "g");
    g.a = num(j, "a", 1.0);
    g.b = num(j, "b", 0.0);
    g.direction = vec(j, "direction");
  } else {
    throw ConfigError("unknown g kind '" + g.kind + "'");
  }
  return g;
}

RadialProfile ModelConfig::profile() const {
  return RadialProfile{d, inner_exponent, m, beta, delta, c0};
}

LevyModel ModelConfig::build() const {
  LevyModel mdl = [&] {
    if (family == "stable") return make_stable(d, alpha, g.build(d));
    if (family == "relativistic") return make_relativistic(d, alpha, m);
    if (family == "stretched" || family == "exponential" || family == "tempered") {
      if (family == "exponential" && beta != 1.0) throw ConfigError("exponential family needs beta = 1");
      if (family == "stretched" && !(beta > 0.0 && beta < 1.0))
        throw ConfigError("stretched family needs beta in (0, 1)");
      return make_tempered(d, profile(), g.build(d), allow_failing);
    }
    if (family == "compound_poisson") return make_compound_poisson(d, profile(), g.build(d));
    if (family == "gaussian") {
      if (A.empty()) throw ConfigError("gaussian family needs A");
      return make_gaussian(d, A);
    }
    throw ConfigError("unknown family '" + family + "'");
  }();
  if (!A.empty() && family != "gaussian") {
    if (A.size() != d * d) throw ConfigError("A must have d*d entries");
    mdl = mdl.with_gaussian(A);
  }
  if (!b.empty()) {
    if (b.size() != d) throw ConfigError("b must have d entries");
    mdl = mdl.with_drift(b);
  }
  if (scale != 1.0) mdl = mdl.scaled(scale);
  return mdl;
}

json ModelConfig::to_json() const {
  json j{{"family", family}, {"d", d}};
  if (family == "stable" || family == "relativistic") j["alpha"] = alpha;
  if (family == "relativistic") j["m"] = m;
  if (family != "stable" && family != "relativistic" && family != "gaussian") {
    j["m"] = m;
    j["beta"] = beta;
    j["delta"] = delta;
    j["inner_exponent"] = inner_exponent;
    j["c0"] = c0;
  }
  if (family != "relativistic" && family != "gaussian") j["g"] = g.to_json();
  if (!A.empty()) j["A"] = A;
  if (!b.empty()) j["b"] = b;
  if (scale != 1.0) j["scale"] = scale;
  if (allow_failing) j["allow_failing"] = true;
  return j;
}

ModelConfig ModelConfig::from_json(const json& j) {
  check_keys(j, {"family", "d", "alpha", "m", "beta", "delta", "inner_exponent", "c0", "g", "A",
                 "b", "scale", "allow_failing"},
             "model");
  ModelConfig c;
  if (!j.contains("family") || !j.at("family").is_string())
    throw ConfigError("model: 'family' is required");
  c.family = j.at("family").get<std::string>();
  const double d = num(j, "d", 1.0);
  if (!(d >= 1.0 && d <= 3.0 && d == std::floor(d))) throw ConfigError("d must be 1, 2 or 3");
  c.d = static_cast<unsigned>(d);
  c.alpha = num(j, "alpha", c.alpha);
  c.m = num(j, "m", c.m);
  c.beta = num(j, "beta", c.beta);
  c.delta = num(j, "delta", c.delta);
  c.inner_exponent = num(j, "inner_exponent", c.inner_exponent);
  c.c0 = num(j, "c0", c.c0);
  if (j.contains("g")) c.g = AngularConfig::from_json(j.at("g"));
  c.A = vec(j, "A");
  c.b = vec(j, "b");
  c.scale = num(j, "scale", 1.0);
  if (j.contains("allow_failing")) {
    if (!j.at("allow_failing").is_boolean()) throw ConfigError("allow_failing must be a boolean");
    c.allow_failing = j.at("allow_failing").get<bool>();
  }
  return c;
}

LevyModel model_from_json(const json& j) { return ModelConfig::from_json(j).build(); }

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace levyheat
