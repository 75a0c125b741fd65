#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "levyheat/model.hpp"

namespace levyheat {

/// Angular density spec, as read from a config.
struct AngularConfig {
  std::string kind = "constant";  // constant | two_sided | quadrant | cosine
  double value = 1.0;             // constant
  double plus = 1.0, minus = 1.0; // two_sided
  double same = 1.0, opposite = 1.0;  // quadrant
  double a = 1.0, b = 0.0;        // cosine
  Vec direction;

  SphericalDensity build(unsigned dim) const;
  nlohmann::json to_json() const;
  static AngularConfig from_json(const nlohmann::json& j);
  bool operator==(const AngularConfig&) const = default;
};

/// Declarative model description. Keys:
///   family  stable | relativistic | stretched | exponential | tempered |
///           compound_poisson | gaussian
///   d, alpha, m, beta, delta, inner_exponent, c0, g, A, b, scale, allow_failing
struct ModelConfig {
  std::string family = "stable";
  unsigned d = 1;
  double alpha = 1.0;
  double m = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  double inner_exponent = 0.0;
  double c0 = 1.0;
  AngularConfig g;
  Vec A;        // row-major d x d, empty = 0
  Vec b;        // empty = 0
  double scale = 1.0;
  bool allow_failing = false;

  LevyModel build() const;
  RadialProfile profile() const;
  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);
  bool operator==(const ModelConfig&) const = default;
};

LevyModel model_from_json(const nlohmann::json& j);
/// Reads a JSON file; ConfigError on I/O or parse failure.
nlohmann::json load_json(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);

}  // namespace levyheat
