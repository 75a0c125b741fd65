#include <gtest/gtest.h>

#include <filesystem>

#include "levyheat/config.hpp"
#include "levyheat/harness.hpp"

using namespace levyheat;
using nlohmann::json;

TEST(Config, RoundTrip) {
  const json src = {{"family", "exponential"}, {"d", 1}, {"m", 1.0}, {"beta", 1.0}, {"delta", 3.0},
                    {"inner_exponent", 1.5}, {"c0", 2.0},
                    {"g", {{"kind", "two_sided"}, {"plus", 1.0}, {"minus", 0.5}}},
                    {"A", {0.5}}, {"b", {0.2}}};
  const ModelConfig c = ModelConfig::from_json(src);
  EXPECT_EQ(ModelConfig::from_json(c.to_json()), c);
  const LevyModel mdl = c.build();
  EXPECT_EQ(mdl.family(), Family::exponential);
  EXPECT_DOUBLE_EQ(mdl.kappa(), 1.0);
  EXPECT_DOUBLE_EQ(mdl.drift()[0], 0.2);
  EXPECT_TRUE(mdl.has_gaussian());
}

TEST(Config, EveryFamilyBuilds) {
  for (const json& j : {json{{"family", "stable"}, {"d", 2}, {"alpha", 1.5},
                             {"g", {{"kind", "quadrant"}, {"same", 1}, {"opposite", 2}}}},
                        json{{"family", "relativistic"}, {"d", 3}, {"alpha", 1.0}, {"m", 2.0}},
                        json{{"family", "stretched"}, {"m", 1}, {"beta", 0.5}, {"delta", 1}, {"inner_exponent", 1.5}},
                        json{{"family", "compound_poisson"}, {"m", 1}, {"beta", 1}, {"delta", 3}},
                        json{{"family", "gaussian"}, {"d", 2}, {"A", {{1, 0}, {0, 2}}}},
                        json{{"family", "stable"}, {"d", 2}, {"alpha", 0.7},
                             {"g", {{"kind", "cosine"}, {"a", 1}, {"b", 0.5}, {"direction", {1, 0}}}}}}) {
    const ModelConfig c = ModelConfig::from_json(j);
    EXPECT_NO_THROW(c.build()) << j.dump();
    EXPECT_EQ(ModelConfig::from_json(c.to_json()), c) << j.dump();
  }
}

TEST(Config, Errors) {
  EXPECT_THROW(model_from_json({{"family", "stable"}, {"alpah", 1.0}}), ConfigError);
  EXPECT_THROW(model_from_json({{"d", 1}}), ConfigError);
  EXPECT_THROW(model_from_json({{"family", "levy"}}), ConfigError);
  EXPECT_THROW(model_from_json({{"family", "stable"}, {"g", {{"kind", "quadrant"}}}}), ConfigError);
  EXPECT_THROW(model_from_json({{"family", "exponential"}, {"m", 1}, {"beta", 1}, {"delta", 1}}), ConfigError);
  EXPECT_NO_THROW(model_from_json({{"family", "exponential"}, {"m", 1}, {"beta", 1}, {"delta", 1},
                                   {"allow_failing", true}}));
  EXPECT_THROW(load_json("/nonexistent/file.json"), ConfigError);
}

TEST(Config, FileRoundTrip) {
  const auto path = (std::filesystem::temp_directory_path() / "levyheat_cfg_test.json").string();
  const json j = {{"family", "stable"}, {"d", 1}, {"alpha", 1.2}, {"g", {{"kind", "constant"}, {"value", 0.3}}}};
  save_json(path, j);
  EXPECT_EQ(ModelConfig::from_json(load_json(path)), ModelConfig::from_json(j));
  std::filesystem::remove(path);
}

TEST(Harness, BuiltinList) {
  const auto& list = builtin_scenarios();
  EXPECT_GE(list.size(), 10u);
  for (const char* n : {"cauchy_oracle", "stable1d", "stable2d_quadrants", "relativistic1d", "stretched_exp1d",
                        "exponential_tempered1d", "compound_poisson_jump_diffusion", "compound_poisson_pure",
                        "counterexample_no_K", "invariant_suite"})
    EXPECT_NO_THROW(find_scenario(n)) << n;
  EXPECT_THROW(find_scenario("nope"), ConfigError);
  // every scenario config carries positive tolerances and a buildable model
  for (const auto& s : list) {
    for (const auto& [k, v] : s.config().at("tolerances").items()) EXPECT_GT(v.get<double>(), 0.0) << s.name() << k;
    if (s.config().contains("model")) EXPECT_NO_THROW(model_from_json(s.config().at("model"))) << s.name();
  }
}

TEST(Harness, ReportsAndExitCodes) {
  RunOptions opt;
  opt.out_dir = (std::filesystem::temp_directory_path() / "levyheat_harness_test").string();
  const auto reps = verify({"profile_classification", "counterexample_no_K"}, opt);
  ASSERT_EQ(reps.size(), 2u);
  EXPECT_TRUE(reps[0].pass());
  EXPECT_TRUE(reps[1].pass());
  bool demo = false;
  for (const auto& c : reps[1].checks) demo = demo || c.status == Status::demonstrated_fail;
  EXPECT_TRUE(demo);
  EXPECT_EQ(exit_code(reps), 0);
  const json j = load_json(opt.out_dir + "/counterexample_no_K/report.json");
  EXPECT_EQ(j["status"], "pass");
  EXPECT_TRUE(std::filesystem::exists(opt.out_dir + "/counterexample_no_K/ratio_diverges.csv"));
  std::filesystem::remove_all(opt.out_dir);

  ScenarioReport bad;
  bad.checks.push_back({});
  bad.checks.back().status = Status::fail;
  EXPECT_EQ(exit_code({bad}), 1);
  bad.checks.back().status = Status::error;
  EXPECT_EQ(exit_code({bad}), 2);
}

TEST(Harness, OverridesAndToleranceScale) {
  RunOptions opt;
  opt.overrides = {{"t", 1.0}, {"k_r", 4.0}};
  const auto rep = run_scenario(find_scenario("counterexample_no_K"), opt);
  EXPECT_EQ(rep.config["k_r"], 4.0);
  RunOptions broken;
  broken.overrides = {{"model", {{"family", "nope"}}}};
  EXPECT_TRUE(run_scenario(find_scenario("counterexample_no_K"), broken).infrastructure_error());
}
