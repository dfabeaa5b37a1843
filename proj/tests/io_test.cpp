#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "remon/io.hpp"

using namespace remon;

namespace {

Json sample_config() {
  return Json::parse(R"({
    "n_sources": 2, "k_select": 1, "horizon": 12, "rate_budget": 0.25,
    "sources": [{"mu": 0.1, "lambda": 0.3}, {"mu": 0.3, "lambda": 0.2}],
    "seed": "0x2a"
  })");
}

}  // namespace

TEST(Seeds, HexAndDecimal) {
  EXPECT_EQ(parse_seed(std::string("0x2a")), 42u);
  EXPECT_EQ(parse_seed(std::string("0X2A")), 42u);
  EXPECT_EQ(parse_seed(std::string("42")), 42u);
  EXPECT_EQ(parse_seed(Json(42)), 42u);
  EXPECT_EQ(parse_seed(std::string("0xffffffffffffffff")), ~0ULL);
  EXPECT_EQ(format_seed(0x5eed), "0x5eed");
  EXPECT_EQ(parse_seed(format_seed(0xdeadbeefULL)), 0xdeadbeefULL);
}

TEST(Seeds, Rejects) {
  EXPECT_THROW(parse_seed(std::string("")), std::invalid_argument);
  EXPECT_THROW(parse_seed(std::string("12abc")), std::invalid_argument);
  EXPECT_THROW(parse_seed(std::string("0xzz")), std::invalid_argument);
  EXPECT_THROW(parse_seed(Json(-3)), std::invalid_argument);
  EXPECT_THROW(parse_seed(Json(1.5)), std::invalid_argument);
}

TEST(Numbers, TwelveSignificantDigits) {
  EXPECT_EQ(format12(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format12(2.0), "2");
  EXPECT_EQ(format12(123456.789012345), "123456.789012");
  EXPECT_DOUBLE_EQ(round12(1.0 / 3.0), 0.333333333333);
  EXPECT_EQ(round12(0.0), 0.0);
}

TEST(Config, RoundTrip) {
  const auto cfg = config_from_json(sample_config());
  EXPECT_EQ(cfg.n_sources, 2);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_DOUBLE_EQ(cfg.sources[1].mu, 0.3);
  const auto again = config_from_json(config_to_json(cfg));
  EXPECT_EQ(again.horizon, cfg.horizon);
  EXPECT_EQ(again.seed, cfg.seed);
  EXPECT_DOUBLE_EQ(again.rate_budget, cfg.rate_budget);
  EXPECT_DOUBLE_EQ(again.sources[0].lambda, cfg.sources[0].lambda);
}

TEST(Config, MissingAndMistypedFieldsAreListed) {
  auto doc = sample_config();
  doc.erase("horizon");
  doc["k_select"] = "one";
  try {
    config_from_json(doc);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    ASSERT_EQ(e.violations().size(), 2u);
    EXPECT_NE(std::string(e.what()).find("horizon"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("k_select"), std::string::npos);
  }
  EXPECT_THROW(config_from_json(Json::array()), ConfigError);
}

TEST(Config, InvalidValuesAreRejected) {
  auto doc = sample_config();
  doc["k_select"] = 3;
  EXPECT_THROW(config_from_json(doc), ConfigError);
  doc = sample_config();
  doc["sources"][0]["mu"] = 0.6;
  EXPECT_THROW(config_from_json(doc), ConfigError);
}

TEST(Policy, ThreeStageRoundTrip) {
  const auto cfg = config_from_json(sample_config());
  const auto spec = make_three_stage_spec(cfg, {4, 9});
  const auto doc = three_stage_to_json(spec);
  EXPECT_EQ(doc["persistent_states"][0], "01");
  EXPECT_EQ(doc["persistent_states"][1], "10");
  EXPECT_EQ(policy_from_json(cfg, doc), compile_three_stage(cfg, spec));
  Json bare{{"kind", "three_stage"}, {"switch_times", {4, 9}}};
  EXPECT_EQ(policy_from_json(cfg, bare), compile_three_stage(cfg, spec));
}

TEST(Policy, TableRoundTripAndBaselines) {
  const auto cfg = config_from_json(sample_config());
  const auto policy = compile_three_stage(cfg, make_three_stage_spec(cfg, {2, 7}));
  EXPECT_EQ(policy_from_json(cfg, table_policy_to_json(policy)), policy);
  EXPECT_EQ(policy_from_json(cfg, Json{{"kind", "always"}}), always_update_policy(cfg));
  EXPECT_EQ(policy_from_json(cfg, Json{{"kind", "never"}}), never_update_policy(cfg));
  EXPECT_THROW(policy_from_json(cfg, Json{{"kind", "sometimes"}}), std::invalid_argument);
  Json bad_state{{"kind", "three_stage"}, {"switch_times", {1, 1}}, {"persistent_states", {"00", "10"}}};
  EXPECT_THROW(policy_from_json(cfg, bad_state), std::invalid_argument);
}

TEST(Files, WriteCreatesDirectoriesAndReadParses) {
  const auto dir = std::filesystem::temp_directory_path() / "remon_io_test";
  std::filesystem::remove_all(dir);
  const auto path = dir / "nested" / "cfg.json";
  write_text_file(path, sample_config().dump());
  EXPECT_EQ(load_config(path).horizon, 12);
  std::ofstream(dir / "broken.json") << "{not json";
  EXPECT_THROW(read_json_file(dir / "broken.json"), std::runtime_error);
  EXPECT_THROW(read_json_file(dir / "missing.json"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST(Kkt, SolutionDocumentFields) {
  const auto cfg = config_from_json(sample_config());
  const auto sol = compute_Tn(cfg, alpha_table(cfg), cfg.rate_budget);
  const auto doc = kkt_solution_to_json(sol);
  for (const char* key : {"rate", "full_rate", "theta", "set_a", "set_b", "n_tilde", "tau_of_m", "t_prime",
                          "switch_times", "breakpoints"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_EQ(doc["switch_times"].get<std::vector<int>>(), sol.switch_times);
}
