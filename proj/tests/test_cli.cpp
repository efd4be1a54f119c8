#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "paleyscope/config.hpp"
#include "paleyscope/experiment.hpp"
#include "paleyscope/report.hpp"

using namespace paleyscope;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("paleyscope_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PALEYSCOPE_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json heat_doc(const std::string& suite) {
  return json{{"suite", suite},
              {"symbol", {{"family", "fractional"}, {"gamma", 2}, {"nu", 0.5}, {"a", 1}}},
              {"grid", {{"d", 1}, {"n", 64}, {"L", 24}, {"nt", 32}, {"dt", 0.01}}}};
}

}  // namespace

TEST(Config, ParseErrors) {
  auto doc = heat_doc("lp-ratio");
  doc["bogus"] = 1;
  EXPECT_THROW(parse_config(doc), ConfigError);

  doc = heat_doc("lp-ratio");
  doc["grid"]["n"] = 100;
  EXPECT_THROW(parse_config(doc), ConfigError);

  doc = heat_doc("lp-ratio");
  doc["grid"]["d"] = 3;
  doc["grid"]["n"] = 8;
  EXPECT_THROW(parse_config(doc), ConfigError);
  doc["allow_3d"] = true;
  EXPECT_NO_THROW(parse_config(doc));

  doc = heat_doc("no-such-suite");
  EXPECT_THROW(parse_config(doc), ConfigError);

  doc = heat_doc("lp-ratio");
  doc["symbol"]["nu"] = 1.0;  // Re a = 1 is not strictly inside (nu, 1/nu)
  EXPECT_THROW(parse_config(doc), ConfigError);

  doc = heat_doc("lp-ratio");
  doc["symbol"]["family"] = "unknown";
  EXPECT_THROW(parse_config(doc), ConfigError);

  doc = heat_doc("lp-ratio");
  doc["grid"]["L"] = "24";
  EXPECT_THROW(parse_config(doc), ConfigError);
}

TEST(Config, SuitesAndAliases) {
  EXPECT_EQ(suite_names().size(), 6u);
  EXPECT_EQ(canonical_suite("assumptions"), "verify-assumptions");
  EXPECT_EQ(canonical_suite("sharp-bound"), "sharp-bound");
  EXPECT_FALSE(canonical_suite("bogus").has_value());
  const auto cfg = parse_config(heat_doc("assumptions"));
  EXPECT_EQ(cfg.suite, "verify-assumptions");
  EXPECT_EQ(config_hash(cfg), config_hash(parse_config(heat_doc("assumptions"))));
  EXPECT_NE(config_hash(cfg), config_hash(parse_config(heat_doc("lp-ratio"))));
}

TEST(Report, CsvAndFormatting) {
  CsvTable empty({"a", "b"});
  EXPECT_EQ(empty.str(), "a,b\n");
  CsvTable t({"name", "x", "n", "ok"});
  t.add_row({std::string("heat"), 0.1, std::int64_t{3}, true});
  EXPECT_EQ(t.str(), "name,x,n,ok\nheat,0.10000000000000001,3,true\n");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(json_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Report, JsonFixedPoint) {
  const auto cfg = parse_config(heat_doc("verify-assumptions"));
  const auto out = scratch("fixed");
  std::ostringstream log;
  ASSERT_EQ(run_experiment(cfg, out, log), 0) << log.str();
  const std::string first = slurp(out / "verify-assumptions.json");
  const std::string second = dump_json(json::parse(first));
  EXPECT_EQ(first, second);
  // The embedded config parses back to the same experiment.
  const auto again = parse_config(json::parse(first)["config"]);
  EXPECT_EQ(config_hash(again), config_hash(cfg));
}

TEST(Experiment, VerifyAssumptionsExample) {
  const auto cfg = parse_config(heat_doc("verify-assumptions"));
  const auto res = run_suite(cfg, scratch("va"), std::cerr);
  EXPECT_FALSE(res.failed());
  EXPECT_NEAR(res.report["C0"].get<double>(), 0.5, 1e-6);
  EXPECT_TRUE(res.report["theta_identities"]["exact"].get<bool>());
  EXPECT_EQ(res.full_report()["status"], "pass");
}

TEST(Experiment, ExponentsExample) {
  auto cfg = parse_config(json{{"suite", "exponents"}, {"exponents", {{"gamma", "2"}, {"dim", 1}}}});
  const auto res = run_suite(cfg, scratch("exp"), std::cerr);
  EXPECT_FALSE(res.failed());
  EXPECT_EQ(res.report["c2"]["exact"], "2");
  EXPECT_EQ(res.report["c3"]["exact"], "5/2");
  EXPECT_EQ(res.report["delta0"]["exact"], "1/2");
  EXPECT_DOUBLE_EQ(res.report["c3"]["value"].get<double>(), 2.5);
  ASSERT_TRUE(res.csv.has_value());
  EXPECT_EQ(res.csv->rows(), 3u);
}

TEST(Experiment, FailingCheckGivesExitOne) {
  // Density 0.4 on both d = 1 nodes gives sup Re psi = -0.8 > -N0.
  auto doc = heat_doc("verify-assumptions");
  doc["symbol"] = {{"family", "levy"}, {"gamma", 0.5}, {"N0", 1}, {"density", 0.4}};
  const auto cfg = parse_config(doc);
  std::ostringstream log;
  const int code = run_experiment(cfg, scratch("fail"), log);
  EXPECT_EQ(code, 1) << log.str();
  EXPECT_NE(log.str().find("FAIL"), std::string::npos);
}

TEST(Experiment, RerunIsByteIdentical) {
  auto doc = heat_doc("lp-ratio");
  doc["corpus"] = {{"count", 3}};
  const auto cfg = parse_config(doc);
  const auto a = scratch("rerun_a");
  const auto b = scratch("rerun_b");
  std::ostringstream log;
  run_experiment(cfg, a, log);
  run_experiment(cfg, b, log);
  EXPECT_EQ(slurp(a / "lp-ratio.json"), slurp(b / "lp-ratio.json"));
  EXPECT_EQ(slurp(a / "lp-ratio.csv"), slurp(b / "lp-ratio.csv"));
}

TEST(Binary, ExitCodes) {
  const auto out = scratch("bin");
  EXPECT_EQ(run_cli("no-such-suite --out " + out.string()), 2);
  EXPECT_EQ(run_cli("--bogus-flag"), 2);
  EXPECT_EQ(run_cli("lp-ratio --out " + out.string()), 2);  // needs --config
  EXPECT_EQ(run_cli("exponents --gamma 2 --dim 1 --out " + out.string()), 0);
  const auto rep = json::parse(slurp(out / "exponents.json"));
  EXPECT_EQ(rep["c3"]["exact"], "5/2");

  const auto cfg_path = out / "bad.json";
  std::ofstream(cfg_path) << R"({"suite": "lp-ratio", "grid": {"n": 100}})";
  EXPECT_EQ(run_cli("--config " + cfg_path.string() + " --out " + out.string()), 2);
  EXPECT_EQ(run_cli("verify-assumptions --config " + std::string(PALEYSCOPE_CONFIG_DIR) +
                    "/heat_assumptions.json --out " + out.string()), 0);
}
