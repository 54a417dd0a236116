#include "herald/cli.hpp"

#include "herald/analytic.hpp"
#include "herald/figures.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace herald {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Run& r) { return nlohmann::json::parse(r.out); }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("herald_cli_test_" + std::to_string(::getpid()) + "_" + name);
}

TEST(CliHerald, SinglePairProbability) {
  const auto r = run({"herald", "--modes", "1", "--mu", "1", "--eta", "1", "--pnr", "ideal"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = json_of(r);
  EXPECT_NEAR(j["true_prob"].get<double>(), 0.0625, 1e-15);
  EXPECT_NEAR(j["p_single"].get<double>(), 0.25, 1e-15);
  EXPECT_NEAR(j["fidelity"].get<double>(), 1.0, 1e-15);
  EXPECT_EQ(j["M"].get<int>(), 1);
}

TEST(CliHerald, DoubleHeraldFromLambda) {
  const auto r = run({"herald", "--modes", "2", "--lambda", "0.3333333333", "--eta", "1", "--pnr", "ideal"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(json_of(r)["double_herald"].get<double>(), 0.0878, 1e-4);
}

TEST(CliHerald, SqueezingFromR) {
  const auto r = run({"herald", "-M", "1", "--r", "0.5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(json_of(r)["mu"].get<double>(), std::sinh(0.5) * std::sinh(0.5), 1e-15);
}

TEST(CliHerald, PrintedValuesRoundTrip) {
  const auto r = run({"herald", "--modes", "3", "--mu", "0.17", "--eta", "0.83", "--pnr", "k=4", "--pd", "1e-5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  HeraldConfig cfg;
  cfg.M = 3;
  cfg.eta = 0.83;
  cfg.squeezing = SqueezingParam::from_mu(0.17);
  cfg.detector = GeneralizedDetector::from_model(DetectorModel(0.83, 1e-5, 4));
  const auto a = evaluate_herald(cfg);
  const auto j = json_of(r);
  EXPECT_EQ(j["raw_single"].get<double>(), a.raw_single);
  EXPECT_EQ(j["true_prob"].get<double>(), a.true_prob);
  EXPECT_EQ(j["fidelity"].get<double>(), a.fidelity);

  const auto c = run({"herald", "--modes", "3", "--mu", "0.17", "--eta", "0.83", "--pnr", "k=4", "--pd", "1e-5",
                      "--format", "csv"});
  std::istringstream in(c.out);
  std::string header;
  std::string values;
  std::getline(in, header);
  std::getline(in, values);
  EXPECT_NE(values.find(format_number(a.fidelity)), std::string::npos);
}

TEST(CliHerald, TableUsesSixSignificantDigits) {
  const auto r = run({"herald", "--modes", "1", "--mu", "0.1", "--eta", "0.9", "--format", "table"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("raw_single"), std::string::npos);
  EXPECT_NE(r.out.find("0.0757512"), std::string::npos);
}

TEST(CliHerald, UsageErrors) {
  EXPECT_EQ(run({"herald", "--mu", "0.1"}).code, kExitUsage);
  EXPECT_EQ(run({"herald", "--modes", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"herald", "--modes", "1", "--mu", "0.1", "--lambda", "0.1"}).code, kExitUsage);
  EXPECT_EQ(run({"herald", "--modes", "1", "--mu", "0.1", "--eta", "1.5"}).code, kExitUsage);
  EXPECT_EQ(run({"herald", "--modes", "0", "--mu", "0.1"}).code, kExitUsage);
  EXPECT_EQ(run({"herald", "--modes", "1", "--mu", "-1"}).code, kExitUsage);
  EXPECT_EQ(run({"herald", "--modes", "1", "--mu", "0.1", "--pnr", "k=x"}).code, kExitUsage);
  EXPECT_EQ(run({"herald", "--modes", "1", "--mu", "0.1", "--pnr", "k=3", "--alpha", "0.5"}).code, kExitUsage);
  EXPECT_EQ(run({"herald", "--modes", "1", "--mu", "0.1", "--pd", "0.1"}).code, kExitUsage);
  EXPECT_EQ(run({"herald", "--modes", "1", "--mu", "0.1", "--format", "xml"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"bogus"}).code, kExitUsage);
  const auto e = run({"herald", "--modes", "1"});
  EXPECT_FALSE(e.err.empty());
}

TEST(CliHerald, VerifyAgainstOracle) {
  const auto ok = run({"herald", "--modes", "2", "--mu", "0.1", "--eta", "0.9", "--pnr", "k=3", "--pd", "1e-4", "--verify"});
  ASSERT_EQ(ok.code, kExitOk) << ok.err;
  EXPECT_LE(json_of(ok)["max_delta"].get<double>(), 1e-6);
  const auto trunc = run({"herald", "--modes", "1", "--mu", "0.3", "--verify", "--cutoff", "3"});
  EXPECT_EQ(trunc.code, kExitCheckFailed);
  EXPECT_NE(trunc.err.find("truncated"), std::string::npos);
}

TEST(CliHerald, DecoupledDetectorDefaultsDelta2) {
  const auto r = run({"herald", "--modes", "1", "--mu", "0.1", "--alpha", "0.5", "--delta1", "1e-4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = json_of(r);
  EXPECT_GT(j["delta2"].get<double>(), 0.0);
  EXPECT_EQ(j["alpha"].get<double>(), 0.5);
  const auto o = run({"herald", "--modes", "1", "--mu", "0.1", "--alpha", "0.5", "--delta1", "1e-4", "--delta2", "0"});
  EXPECT_EQ(json_of(o)["delta2"].get<double>(), 0.0);
}

TEST(CliMultiplex, QuotedSourceCounts) {
  auto n = [](std::vector<std::string> extra) {
    std::vector<std::string> args{"multiplex", "--modes", "1", "--pnr", "ideal"};
    args.insert(args.end(), extra.begin(), extra.end());
    const auto r = run(args);
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return json_of(r);
  };
  EXPECT_NEAR(n({"--eta", "0.95", "--fidelity-target", "0.99", "--eta-h", "0.25"})["N"].get<int>(), 22, 1);
  EXPECT_NEAR(n({"--eta", "0.9", "--fidelity-target", "0.99", "--eta-h", "0.25"})["N"].get<int>(), 44, 1);
  EXPECT_NEAR(n({"--eta", "0.9", "--fidelity-target", "0.99", "--eta-h", "0.5"})["N"].get<int>(), 75, 1);
  const auto b = run({"multiplex", "--topology", "bipartite", "--modes", "2", "--eta", "0.9", "--fidelity-target",
                      "0.99", "--eta-h", "0.5"});
  ASSERT_EQ(b.code, kExitOk);
  EXPECT_NEAR(json_of(b)["spectral_modes"].get<int>(), 41, 1);
}

TEST(CliMultiplex, InfeasibleDesign) {
  const auto r = run({"multiplex", "--eta", "0.9", "--delta1", "1e-2", "--fidelity-target", "0.999", "--eta-h", "0.5"});
  EXPECT_EQ(r.code, kExitInfeasible);
  EXPECT_NE(r.err.find("infeasible"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(CliMultiplex, UsageErrors) {
  EXPECT_EQ(run({"multiplex", "--eta", "0.9", "--eta-h", "0.5"}).code, kExitUsage);
  EXPECT_EQ(run({"multiplex", "--eta", "0.9", "--fidelity-target", "0.99"}).code, kExitUsage);
  EXPECT_EQ(run({"multiplex", "--topology", "ring", "--fidelity-target", "0.99", "--eta-h", "0.5"}).code, kExitUsage);
  EXPECT_EQ(run({"multiplex", "--fidelity-target", "1.5", "--eta-h", "0.5"}).code, kExitUsage);
}

TEST(CliFigure, WritesCsvFile) {
  const auto path = temp_file("fig4.csv");
  const auto r = run({"figure", "fig4", "--out", path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(path, std::ios::binary);
  std::stringstream text;
  text << in.rdbuf();
  std::ostringstream expected;
  write_csv(expected, figure_table("fig4"));
  EXPECT_EQ(text.str(), expected.str());
  std::filesystem::remove(path);
  EXPECT_EQ(run({"figure", "fig4"}).out, expected.str());
}

TEST(CliFigure, GridSizeAndUnknownId) {
  const auto r = run({"figure", "fig6", "--grid-size", "3"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1 + 4 * 9);
  EXPECT_EQ(run({"figure", "fig11"}).code, kExitUsage);
  EXPECT_EQ(run({"figure"}).code, kExitUsage);
}

TEST(CliOracleCheck, PassesAndIsDeterministic) {
  const auto a = run({"oracle-check", "--seed", "7"});
  const auto b = run({"oracle-check", "--seed", "7"});
  ASSERT_EQ(a.code, kExitOk) << a.out;
  EXPECT_EQ(a.out, b.out);
  for (const char* name : {"herald-grid", "swap-herald", "noon-swap", "four-photon", "symmetry"})
    EXPECT_NE(a.out.find(name), std::string::npos) << name;
}

TEST(CliOracleCheck, SmallCutoffFails) {
  const auto r = run({"oracle-check", "--cutoff", "3"});
  EXPECT_EQ(r.code, kExitCheckFailed);
  EXPECT_NE(r.out.find("herald-grid   FAIL"), std::string::npos);
}

TEST(CliConfig, FileValuesYieldToFlags) {
  const auto path = temp_file("config.json");
  {
    std::ofstream f(path);
    f << R"({"modes": 2, "mu": 0.1, "eta": 0.9, "pnr": "k=3", "pd": 1e-4, "verify": true, "format": "json"})";
  }
  const auto r = run({"herald", "--config", path.string(), "--eta", "0.8"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = json_of(r);
  EXPECT_EQ(j["M"].get<int>(), 2);
  EXPECT_EQ(j["eta"].get<double>(), 0.8);
  EXPECT_TRUE(j.contains("max_delta"));
  const auto swapped = run({"herald", "--config", path.string(), "--lambda", "0.2"});
  ASSERT_EQ(swapped.code, kExitOk) << swapped.err;
  EXPECT_NEAR(json_of(swapped)["lambda"].get<double>(), 0.2, 1e-15);
  std::filesystem::remove(path);
  EXPECT_EQ(run({"herald", "--config", path.string()}).code, kExitUsage);
}

TEST(CliConfig, RejectsMalformedFile) {
  const auto path = temp_file("bad.json");
  {
    std::ofstream f(path);
    f << "[1, 2";
  }
  EXPECT_EQ(run({"herald", "--config", path.string()}).code, kExitUsage);
  std::filesystem::remove(path);
}

TEST(CliHelp, ExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("oracle-check"), std::string::npos);
  EXPECT_EQ(run({"herald", "--help"}).code, kExitOk);
}

int binary_exit(const std::string& args) {
  const std::string cmd = std::string(HERALD_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliBinary, ExitCodes) {
  EXPECT_EQ(binary_exit("herald --modes 1 --mu 1"), 0);
  EXPECT_EQ(binary_exit("herald --mu 1"), 2);
  EXPECT_EQ(binary_exit("figure nope"), 2);
  EXPECT_EQ(binary_exit("multiplex --eta 0.9 --delta1 1e-2 --fidelity-target 0.999 --eta-h 0.5"), 3);
  EXPECT_EQ(binary_exit("herald --modes 1 --mu 0.3 --verify --cutoff 3"), 1);
  EXPECT_EQ(binary_exit("--help"), 0);
}

}  // namespace
}  // namespace herald
