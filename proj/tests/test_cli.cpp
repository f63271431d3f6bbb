#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "canonweil/canonweil.hpp"

using namespace canonweil;

namespace {

SuiteConfig config(const std::string& suite, int p = 3, int n = 1) {
  SuiteConfig c;
  c.p = p;
  c.n = n;
  c.suite = suite;
  return c;
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

/// Runs the CLI with the given arguments; returns its exit status and captured stdout.
std::pair<int, std::string> run_cli(const std::string& args) {
  const auto out = std::filesystem::temp_directory_path() / ("weilverify_test_" + std::to_string(::getpid()) + ".out");
  const std::string cmd = std::string(WEILVERIFY_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream text;
  text << in.rdbuf();
  std::filesystem::remove(out);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, text.str()};
}

}  // namespace

TEST(Report, ValidationRejectsBadConfigs) {
  EXPECT_THROW(run_suite(config("gauss", 13, 1)), config_error);
  EXPECT_THROW(run_suite(config("gauss", 5, 2)), config_error);
  EXPECT_THROW(run_suite(config("nonsense")), config_error);
  auto c = config("gauss");
  c.samples = -1;
  EXPECT_THROW(run_suite(c), config_error);
  EXPECT_THROW(run_suite(config("character-table", 3, 2)), config_error);
}

TEST(Report, GaussSuitePasses) {
  for (int p : {3, 5, 7, 11}) {
    const Report r = run_suite(config("gauss", p));
    ASSERT_EQ(r.suites.size(), 1u);
    EXPECT_EQ(r.suites[0].failed(), 0u);
    EXPECT_EQ(exit_status(r), 0);
  }
}

TEST(Report, JsonIsByteStable) {
  auto c = config("kernel-mult");
  c.seed = 7;
  EXPECT_EQ(emit_report(run_suite(c)), emit_report(run_suite(c)));
  const auto j = nlohmann::json::parse(emit_report(run_suite(c)));
  EXPECT_FALSE(j.contains("duration_ms"));
  EXPECT_EQ(j["version"], kVersion);
  EXPECT_EQ(j["suites"][0]["total"], 512);
  EXPECT_EQ(j["suites"][0]["mode"], "exhaustive");
  c.timing = true;
  EXPECT_TRUE(nlohmann::json::parse(emit_report(run_suite(c))).contains("duration_ms"));
}

TEST(Report, SampledModeHonoursSeedAndSamples) {
  auto c = config("sp-invariance", 3, 2);
  c.samples = 5;
  const Report a = run_suite(c);
  EXPECT_EQ(a.suites[0].mode, "sampled");
  EXPECT_EQ(a.suites[0].checks.size(), 5u);
  c.seed = 1;
  const Report b = run_suite(c);
  std::vector<std::string> ia, ib;
  for (const auto& ch : a.suites[0].checks) ia.push_back(ch.check_id);
  for (const auto& ch : b.suites[0].checks) ib.push_back(ch.check_id);
  EXPECT_NE(ia, ib);
}

TEST(Report, CsvRowsMatchChecks) {
  const Report r = run_suite(config("operators"));
  Report as_csv = r;
  as_csv.config.format = ReportFormat::csv;
  const std::string csv = emit_report(as_csv);
  EXPECT_EQ(count_lines(csv) - 1, static_cast<int>(r.suites[0].checks.size()));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "suite,check_id,status,witness");
}

TEST(Report, CharacterTableCsv) {
  auto c = config("character-table");
  c.format = ReportFormat::csv;
  const std::string csv = emit_report(run_suite(c));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "representative,size,trace,prediction,match");
  EXPECT_EQ(count_lines(csv), 8);
}

TEST(Report, FailingCheckSetsStatusAndWitness) {
  Report r{config("gauss"), {}, 0};
  r.suites.push_back({"gauss", "fixed", {{"a", true, nullptr}, {"b", false, nlohmann::json{{"x", 1}}}}, {}, {}});
  EXPECT_EQ(exit_status(r), 1);
  const auto j = to_json(r);
  EXPECT_EQ(j["status"], "fail");
  EXPECT_EQ(j["suites"][0]["failed"], 1);
  EXPECT_EQ(j["suites"][0]["witnesses"][0]["check_id"], "b");
}

TEST(Report, AllSkipsGuardedSuitesAtHalfDimensionTwo) {
  auto c = config("all", 3, 2);
  c.samples = 2;
  const Report r = run_suite(c);
  EXPECT_EQ(r.suites.size(), suite_names().size());
  for (const auto& s : r.suites)
    if (s.suite == "character-table") { EXPECT_EQ(s.mode, "skipped"); }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("--suite gauss").first, 0);
  EXPECT_EQ(run_cli("--suite nonsense").first, 2);
  EXPECT_EQ(run_cli("--p 13 --suite gauss").first, 2);
  EXPECT_EQ(run_cli("--format xml").first, 2);
  EXPECT_EQ(run_cli("--suite gauss --out /nonexistent/dir/report.json").first, 2);
  // The DFT comparison fails under the standard form convention.
  EXPECT_EQ(run_cli("--suite dft").first, 1);
}

TEST(Cli, OutputIsReproducibleAndConvertible) {
  const auto [s1, j1] = run_cli("--suite c1-associativity --seed 3");
  const auto [s2, j2] = run_cli("--suite c1-associativity --seed 3");
  EXPECT_EQ(s1, 0);
  EXPECT_EQ(j1, j2);
  const auto [s3, csv] = run_cli("--suite c1-associativity --seed 3 --format csv");
  EXPECT_EQ(s3, 0);
  EXPECT_EQ(count_lines(csv) - 1, nlohmann::json::parse(j1)["suites"][0]["total"].get<int>());
}

TEST(Cli, ListNamesEverySuite) {
  const auto [status, text] = run_cli("--list");
  EXPECT_EQ(status, 0);
  for (const auto& name : suite_names()) EXPECT_NE(text.find(name), std::string::npos) << name;
}
