#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <boost/math/distributions/non_central_t.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(RTAUDIT_CLI) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("rtaudit_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string data(const std::string& name) { return std::string(RTAUDIT_DATA_DIR) + "/" + name; }

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST(Cli, MissingInputFileIsIoError) {
  const auto r = run("analyze --input /nonexistent/trials.csv --output-dir " + scratch("missing").string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("/nonexistent/trials.csv"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("analyze --input " + data("simulated_trials.csv") + " --bogus").exit_code, 1);
  EXPECT_EQ(run("").exit_code, 1);
  EXPECT_EQ(run("simulate --family gamma").exit_code, 1);
}

TEST(Cli, ParseErrorCarriesLineNumber) {
  const auto dir = scratch("parse");
  std::ofstream(dir / "bad.csv") << "participant_id,condition,rt_ms\np1,congruent,500\np1,neutral,510\n";
  const auto r = run("analyze --input " + (dir / "bad.csv").string() + " --output-dir " + dir.string());
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.output.find("bad.csv:3"), std::string::npos);
}

TEST(Cli, DegenerateDataExitCode) {
  const auto dir = scratch("degenerate");
  std::ofstream(dir / "one.csv") << "participant_id,condition,rt_ms\np1,congruent,500\np1,incongruent,510\n"
                                    "p2,congruent,500\np2,incongruent,530\n";
  EXPECT_EQ(run("analyze --input " + (dir / "one.csv").string() + " --output-dir " + dir.string()).exit_code, 5);
}

TEST(Cli, AnalyzeShippedFixture) {
  const auto dir = scratch("analyze");
  const auto r = run("analyze --input " + data("simulated_trials.csv") + " --output-dir " + dir.string());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("mean(accuracy)"), std::string::npos);
  EXPECT_NE(r.output.find("Trained classifier"), std::string::npos);
  const auto j = read_json(dir / "report.json");
  const double median = j["classifiers"]["median"]["mean_accuracy"].get<double>();
  EXPECT_GE(median, 0.495);
  EXPECT_LE(median, 0.515);
  EXPECT_EQ(j["dataset"]["participants"].get<int>(), 66);
  EXPECT_TRUE(fs::exists(dir / "report.csv"));
  EXPECT_TRUE(fs::exists(dir / "report.txt"));
}

TEST(Cli, AnalyzeIsDeterministicAcrossRunsAndWorkers) {
  const auto a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
  const std::string base = "analyze --input " + data("simulated_trials.csv") + " --seed 7 --output-dir ";
  ASSERT_EQ(run(base + a.string()).exit_code, 0);
  ASSERT_EQ(run(base + b.string()).exit_code, 0);
  ASSERT_EQ(run(base + c.string() + " --workers 3").exit_code, 0);
  for (const char* f : {"report.json", "report.csv", "report.txt"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(c / f)) << f;
  }
  EXPECT_EQ(read_json(a / "report.json")["config"]["seed"].get<int>(), 7);
}

TEST(Cli, AnalyzeRangeFilterAndFormats) {
  const auto dir = scratch("filter");
  const auto r = run("analyze --input " + data("simulated_trials.csv") +
                     " --rt-min 200 --rt-max 1500 --format json --output-dir " + dir.string());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_GT(read_json(dir / "report.json")["dataset"]["dropped_count"].get<int>(), 0);
  EXPECT_FALSE(fs::exists(dir / "report.csv"));
}

TEST(Cli, HistogramFixtures) {
  const std::vector<std::tuple<std::string, double, double>> cases{
      {"histogram_disjoint.csv", 1.0, 1.0},
      {"histogram_identical.csv", 0.5, 0.5},
      {"histogram_6_4.csv", 0.6, 0.6},
      {"histogram_three_bins.csv", 0.6, 0.7},
  };
  for (const auto& [file, step, bayes] : cases) {
    const auto dir = scratch("hist");
    const auto r = run("histogram --input " + data(file) + " --output-dir " + dir.string());
    ASSERT_EQ(r.exit_code, 0) << r.output;
    const auto j = read_json(dir / "histogram.json");
    EXPECT_NEAR(j["step_accuracy"].get<double>(), step, 1e-12) << file;
    EXPECT_NEAR(j["bayes_accuracy"].get<double>(), bayes, 1e-12) << file;
  }
}

TEST(Cli, HistogramInvariantViolation) {
  const auto dir = scratch("hist_bad");
  std::ofstream(dir / "h.csv") << "edge_ms,congruent,incongruent\n300,1,2\n250,,\n";
  EXPECT_EQ(run("histogram --input " + (dir / "h.csv").string() + " --output-dir " + dir.string()).exit_code, 4);
}

TEST(Cli, SimulateSmokeRunsUnderOneSecond) {
  const auto dir = scratch("smoke");
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run("simulate --participants 4 --replications 10 --output-dir " + dir.string());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_LT(seconds, 1.0);
  EXPECT_TRUE(fs::exists(dir / "sweep.json"));
  EXPECT_TRUE(fs::exists(dir / "sweep.csv"));
}

TEST(Cli, SimulateGridAndDeterminism) {
  const auto a = scratch("grid_a"), b = scratch("grid_b");
  const std::string args =
      "simulate --participants 4,8 --trials 20 --delta-ms 0,30 --replications 5 --seed 3 --format json,csv,text";
  ASSERT_EQ(run(args + " --output-dir " + a.string()).exit_code, 0);
  ASSERT_EQ(run(args + " --workers 2 --output-dir " + b.string()).exit_code, 0);
  for (const char* f : {"sweep.json", "sweep.csv", "sweep.txt"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  EXPECT_EQ(read_json(a / "sweep.json")["cells"].size(), 4u);
}

TEST(Cli, SimulateDefaultRunMatchesPower) {
  const auto dir = scratch("default");
  const auto r = run("simulate --output-dir " + dir.string());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto cell = read_json(dir / "sweep.json")["cells"][0];
  EXPECT_EQ(cell["participants"].get<int>(), 66);
  EXPECT_EQ(cell["trials_per_condition"].get<int>(), 180);
  const double n = 66, d = 0.27;
  const boost::math::students_t central(n - 1);
  const double crit = boost::math::quantile(boost::math::complement(central, 0.025));
  const boost::math::non_central_t nct(n - 1, d * std::sqrt(n));
  const double power = boost::math::cdf(boost::math::complement(nct, crit)) + boost::math::cdf(nct, -crit);
  EXPECT_NEAR(cell["rejection_rate"].get<double>(), power, 0.05);
}

TEST(Cli, SimulateNullIsCalibrated) {
  const auto dir = scratch("null");
  const auto r = run("simulate --delta 0 --output-dir " + dir.string());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NEAR(read_json(dir / "sweep.json")["cells"][0]["rejection_rate"].get<double>(), 0.05, 0.02);
}

TEST(Cli, PlotWritesDeterministicSvg) {
  const auto a = scratch("plot_a"), b = scratch("plot_b");
  for (const char* style : {"trial_distributions", "mean_sem_distributions"}) {
    ASSERT_EQ(run(std::string("plot --style ") + style + " --output-dir " + a.string()).exit_code, 0);
    ASSERT_EQ(run(std::string("plot --style ") + style + " --output-dir " + b.string()).exit_code, 0);
    const auto svg = slurp(a / (std::string(style) + ".svg"));
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_EQ(svg, slurp(b / (std::string(style) + ".svg")));
  }
  const auto c = scratch("plot_c");
  ASSERT_EQ(run("plot --style trial_distributions --input " + data("simulated_trials.csv") +
                " --participant sim001 --output-dir " + c.string())
                .exit_code,
            0);
  EXPECT_EQ(run("plot --style violin --output-dir " + c.string()).exit_code, 1);
}

TEST(Cli, HelpMatchesGoldenFile) {
  std::string help;
  for (const char* cmd : {"--help", "analyze --help", "simulate --help", "histogram --help", "plot --help"}) {
    const auto r = run(cmd);
    ASSERT_EQ(r.exit_code, 0);
    help += "$ rtaudit " + std::string(cmd) + "\n" + r.output + "\n";
  }
  const fs::path golden = fs::path(RTAUDIT_GOLDEN_DIR) / "help.txt";
  EXPECT_EQ(help, slurp(golden)) << "regenerate " << golden << " if the change is intended";
  for (const char* flag : {"--input", "--output-dir", "--format", "--seed", "--train-fraction",
                           "--repetitions", "--participants", "--trials", "--delta-ms", "--sigma-ms",
                           "--family", "--replications", "--alpha", "--workers", "--rt-min", "--rt-max",
                           "--column-map"})
    EXPECT_NE(help.find(flag), std::string::npos) << flag;
  for (const char* value : {"json", "csv", "text", "normal", "lognormal"})
    EXPECT_NE(help.find(value), std::string::npos) << value;
}

TEST(Cli, Version) {
  const auto r = run("--version");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("0.1.0"), std::string::npos);
}
