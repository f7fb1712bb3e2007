#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "beltrami/report.hpp"

using namespace beltrami;
using nlohmann::json;

TEST(Report, ConfigRoundTrip) {
  RunConfig c;
  c.command = "optimality-scan";
  c.manifold = "rp3";
  c.seed = 99;
  c.t_grid = {-0.1, 0.0, 0.1};
  c.fd_quadrature = {30, 50, RadialVariable::sin_squared};
  EXPECT_EQ(RunConfig::from_json(c.to_json()), c);
  // Missing keys keep defaults.
  const RunConfig d = RunConfig::from_json(R"({"command": "bounds"})");
  EXPECT_EQ(d.seed, RunConfig{}.seed);
}

TEST(Report, ConfigErrors) {
  EXPECT_THROW(RunConfig::from_json(R"({"command": "bounds", "sede": 1})"), ConfigError);
  EXPECT_THROW(RunConfig::from_json("{not json"), ConfigError);
  RunConfig c;
  c.command = "nope";
  EXPECT_THROW(c.validate(), ConfigError);
  c.command = "optimality-scan";
  c.manifold = "s2";
  EXPECT_THROW(c.validate(), ConfigError);
  std::ostringstream out, err;
  EXPECT_EQ(run(c, out, err), 2);
}

TEST(Report, BoundsRunIsDeterministicApartFromTiming) {
  RunConfig c;
  c.command = "bounds";
  auto strip = [](const std::string& s) {
    json j = json::parse(s);
    j.erase("timing");
    return j.dump();
  };
  const Report a = execute(c), b = execute(c);
  EXPECT_TRUE(a.all_pass());
  EXPECT_EQ(strip(render_json(a)), strip(render_json(b)));
  const json j = json::parse(render_json(a));
  EXPECT_EQ(j.at("checks").size(), a.checks.size());
  EXPECT_TRUE(j.at("timing").contains("timestamp"));
  for (const auto& ch : j.at("checks")) EXPECT_FALSE(ch.contains("wall_time"));
}

TEST(Report, CsvHeaderFollowsRecordFields) {
  RunConfig c;
  c.command = "annulus";
  const Report r = execute(c);
  const std::string csv = render_csv(r);
  const std::string header = csv.substr(0, csv.find('\n'));
  std::string expected;
  for (const auto& col : check_record_columns()) expected += (expected.empty() ? "" : ",") + col;
  EXPECT_EQ(header, expected);
  EXPECT_EQ(check_record_columns().front(), "id");
  EXPECT_EQ(check_record_columns().back(), "wall_time");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(r.checks.size()) + 1);
}

TEST(Report, ExactValuesUsePiNotation) {
  RunConfig c;
  c.command = "verify-identities";
  const Report r = execute(c);
  EXPECT_TRUE(r.all_pass());
  bool found = false;
  for (const auto& ch : r.checks)
    if (ch.id == "hopf-helicity") {
      EXPECT_EQ(ch.expected_exact, "1/1 * pi^2");
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(Report, AtomicWriteReplacesFile) {
  const auto dir = std::filesystem::temp_directory_path() / "beltrami_report_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "r.json").string();
  write_atomically(path, "first");
  write_atomically(path, "second");
  std::ifstream f(path);
  std::string s((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  EXPECT_EQ(s, "second");
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove_all(dir);
}

TEST(Report, RunWritesFileAndReturnsStatus) {
  const auto dir = std::filesystem::temp_directory_path() / "beltrami_run_test";
  std::filesystem::create_directories(dir);
  RunConfig c;
  c.command = "bounds";
  c.format = "csv";
  c.out = (dir / "b.csv").string();
  std::ostringstream out, err;
  EXPECT_EQ(run(c, out, err), 0);
  EXPECT_TRUE(std::filesystem::exists(c.out));
  std::filesystem::remove_all(dir);
}
