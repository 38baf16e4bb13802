#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "dofnet/scheme.hpp"
#include "support/canned.hpp"

namespace dofnet {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dofnet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    ::unsetenv(cli::kSeedEnv);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  fs::path dir_;
};

TEST_F(Cli, SimulateBottleneckMatchesOuterBound) {
  const auto r = run({"simulate", "--family", "bottleneck", "--m", "3", "--scheme", "fig3", "--trials", "100",
                      "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("seed: 7\n"), std::string::npos);
  EXPECT_NE(r.out.find("decodable: d1 100/100, d2 100/100"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("achieved (2/3,1); matches outer bound: yes"), std::string::npos) << r.out;
}

TEST_F(Cli, SimulateIsByteStable) {
  const std::vector<std::string> args{"simulate", "--family", "double-bottleneck", "--m", "2",
                                      "--scheme", "double-bottleneck", "--trials", "15", "--seed", "3"};
  EXPECT_EQ(run(args).out, run(args).out);
  auto json = args;
  json.insert(json.end(), {"--format", "json"});
  const auto a = run(json);
  EXPECT_EQ(a.out, run(json).out);
  EXPECT_NE(a.out.find("\"matches_outer_bound\": true"), std::string::npos) << a.out;
  EXPECT_NE(a.out.find("\"outer_bound_max_sum\": \"4/3\""), std::string::npos);
}

TEST_F(Cli, SeedFromEnvironment) {
  ::setenv(cli::kSeedEnv, "31", 1);
  const auto r = run({"simulate", "--family", "bottleneck", "--m", "2", "--scheme", "bottleneck", "--trials", "2"});
  ::unsetenv(cli::kSeedEnv);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("seed: 31\n", 0), 0u) << r.out;
  const auto flag = run({"simulate", "--family", "bottleneck", "--m", "2", "--scheme", "bottleneck", "--trials",
                         "2", "--seed", "31"});
  EXPECT_EQ(r.out, flag.out);
}

TEST_F(Cli, CsvGoesToStdoutAndSeedToStderr) {
  const auto r = run({"simulate", "--family", "no-bottleneck", "--scheme", "no-bottleneck", "--trials", "4",
                      "--seed", "9", "--format", "csv", "--mode", "noisy", "--power", "1000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.err, "seed: 9\n");
  EXPECT_EQ(r.out.rfind("trial,seed,d1_decodable,", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
}

TEST_F(Cli, AnalyzeAndRegion) {
  auto r = run({"analyze", "--family", "no-bottleneck"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "bottlenecks: none; omniscient: none\n");

  r = run({"analyze", "--family", "bottleneck", "--m", "3"});
  EXPECT_EQ(r.out, "bottlenecks: w (d1, m=3, witness {v2, v3, v4}); omniscient: none\n");

  r = run({"region", "--family", "bottleneck", "--m", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("max_sum: 5/3 at (2/3, 1)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("in S: yes, k=6"), std::string::npos);
  EXPECT_NE(r.out.find("3*D1 + D2 <= 3"), std::string::npos);

  r = run({"analyze", "--family", "bottleneck", "--m", "6", "--budget", "3"});
  EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, GenRoundTripsThroughFiles) {
  const std::string net = path("net.json");
  ASSERT_EQ(run({"gen", "--family", "bottleneck", "--m", "4", "-o", net}).code, 0);
  const auto from_file = run({"region", net, "--format", "json"});
  const auto from_family = run({"region", "--family", "bottleneck", "--m", "4", "--format", "json"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(from_file.out, from_family.out);
  // the builtin infers m from the file
  const auto sim = run({"simulate", net, "--scheme", "bottleneck", "--trials", "5"});
  ASSERT_EQ(sim.code, 0) << sim.err;
  EXPECT_NE(sim.out.find("achieved (3/4,1)"), std::string::npos) << sim.out;
}

TEST_F(Cli, CheckScheme) {
  const std::string net = path("net.json");
  ASSERT_EQ(run({"gen", "--family", "bottleneck", "--m", "3", "-o", net}).code, 0);
  const std::string good = path("good.json");
  ASSERT_EQ(run({"scheme", "--family", "bottleneck", "--m", "3", "-o", good}).code, 0);
  auto r = run({"check-scheme", good, net});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "legal: yes\n");

  const std::string bad = write("bad.json", serialize_scheme(testing::illegal_instantaneous_gain()));
  r = run({"check-scheme", bad, net});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("legal: no (1 violation)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("node \"v2\""), std::string::npos);
  r = run({"check-scheme", bad, net, "--format", "json"});
  EXPECT_NE(r.out.find("\"legal\": false"), std::string::npos);

  // simulate refuses the illegal scheme as a validation error
  r = run({"simulate", net, "--scheme", bad, "--trials", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("illegal scheme"), std::string::npos) << r.err;
}

TEST_F(Cli, TrialFailureReportsTheSeed) {
  const std::string net = path("net.json");
  ASSERT_EQ(run({"gen", "--family", "bottleneck", "--m", "3", "-o", net}).code, 0);
  const std::string sch = write("deficient.json", serialize_scheme(testing::rank_deficient_scheme()));
  const auto r = run({"simulate", net, "--scheme", sch, "--trials", "3", "--seed", "5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("replay with trial seed"), std::string::npos) << r.err;
}

TEST_F(Cli, ValidationFailuresExitOne) {
  EXPECT_EQ(run({"region", path("missing.json")}).code, 1);
  const std::string junk = write("junk.json", "{\"layers\": 3}");
  const auto r = run({"analyze", junk});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("schema violation"), std::string::npos) << r.err;
  EXPECT_EQ(run({"simulate", "--family", "bottleneck", "--m", "3", "--scheme", "bottleneck(2)"}).code, 1);
  EXPECT_EQ(run({"simulate", "--family", "bottleneck", "--m", "3", "--scheme", "double-bottleneck"}).code, 1);
  EXPECT_EQ(run({"simulate", "--family", "bottleneck", "--scheme", "bottleneck(x)"}).code, 1);
  EXPECT_EQ(run({"gen", "--family", "triangle"}).code, 1);
  EXPECT_EQ(run({"analyze"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"simulate", "--family", "bottleneck", "--scheme", "bottleneck", "--mode", "loud"}).code, 1);
}

TEST_F(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("simulate"), std::string::npos);
  const auto sub = run({"simulate", "--help"});
  EXPECT_EQ(sub.code, 0);
  EXPECT_NE(sub.out.find("d1_min_sv"), std::string::npos);
}

}  // namespace
}  // namespace dofnet
