#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>
#include <sstream>

#include "route_forge/cli.hpp"
#include "route_forge/instance_io.hpp"

using namespace route_forge;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "route_forge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("route_forge_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string p(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(cli_run({}).code, cli::kExitUsage);
  EXPECT_EQ(cli_run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(cli_run({"solve", "--instance", p("missing.json")}).code, cli::kExitUsage);
  EXPECT_EQ(cli_run({"generate", "--n", "10"}).code, cli::kExitUsage);  // --out required
  const auto bad = cli_run({"solve", "--instance", p("x"), "--strategy", "kmeans"});
  EXPECT_EQ(bad.code, cli::kExitUsage);
  EXPECT_FALSE(bad.err.empty());
  EXPECT_EQ(cli_run({"--help"}).code, cli::kExitOk);
}

TEST_F(Cli, GenerateSolveValidate) {
  ASSERT_EQ(cli_run({"generate", "--n", "120", "--seed", "4", "--out", p("i.json")}).code, 0);
  const auto solved = cli_run({"solve", "--instance", p("i.json"), "--strategy", "recursive-dbscan",
                               "--time-limit-ms", "5000", "--out", p("plan.json"), "--geojson",
                               p("plan.geojson")});
  ASSERT_EQ(solved.code, cli::kExitOk) << solved.err;
  EXPECT_TRUE(fs::exists(p("plan.json")));
  EXPECT_TRUE(fs::exists(p("plan.geojson")));
  EXPECT_NE(solved.out.find("status=OK"), std::string::npos);

  const auto ok = cli_run({"validate", "--instance", p("i.json"), "--plan", p("plan.json")});
  EXPECT_EQ(ok.code, cli::kExitOk) << ok.out;

  // Duplicate one stop into another route.
  auto plan = io::read_json(p("plan.json"));
  ASSERT_GE(plan["routes"].size(), 2u);
  plan["routes"][1]["stops"].push_back(plan["routes"][0]["stops"][0]);
  io::write_json(p("tampered.json"), plan);
  const auto bad = cli_run({"validate", "--instance", p("i.json"), "--plan", p("tampered.json")});
  EXPECT_EQ(bad.code, cli::kExitFailure);
  EXPECT_NE(bad.out.find("MULTIPLY_VISITED"), std::string::npos);
}

TEST_F(Cli, SolveReportsNoSolution) {
  ASSERT_EQ(cli_run({"generate", "--n", "200", "--fleet", "2", "--out", p("i.json")}).code, 0);
  const auto r = cli_run({"solve", "--instance", p("i.json"), "--strategy", "monolithic"});
  EXPECT_EQ(r.code, cli::kExitFailure);
  EXPECT_NE(r.err.find("NO_SOLUTION"), std::string::npos);
}

TEST_F(Cli, CapacityOverride) {
  ASSERT_EQ(cli_run({"generate", "--n", "50", "--out", p("i.json")}).code, 0);
  EXPECT_EQ(cli_run({"solve", "--instance", p("i.json"), "--capacity", "1"}).code, cli::kExitUsage);
  EXPECT_EQ(cli_run({"solve", "--instance", p("i.json"), "--capacity", "60", "--strategy", "dbscan"}).code,
            cli::kExitOk);
}

TEST_F(Cli, ClusterDump) {
  ASSERT_EQ(cli_run({"generate", "--n", "700", "--out", p("i.json")}).code, 0);
  const auto r = cli_run({"cluster", "--instance", p("i.json"), "--max-cluster-size", "300",
                          "--min-cluster-size", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  std::size_t total = 0;
  for (const auto& c : j) {
    EXPECT_LE(c["members"].size(), 300u);
    total += c["members"].size();
  }
  EXPECT_EQ(total, 700u);
}

TEST_F(Cli, BenchWritesGrid) {
  const auto r = cli_run({"bench", "--sizes", "100,150", "--reps", "3", "--out", p("b.csv"),
                          "--archive-dir", p("plans"), "--verify"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(p("b.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
  EXPECT_EQ(std::distance(fs::directory_iterator(p("plans")), fs::directory_iterator{}), 18);
  EXPECT_NE(r.out.find("vs monolithic"), std::string::npos);
}
