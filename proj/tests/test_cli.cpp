#include "hokalman/cli.hpp"
#include "hokalman/experiments.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "hokalman");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = hokalman::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t data_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::size_t rows = 0;
  bool header = true;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    ++rows;
  }
  return rows;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("hokalman_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenerateY5) {
  const auto r = run({"generate", "y5", "--count", "20", "--out", path("y5.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_rows(slurp(path("y5.csv"))), 20u);
  EXPECT_TRUE(fs::exists(path("y5.csv.provenance")));
}

TEST_F(Cli, GenerateNonhomogeneousThreeColumns) {
  const auto r = run({"generate", "nonhomogeneous", "--count", "25", "--out", path("nh.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(path("nh.csv"));
  EXPECT_EQ(csv.rfind("n,y,u\n", 0), 0u);
  EXPECT_EQ(data_rows(csv), 25u);
}

TEST_F(Cli, GenerateToStdout) {
  const auto r = run({"generate", "mode_sum", "--mode", "1,0.5", "--mode", "2,0.1,1,sin", "--count", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_rows(r.out), 5u);
}

TEST_F(Cli, UnknownFamilyExitsTwo) {
  const auto r = run({"generate", "bogus", "--out", path("x.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bogus"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("x.csv")));
}

TEST_F(Cli, BadParametersFail) {
  EXPECT_NE(run({"generate", "mode_sum", "--mode", "1"}).code, 0);
  EXPECT_NE(run({"generate", "y5", "--count", "0"}).code, 0);
  EXPECT_NE(run({"generate", "high_order", "--f0", "cosh"}).code, 0);
  EXPECT_NE(run({"--policy", "fuzzy", "list"}).code, 0);
  EXPECT_NE(run({"--policy", "absolute", "rank", path("missing.csv")}).code, 0);
}

TEST_F(Cli, RankY5IsOrderFive) {
  ASSERT_EQ(run({"generate", "y5", "--count", "40", "--out", path("y5.csv")}).code, 0);
  const auto r = run({"rank", path("y5.csv"), "--n", "8", "--out", path("sweep.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "order=5\n");
  const std::string csv = slurp(path("sweep.csv"));
  EXPECT_NE(csv.find("n,rank,gap,condition\n"), std::string::npos);
  EXPECT_NE(csv.find("# policy: relative(default)"), std::string::npos);
  EXPECT_EQ(data_rows(csv), 7u);
}

TEST_F(Cli, RankTooFewSamplesNamesNine) {
  {
    std::ofstream f(path("short.csv"));
    f << "n,value\n0,1\n1,2\n2,3\n";
  }
  const auto r = run({"rank", path("short.csv"), "--n", "5", "--out", path("out.csv")});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("9"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("out.csv")));
}

TEST_F(Cli, RankConstantIsOrderOne) {
  {
    std::ofstream f(path("c.csv"));
    f << "n,value\n";
    for (int i = 0; i < 15; ++i) f << i << ",2.5\n";
  }
  const auto r = run({"rank", path("c.csv"), "--n", "8", "--out", path("s.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "order=1\n");
}

TEST_F(Cli, EstimateMethods) {
  ASSERT_EQ(run({"generate", "y5", "--count", "100", "--out", path("y5.csv")}).code, 0);
  const auto cov = run({"estimate", path("y5.csv"), "--method", "covdet", "--m-range", "2:8", "--out", path("cov.csv")});
  ASSERT_EQ(cov.code, 0) << cov.err;
  EXPECT_EQ(data_rows(slurp(path("cov.csv"))), 7u);

  const auto aic = run({"estimate", path("y5.csv"), "--method", "aic", "--p-max", "10", "--out", path("aic.csv")});
  ASSERT_EQ(aic.code, 0) << aic.err;
  EXPECT_EQ(aic.out.rfind("order=", 0), 0u);
  EXPECT_EQ(data_rows(slurp(path("aic.csv"))), 10u);

  const auto hk = run({"estimate", path("y5.csv"), "--method", "hokalman", "--n", "8", "--out", path("hk.csv")});
  const auto rk = run({"rank", path("y5.csv"), "--n", "8", "--out", path("rk.csv")});
  EXPECT_EQ(hk.out, rk.out);
  EXPECT_EQ(hk.out, "order=5\n");

  EXPECT_EQ(run({"estimate", path("y5.csv"), "--method", "bic"}).code, 2);
}

TEST_F(Cli, ExperimentWritesFile) {
  const auto r = run({"experiment", "fig2_first_order", "--out", path("f2.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "fig2_first_order,rank=1,ok\n");
  EXPECT_TRUE(fs::exists(path("f2.csv")));
}

TEST_F(Cli, ExperimentOverrideEchoed) {
  const auto r = run({"experiment", "fig1_table1_y5", "--p-max", "12", "--out", path("t1.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(path("t1.csv")).find("# param p_max=12\n"), std::string::npos);
}

TEST_F(Cli, ExperimentGlobalFlagsEitherSide) {
  const auto a = run({"--seed", "5", "experiment", "offset_effect", "--trials", "3", "--out", path("a.csv")});
  const auto b = run({"experiment", "offset_effect", "--trials", "3", "--seed", "5", "--out", path("b.csv")});
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_NE(slurp(path("a.csv")).find("# seed: 5\n"), std::string::npos);
}

TEST_F(Cli, UnknownExperimentListsRegistry) {
  const auto r = run({"experiment", "bogus"});
  EXPECT_NE(r.code, 0);
  for (const auto& info : hokalman::list_experiments()) EXPECT_NE(r.err.find(info.name), std::string::npos);
}

TEST_F(Cli, UnknownOverrideRejected) {
  EXPECT_EQ(run({"experiment", "fig2_first_order", "--bogus", "1", "--out", path("x.csv")}).code, 2);
  EXPECT_FALSE(fs::exists(path("x.csv")));
}

TEST_F(Cli, UnwritablePathFails) {
  EXPECT_NE(run({"experiment", "fig2_first_order", "--out", "/nonexistent/dir/x.csv"}).code, 0);
  EXPECT_NE(run({"generate", "y5", "--out", "/nonexistent/dir/x.csv"}).code, 0);
}

TEST_F(Cli, HelpListsCommandsAndExperiments) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* cmd : {"generate", "rank", "estimate", "experiment", "list"})
    EXPECT_NE(r.out.find(cmd), std::string::npos) << cmd;
  for (const auto& info : hokalman::list_experiments()) EXPECT_NE(r.out.find(info.name), std::string::npos);
}

TEST_F(Cli, ListShowsDefaults) {
  const auto r = run({"list"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("fig2_first_order"), std::string::npos);
  EXPECT_NE(r.out.find("N0=50"), std::string::npos);
}

TEST_F(Cli, IdenticalInvocationsIdenticalOutput) {
  const auto a = run({"--seed", "3", "generate", "y5", "--count", "30", "--noise-amplitude", "1e-3"});
  const auto b = run({"--seed", "3", "generate", "y5", "--count", "30", "--noise-amplitude", "1e-3"});
  EXPECT_EQ(a.out, b.out);
  const auto c = run({"--seed", "4", "generate", "y5", "--count", "30", "--noise-amplitude", "1e-3"});
  EXPECT_NE(a.out, c.out);
}

TEST_F(Cli, MissingSubcommandIsUsageError) { EXPECT_EQ(run({}).code, 2); }
