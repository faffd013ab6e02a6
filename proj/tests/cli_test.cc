// Copyright 2026 The Balajoin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Drives the command-line binary end to end and checks exit codes.

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("balajoin_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    std::ofstream(dir_ / "exp.conf") << "workload.s_count = 3000\n"
                                        "workload.universe = 300\n"
                                        "run.strategies = all\n"
                                        "run.detector = online\n";
  }
  void TearDown() override { fs::remove_all(dir_); }

  int cli(const std::string& args) {
    const std::string cmd = std::string(BALAJOIN_CLI) + " " + args + " > " +
                            (dir_ / "stdout.txt").string() + " 2> " +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(cli(""), 1);
  EXPECT_EQ(cli("run"), 1);
  EXPECT_EQ(cli("sweep --config " + path("exp.conf") + " --axis latency --values 1"), 1);
  std::ofstream(dir_ / "bad.conf") << "cluster.n = 1\n";
  EXPECT_EQ(cli("run --config " + path("bad.conf")), 1);
}

TEST_F(CliTest, GenIsDeterministic) {
  ASSERT_EQ(cli("gen --config " + path("exp.conf") + " --out " + path("a.csv")), 0);
  ASSERT_EQ(cli("gen --config " + path("exp.conf") + " --out " + path("b.csv")), 0);
  EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
}

TEST_F(CliTest, RunThenVerify) {
  ASSERT_EQ(cli("gen --config " + path("exp.conf") + " --out " + path("w.csv")), 0);
  std::ofstream(dir_ / "exp.conf", std::ios::app) << "workload.csv = " << path("w.csv") << "\n";
  ASSERT_EQ(cli("run --config " + path("exp.conf") + " --out " + path("r.json")), 0);
  const std::string rows = slurp(dir_ / "stdout.txt");
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 6);
  EXPECT_EQ(cli("verify " + path("r.json") + " " + path("w.csv")), 0);
  EXPECT_EQ(slurp(dir_ / "stdout.txt").find("FAIL"), std::string::npos);

  std::ofstream(dir_ / "other.conf") << "workload.s_count = 3000\nworkload.seed = 8\n";
  ASSERT_EQ(cli("gen --config " + path("other.conf") + " --out " + path("other.csv")), 0);
  EXPECT_EQ(cli("verify " + path("r.json") + " " + path("other.csv")), 2);
  EXPECT_NE(slurp(dir_ / "stdout.txt").find("FAIL result_count"), std::string::npos);

  EXPECT_EQ(cli("report " + path("r.json") + " --out " + path("summary.csv")), 0);
  EXPECT_EQ(slurp(dir_ / "summary.csv").substr(0, 9), "strategy,");
}

TEST_F(CliTest, SweepOutputIsIndependentOfParallelism) {
  const std::string base = "sweep --config " + path("exp.conf") + " --axis zipf --values 0..1.5:0.5 --seeds 1,2";
  ASSERT_EQ(cli(base + " --parallel 1 --out " + path("s1.csv")), 0);
  ASSERT_EQ(cli(base + " --parallel 3 --out " + path("s3.csv")), 0);
  const std::string one = slurp(dir_ / "s1.csv");
  EXPECT_EQ(one, slurp(dir_ / "s3.csv"));
  EXPECT_EQ(std::count(one.begin(), one.end(), '\n'), 1 + 4 * 5 * 2);
}

}  // namespace
