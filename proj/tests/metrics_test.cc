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


#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "balajoin/datagen.h"
#include "balajoin/metrics.h"
#include "balajoin/simulator.h"

namespace balajoin {
namespace {

TEST(Throughput, ResultsPerSecond) {
  SimReport r;
  r.total_result_count = 1000;
  r.elapsed_seconds = 0.5;
  EXPECT_DOUBLE_EQ(throughput(r), 2000.0);
  r.elapsed_seconds = 0.0;
  EXPECT_THROW(throughput(r), std::invalid_argument);
}

TEST(Throughput, DoublesWithBandwidthWhenComputeIsFree) {
  WorkloadConfig c;
  c.s_count = 5000;
  const Workload w = build_workload(c);
  SimConfig sim;
  sim.strategy = StrategyKind::kGraHJ;
  sim.cost.c_build = sim.cost.c_probe = sim.cost.detect_cost = 1e-30;
  sim.cost.c_result = 0.0;
  const double slow = throughput(run(w, sim));
  sim.cost.bandwidth_mbps *= 2;
  EXPECT_NEAR(throughput(run(w, sim)) / slow, 2.0, 1e-9);
}

TEST(GlobalBalance, FromSkewedReceived) {
  SimReport r;
  r.ledgers.resize(3);
  r.ledgers[0].skewed_received = 4;
  EXPECT_DOUBLE_EQ(global_balance(r), 1.0);
  r.ledgers[0].skewed_received = 0;
  EXPECT_DOUBLE_EQ(global_balance(r), 0.0);
}

TEST(GlobalBalance, NoSkewWithoutZipf) {
  WorkloadConfig c;
  c.zipf_z = 0.0;
  c.s_count = 5000;
  SimConfig sim;
  const SimReport r = run(build_workload(c), sim);
  EXPECT_EQ(global_balance(r), 0.0);
  EXPECT_EQ(r.global_balance_B, 0.0);
}

class VerifyTest : public ::testing::Test {
 protected:
  void SetUp() override {
    WorkloadConfig c;
    c.s_count = 6000;
    c.universe = 500;
    w_ = build_workload(c);
    SimConfig sim;
    sim.record_trace = true;
    sim.mode = DetectorMode::kOnline;
    report_ = run(w_, sim);
  }

  static bool passed(const std::vector<Verdict>& v, const std::string& check) {
    for (const Verdict& x : v) {
      if (x.check == check) return x.pass;
    }
    ADD_FAILURE() << "missing check " << check;
    return false;
  }

  Workload w_;
  SimReport report_;
};

TEST_F(VerifyTest, UntamperedReportPasses) {
  const auto v = verify_report(report_, w_);
  EXPECT_TRUE(all_pass(v));
  EXPECT_GE(v.size(), 7u);
}

TEST_F(VerifyTest, PerturbedByteCounterFails) {
  report_.ledgers[1].bytes_sent += 16;
  const auto v = verify_report(report_, w_);
  EXPECT_FALSE(passed(v, "byte_conservation"));
  EXPECT_FALSE(passed(v, "byte_recount"));
  EXPECT_TRUE(passed(v, "result_count"));
}

TEST_F(VerifyTest, PerturbedBalanceFails) {
  report_.global_balance_B += 0.01;
  EXPECT_FALSE(passed(verify_report(report_, w_), "balance_recompute"));
}

TEST_F(VerifyTest, WrongWorkloadFailsResultChecks) {
  WorkloadConfig other;
  other.s_count = 6000;
  other.universe = 500;
  other.seed = 2;
  const auto v = verify_report(report_, build_workload(other));
  EXPECT_FALSE(passed(v, "result_count"));
  EXPECT_FALSE(passed(v, "result_multiset"));
}

TEST_F(VerifyTest, MissingTraceThrows) {
  report_.trace.reset();
  EXPECT_THROW(verify_report(report_, w_), std::invalid_argument);
}

TEST(VerifyReport, ResultEqualityAcrossSeedsAndStrategies) {
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    WorkloadConfig c;
    c.s_count = 2000;
    c.universe = 300;
    c.seed = seed;
    const Workload w = build_workload(c);
    for (StrategyKind s : kAllStrategies) {
      SimConfig sim;
      sim.strategy = s;
      sim.record_trace = true;
      sim.mode = seed % 2 ? DetectorMode::kOracle : DetectorMode::kOnline;
      sim.detector.warmup = 100;
      const auto v = verify_report(run(w, sim), w);
      for (const Verdict& x : v) ASSERT_TRUE(x.pass) << x.check << " " << x.detail;
    }
  }
}

TEST(Summary, HeaderAndRowShape) {
  EXPECT_EQ(summary_header(),
            "strategy,n,bandwidth,z,ratio,epsilon,theta,seed,result_count,elapsed_s,throughput,"
            "total_bytes,B_global");
  SimReport r;
  r.strategy = StrategyKind::kPnR;
  r.n = 3;
  r.bandwidth_mbps = 100;
  r.labels = RunLabels{1.25, 0.5, 7};
  r.epsilon = 0.2;
  r.theta = 0.001;
  r.total_result_count = 10;
  r.elapsed_seconds = 2;
  r.total_network_bytes = 64;
  r.global_balance_B = 0.5;
  EXPECT_EQ(summary_row(r), "pnr,3,100,1.25,0.5,0.2,0.001,7,10,2,5,64,0.500000");
}

TEST(Sweep, AxisNamesAndCsv) {
  for (auto a : {SweepAxis::kBandwidth, SweepAxis::kEpsilon, SweepAxis::kZipf,
                 SweepAxis::kRsRatio, SweepAxis::kNodes}) {
    EXPECT_EQ(parse_sweep_axis(to_string(a)), a);
  }
  EXPECT_THROW(parse_sweep_axis("latency"), std::invalid_argument);

  SweepResult s;
  s.axis = SweepAxis::kEpsilon;
  SimReport b, g;
  b.strategy = StrategyKind::kBPPR;
  g.strategy = StrategyKind::kGraHJ;
  b.elapsed_seconds = g.elapsed_seconds = 1;
  s.points = {{0.3, b}, {0.1, b}, {0.3, g}};
  s.sort();
  std::ostringstream out;
  write_sweep_csv(s, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "axis,value," + summary_header());
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 17), "epsilon,0.1,bppr,");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 18), "epsilon,0.3,grahj,");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 17), "epsilon,0.3,bppr,");
}

}  // namespace
}  // namespace balajoin
