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


#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "balajoin/datagen.h"
#include "balajoin/metrics.h"
#include "balajoin/simulator.h"

namespace balajoin {

// Everything one `run` or `sweep` invocation needs. Loaded from flat
// key=value text with section prefixes, e.g.
//
//   workload.z = 1.25
//   cluster.n = 3
//   run.strategies = bppr,prpd
//
// Blank lines and lines starting with '#' are ignored.
struct ExperimentConfig {
  WorkloadConfig workload;
  // When set, the workload is read from this CSV instead of generated.
  std::optional<std::filesystem::path> workload_csv;
  ClusterSpec cluster;
  CostModel cost;
  std::vector<StrategyKind> strategies{kAllStrategies.begin(), kAllStrategies.end()};
  DetectorMode mode = DetectorMode::kOracle;
  double epsilon = 0.2;
  BalanceScope scope = BalanceScope::kAllNodes;
  DetectorConfig detector;
  std::vector<uint64_t> seeds{1};
  std::string out;
  bool record_trace = false;

  // Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

// Applies one setting. Throws std::invalid_argument for unknown keys or
// malformed values.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

// Accepts "1,2,3", "1..20" or a mix of both.
std::vector<uint64_t> parse_seed_list(std::string_view text);
// Accepts "0.1,0.2", "10..300:50" (inclusive range with step) or a mix.
std::vector<double> parse_value_list(std::string_view text);

// Workload for one seed: generated from cfg.workload (with the seed and the
// cluster size substituted) or read from cfg.workload_csv.
Workload make_workload(const ExperimentConfig& cfg, uint64_t seed);

SimConfig make_sim_config(const ExperimentConfig& cfg, StrategyKind strategy, uint64_t seed);

// Runs every (seed, strategy) pair; reports are ordered seed-major.
std::vector<SimReport> run_experiment(const ExperimentConfig& cfg);

// Sets the axis parameter of `cfg` to `value`.
void apply_axis(ExperimentConfig& cfg, SweepAxis axis, double value);

// Runs run_experiment at every axis value using up to `parallel` worker
// threads. The result is sorted and independent of `parallel`.
SweepResult run_sweep(const ExperimentConfig& cfg, SweepAxis axis,
                      const std::vector<double>& values, unsigned parallel = 1);

}  // namespace balajoin
