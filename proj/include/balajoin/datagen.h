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
#include <string>
#include <unordered_map>
#include <vector>

#include "balajoin/types.h"

namespace balajoin {

enum class Placement : uint8_t { kUniform, kConcentratedSkew };
enum class Arrival : uint8_t { kInterleaved, kClusteredByKey };

struct WorkloadConfig {
  uint32_t n_nodes = 3;
  uint64_t s_count = 100000;
  double rs_ratio = 2.0 / 3.0;
  uint64_t universe = 10000;
  double zipf_z = 1.25;
  Placement placement = Placement::kUniform;
  // Target node for Placement::kConcentratedSkew.
  NodeId skew_node = 0;
  Arrival arrival = Arrival::kInterleaved;
  uint64_t seed = 1;
  // Relative S-frequency at or above which ConcentratedSkew pins a key.
  double theta_gen = 0.001;

  uint64_t r_count() const;
  // Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

// Per-node ordered tuple streams for both sides plus exact probe statistics.
struct Workload {
  uint32_t n_nodes = 0;
  std::vector<std::vector<Tuple>> build_shards;
  std::vector<std::vector<Tuple>> probe_shards;
  std::unordered_map<Key, uint64_t> true_counts;
  // False for inputs that can only be consumed once (two-pass detection is
  // then impossible).
  bool replayable = true;

  uint64_t build_size() const;
  uint64_t probe_size() const;

  friend bool operator==(const Workload&, const Workload&) = default;
};

// Draws `count` i.i.d. keys with P(rank r) proportional to 1/r^z over ranks
// 1..universe by inverse CDF; rank r is emitted as key r-1.
std::vector<Key> gen_zipf_keys(uint64_t count, uint64_t universe, double z, uint64_t seed);

Workload build_workload(const WorkloadConfig& cfg);

// Exact key -> frequency map of the probe side.
std::unordered_map<Key, uint64_t> count_probe_keys(const Workload& w);

// CSV with header `side,node,seq,key`; builds first, then probes, each in
// shard order.
void write_workload_csv(const Workload& w, std::ostream& out);
void write_workload_csv(const Workload& w, const std::filesystem::path& path);
Workload read_workload_csv(std::istream& in);
Workload read_workload_csv(const std::filesystem::path& path);

std::string to_string(Placement p);
std::string to_string(Arrival a);

}  // namespace balajoin
