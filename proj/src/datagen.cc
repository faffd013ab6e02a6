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

#include "balajoin/datagen.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "balajoin/hash.h"

namespace balajoin {

std::string_view to_string(Side side) { return side == Side::kBuild ? "build" : "probe"; }

std::string to_string(Placement p) {
  return p == Placement::kUniform ? "uniform" : "concentrated";
}

std::string to_string(Arrival a) {
  return a == Arrival::kInterleaved ? "interleaved" : "clustered";
}

uint64_t WorkloadConfig::r_count() const {
  return static_cast<uint64_t>(std::llround(rs_ratio * static_cast<double>(s_count)));
}

void WorkloadConfig::validate() const {
  if (n_nodes < 2) throw std::invalid_argument("workload: n_nodes must be >= 2");
  if (s_count < 1) throw std::invalid_argument("workload: s_count must be >= 1");
  if (universe < 1) throw std::invalid_argument("workload: universe must be >= 1");
  if (!(zipf_z >= 0.0)) throw std::invalid_argument("workload: zipf_z must be >= 0");
  if (!(rs_ratio > 0.0)) throw std::invalid_argument("workload: rs_ratio must be > 0");
  if (r_count() < 1) throw std::invalid_argument("workload: |R| rounds to zero");
  if (placement == Placement::kConcentratedSkew && skew_node >= n_nodes) {
    throw std::invalid_argument("workload: concentrated skew node out of range");
  }
}

uint64_t Workload::build_size() const {
  uint64_t total = 0;
  for (const auto& s : build_shards) total += s.size();
  return total;
}

uint64_t Workload::probe_size() const {
  uint64_t total = 0;
  for (const auto& s : probe_shards) total += s.size();
  return total;
}

std::vector<Key> gen_zipf_keys(uint64_t count, uint64_t universe, double z, uint64_t seed) {
  if (count == 0) throw std::invalid_argument("gen_zipf_keys: count must be >= 1");
  if (universe == 0) throw std::invalid_argument("gen_zipf_keys: universe must be >= 1");
  if (!(z >= 0.0)) throw std::invalid_argument("gen_zipf_keys: z must be >= 0");

  std::vector<double> cdf(universe);
  double acc = 0.0;
  for (uint64_t r = 1; r <= universe; ++r) {
    acc += std::pow(static_cast<double>(r), -z);
    cdf[r - 1] = acc;
  }

  SplitMix64 rng(seed);
  std::vector<Key> keys;
  keys.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    const double target = rng.next_double() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    if (it == cdf.end()) --it;
    keys.push_back(static_cast<Key>(it - cdf.begin()));
  }
  return keys;
}

std::unordered_map<Key, uint64_t> count_probe_keys(const Workload& w) {
  std::unordered_map<Key, uint64_t> counts;
  for (const auto& shard : w.probe_shards) {
    for (const Tuple& t : shard) ++counts[t.key];
  }
  return counts;
}

namespace {

// Assigns each key to a node and appends to per-node shards in draw order.
std::vector<std::vector<Key>> place_keys(const std::vector<Key>& keys, const WorkloadConfig& cfg,
                                         const std::unordered_map<Key, uint64_t>& probe_counts,
                                         SplitMix64& rng) {
  std::vector<std::vector<Key>> shards(cfg.n_nodes);
  const double pin_threshold = cfg.theta_gen * static_cast<double>(cfg.s_count);
  for (Key k : keys) {
    // Always draw, so both placements consume the stream identically.
    NodeId node = static_cast<NodeId>(rng.next_below(cfg.n_nodes));
    if (cfg.placement == Placement::kConcentratedSkew) {
      auto it = probe_counts.find(k);
      if (it != probe_counts.end() && static_cast<double>(it->second) >= pin_threshold) {
        node = cfg.skew_node;
      }
    }
    shards[node].push_back(k);
  }
  if (cfg.arrival == Arrival::kClusteredByKey) {
    for (auto& s : shards) std::stable_sort(s.begin(), s.end());
  }
  return shards;
}

}  // namespace

Workload build_workload(const WorkloadConfig& cfg) {
  cfg.validate();

  SplitMix64 seeder(cfg.seed);
  const uint64_t probe_seed = seeder.next();
  const uint64_t build_seed = seeder.next();
  SplitMix64 placement_rng(seeder.next());

  const auto probe_keys = gen_zipf_keys(cfg.s_count, cfg.universe, cfg.zipf_z, probe_seed);
  const auto build_keys = gen_zipf_keys(cfg.r_count(), cfg.universe, cfg.zipf_z, build_seed);

  Workload w;
  w.n_nodes = cfg.n_nodes;
  for (Key k : probe_keys) ++w.true_counts[k];

  const auto probe_by_node = place_keys(probe_keys, cfg, w.true_counts, placement_rng);
  const auto build_by_node = place_keys(build_keys, cfg, w.true_counts, placement_rng);

  w.build_shards.resize(cfg.n_nodes);
  w.probe_shards.resize(cfg.n_nodes);
  for (NodeId i = 0; i < cfg.n_nodes; ++i) {
    uint32_t seq = 0;
    w.build_shards[i].reserve(build_by_node[i].size());
    for (Key k : build_by_node[i]) w.build_shards[i].push_back({k, {i, seq++}, Side::kBuild});
    w.probe_shards[i].reserve(probe_by_node[i].size());
    for (Key k : probe_by_node[i]) w.probe_shards[i].push_back({k, {i, seq++}, Side::kProbe});
  }
  return w;
}

void write_workload_csv(const Workload& w, std::ostream& out) {
  out << "side,node,seq,key\n";
  for (const auto* shards : {&w.build_shards, &w.probe_shards}) {
    for (const auto& shard : *shards) {
      for (const Tuple& t : shard) {
        out << to_string(t.side) << ',' << t.rowid.node << ',' << t.rowid.seq << ',' << t.key
            << '\n';
      }
    }
  }
}

void write_workload_csv(const Workload& w, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  write_workload_csv(w, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Workload read_workload_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("side,node,seq,key", 0) != 0) {
    throw std::runtime_error("workload csv: missing header");
  }
  std::vector<Tuple> rows;
  NodeId max_node = 0;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string side, node, seq, key;
    if (!std::getline(ss, side, ',') || !std::getline(ss, node, ',') ||
        !std::getline(ss, seq, ',') || !std::getline(ss, key)) {
      throw std::runtime_error("workload csv: malformed line " + std::to_string(lineno));
    }
    Tuple t;
    if (side == "build") {
      t.side = Side::kBuild;
    } else if (side == "probe") {
      t.side = Side::kProbe;
    } else {
      throw std::runtime_error("workload csv: bad side on line " + std::to_string(lineno));
    }
    try {
      t.rowid.node = static_cast<NodeId>(std::stoul(node));
      t.rowid.seq = static_cast<uint32_t>(std::stoul(seq));
      t.key = std::stoull(key);
    } catch (const std::exception&) {
      throw std::runtime_error("workload csv: bad number on line " + std::to_string(lineno));
    }
    max_node = std::max(max_node, t.rowid.node);
    rows.push_back(t);
  }

  Workload w;
  w.n_nodes = std::max<NodeId>(max_node + 1, 2);
  w.build_shards.resize(w.n_nodes);
  w.probe_shards.resize(w.n_nodes);
  std::unordered_map<RowId, bool> seen;
  for (const Tuple& t : rows) {
    if (!seen.emplace(t.rowid, true).second) {
      throw std::runtime_error("workload csv: duplicate rowid");
    }
    auto& shards = t.side == Side::kBuild ? w.build_shards : w.probe_shards;
    shards[t.rowid.node].push_back(t);
  }
  w.true_counts = count_probe_keys(w);
  return w;
}

Workload read_workload_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return read_workload_csv(in);
}

}  // namespace balajoin
