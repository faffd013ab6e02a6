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
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "balajoin/bppr.h"
#include "balajoin/datagen.h"
#include "balajoin/detector.h"
#include "balajoin/strategies.h"
#include "balajoin/types.h"

namespace balajoin {

enum class DetectorMode : uint8_t {
  // Skewed iff the exact global probe frequency reaches theta.
  kOracle,
  // Each data node classifies with its own streaming sketch.
  kOnline,
  // Sketch every shard, merge at the response node, then route.
  kTwoPass,
};

std::string_view to_string(DetectorMode m);
DetectorMode parse_detector_mode(std::string_view name);

struct ClusterSpec {
  uint32_t n = 3;
  NodeId response_node = 0;

  void validate() const;
};

struct CostModel {
  // Per node, each direction.
  double bandwidth_mbps = 100.0;
  uint32_t tuple_wire_bytes = 16;
  uint32_t pull_request_bytes = 24;
  uint32_t count_bytes = 8;
  uint32_t sketch_record_bytes = 20;
  // Seconds per tuple inserted into / probed against a local hash table.
  double c_build = 1e-7;
  double c_probe = 1e-7;
  // Seconds per emitted join result.
  double c_result = 2e-9;
  // Seconds per sketch update.
  double detect_cost = 2e-8;

  void validate() const;
};

struct NodeLedger {
  uint64_t bytes_sent = 0;
  uint64_t bytes_received = 0;
  uint64_t build_inserted = 0;
  uint64_t probe_processed = 0;
  uint64_t detector_observes = 0;
  uint64_t skewed_received = 0;
  uint64_t result_count = 0;

  friend bool operator==(const NodeLedger&, const NodeLedger&) = default;
};

// Order-independent fingerprint of a join result multiset: the pair count
// plus two bilinear hashes sum(h(build) * g(probe)) mod 2^64.
struct ResultDigest {
  uint64_t count = 0;
  uint64_t fp_a = 0;
  uint64_t fp_b = 0;

  friend bool operator==(const ResultDigest&, const ResultDigest&) = default;
};

uint64_t build_sig_a(RowId r);
uint64_t build_sig_b(RowId r);
uint64_t probe_sig_a(RowId r);
uint64_t probe_sig_b(RowId r);

// One skewed-path delivery of a probe tuple.
struct RouteTraceEntry {
  RowId rowid;
  NodeId origin = 0;
  NodeId target = 0;
  // Size of the origin's candidate set after the decision (BPPR), else 0.
  uint32_t u_size = 0;

  friend bool operator==(const RouteTraceEntry&, const RouteTraceEntry&) = default;
};

enum class DeliveryKind : uint8_t { kTuple, kPullRequest, kPulledTuple, kForwardedTuple,
                                    kSketch, kSkewList, kCount };

struct DeliveryEvent {
  NodeId src = 0;
  NodeId dst = 0;
  uint32_t bytes = 0;
  DeliveryKind kind = DeliveryKind::kTuple;

  friend bool operator==(const DeliveryEvent&, const DeliveryEvent&) = default;
};

struct SimTrace {
  std::vector<RouteTraceEntry> routes;
  std::vector<DeliveryEvent> deliveries;

  friend bool operator==(const SimTrace&, const SimTrace&) = default;
};

// Labels copied into reports so summary rows are self-describing.
struct RunLabels {
  double zipf_z = 0.0;
  double rs_ratio = 0.0;
  uint64_t seed = 0;
};

struct SimConfig {
  StrategyKind strategy = StrategyKind::kBPPR;
  DetectorMode mode = DetectorMode::kOracle;
  ClusterSpec cluster;
  CostModel cost;
  DetectorConfig detector;
  double epsilon = 0.2;
  BalanceScope scope = BalanceScope::kAllNodes;
  bool record_trace = false;
  // Materialize every result pair (small inputs only).
  bool collect_pairs = false;
  RunLabels labels;
};

struct SimReport {
  StrategyKind strategy = StrategyKind::kGraHJ;
  DetectorMode mode = DetectorMode::kOracle;
  uint32_t n = 0;
  double bandwidth_mbps = 0.0;
  double epsilon = 0.0;
  double theta = 0.0;
  RunLabels labels;

  std::vector<NodeLedger> ledgers;
  uint64_t total_result_count = 0;
  uint64_t total_network_bytes = 0;
  double elapsed_seconds = 0.0;
  double global_balance_B = 0.0;

  // TwoPass components; zero otherwise.
  double detect_phase_seconds = 0.0;
  double merge_seconds = 0.0;

  // BPPR: |U| -> number of (data node, key) candidate sets.
  std::map<size_t, uint64_t> u_histogram;
  // Largest local balance factor over data nodes at the end of the run.
  double max_local_balance = 0.0;
  uint64_t route_ops = 0;
  uint64_t pull_requests = 0;
  uint64_t pulled_tuples = 0;
  uint64_t forwarded_tuples = 0;
  uint64_t skew_keys = 0;

  ResultDigest digest;
  std::optional<SimTrace> trace;
  // Sorted; filled only with SimConfig::collect_pairs.
  std::vector<ResultPair> pairs;
};

// Executes one distributed join. Throws std::invalid_argument for bad
// inputs, e.g. two-pass detection over a workload that cannot be replayed.
SimReport run(const Workload& workload, const SimConfig& cfg);
SimReport run(const Workload& workload, std::string_view strategy_name,
              const ClusterSpec& cluster, const CostModel& cost, DetectorMode mode,
              SimConfig options = {});

// Exact inner equi-join; each build duplicate matches every probe once.
std::vector<ResultPair> local_hash_join(std::span<const Tuple> build, std::span<const Tuple> probe);

struct OracleJoin {
  // Sorted.
  std::vector<ResultPair> pairs;
  uint64_t size = 0;
};

// Single-node ground truth over all shards combined.
OracleJoin oracle_join(const Workload& w);
// Size from per-key frequency products, without materializing pairs.
uint64_t oracle_join_size(const Workload& w);
ResultDigest oracle_digest(const Workload& w);

// Writes `rowid_node,rowid_seq,origin,target,u_size`.
void write_route_trace_csv(const SimTrace& trace, std::ostream& out);

}  // namespace balajoin
