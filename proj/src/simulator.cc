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

#include "balajoin/simulator.h"

#include <algorithm>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "balajoin/hash.h"

namespace balajoin {

std::string_view to_string(DetectorMode m) {
  switch (m) {
    case DetectorMode::kOracle:
      return "oracle";
    case DetectorMode::kOnline:
      return "online";
    case DetectorMode::kTwoPass:
      return "twopass";
  }
  return "unknown";
}

DetectorMode parse_detector_mode(std::string_view name) {
  for (auto m : {DetectorMode::kOracle, DetectorMode::kOnline, DetectorMode::kTwoPass}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown detector mode: " + std::string(name));
}

void ClusterSpec::validate() const {
  if (n < 2) throw std::invalid_argument("cluster: n must be >= 2");
  if (response_node >= n) throw std::invalid_argument("cluster: response node out of range");
}

void CostModel::validate() const {
  if (!(bandwidth_mbps > 0.0)) throw std::invalid_argument("cost: bandwidth must be > 0");
  if (tuple_wire_bytes == 0 || pull_request_bytes == 0 || count_bytes == 0 ||
      sketch_record_bytes == 0) {
    throw std::invalid_argument("cost: byte sizes must be > 0");
  }
  if (!(c_build > 0.0) || !(c_probe > 0.0) || !(detect_cost > 0.0) || !(c_result >= 0.0)) {
    throw std::invalid_argument("cost: per-tuple costs must be positive");
  }
}

uint64_t build_sig_a(RowId r) { return hash64(r.packed() ^ 0x6A09E667F3BCC908ULL); }
uint64_t build_sig_b(RowId r) { return hash64(r.packed() ^ 0xBB67AE8584CAA73BULL); }
uint64_t probe_sig_a(RowId r) { return hash64(r.packed() ^ 0x3C6EF372FE94F82BULL) | 1; }
uint64_t probe_sig_b(RowId r) { return hash64(r.packed() ^ 0xA54FF53A5F1D36F1ULL) | 1; }

namespace {

// Running aggregate over a set of build tuples.
struct Agg {
  uint64_t count = 0;
  uint64_t sig_a = 0;
  uint64_t sig_b = 0;

  void add(RowId r) {
    ++count;
    sig_a += build_sig_a(r);
    sig_b += build_sig_b(r);
  }
};

struct BuildEntry {
  RowId rowid;
  uint32_t fragment = 0;
};

// All build tuples of one key held by one index of one node. Fragments are
// SFR grid rows; other strategies use a single fragment.
struct Bucket {
  std::vector<BuildEntry> rows;
  std::vector<Agg> by_fragment;
  Agg total;
  std::unordered_set<uint64_t> have;
};

inline constexpr uint32_t kAllFragments = UINT32_MAX;

struct PendingProbe {
  Key key;
  RowId rowid;
  bool hash_index;
  uint32_t fragment;
  Agg snapshot;
};

struct ComputeNode {
  // Build tuples whose hash node is this node.
  std::unordered_map<Key, Bucket> hash_index;
  // Build tuples replicated here for skew handling.
  std::unordered_map<Key, Bucket> skew_index;
  // Keys this node has pulled from their hash node.
  std::unordered_set<Key> registered;
  // At a hash node: key -> nodes that asked for later arrivals.
  std::unordered_map<Key, std::vector<NodeId>> subscribers;
  std::vector<PendingProbe> pending;
  NodeLedger ledger;
  // Bytes moved in the two-pass merge phase, excluded from join-phase time.
  uint64_t merge_bytes = 0;
};

class SetView : public SkewView {
 public:
  explicit SetView(const std::unordered_set<Key>* keys) : keys_(keys) {}
  bool is_skewed(Key key) const override { return keys_->contains(key); }

 private:
  const std::unordered_set<Key>* keys_;
};

class LatchView : public SkewView {
 public:
  explicit LatchView(const SkewDetector* d) : d_(d) {}
  bool is_skewed(Key key) const override { return d_->is_latched(key); }

 private:
  const SkewDetector* d_;
};

class Simulation {
 public:
  Simulation(const Workload& w, const SimConfig& cfg)
      : w_(w), cfg_(cfg), n_(cfg.cluster.n), grid_(SfrGrid::for_nodes(cfg.cluster.n)),
        nodes_(cfg.cluster.n) {
    fragments_ = cfg.strategy == StrategyKind::kSFR ? grid_.rows : 1;
    if (cfg.record_trace) trace_.emplace();
  }

  SimReport execute();

 private:
  void setup_classification();
  void run_two_pass_detection();
  void process_build(NodeId origin, const Tuple& t);
  void process_probe(NodeId origin, const Tuple& t);
  void store_build(NodeId node, const Tuple& t);
  void forward_to_subscribers(NodeId q, const Tuple& t);
  void probe_at(NodeId node, const Tuple& t, bool skew_path);
  void pull(NodeId node, Key key);
  void deliver(NodeId src, NodeId dst, uint32_t bytes, DeliveryKind kind);
  void drain();
  void aggregate();
  SimReport finish();

  bool needs_pull() const {
    if (cfg_.strategy == StrategyKind::kBPPR) return true;
    return cfg_.mode == DetectorMode::kOnline && cfg_.strategy != StrategyKind::kGraHJ;
  }
  uint32_t fragment_of_build(const Tuple& t) const {
    return cfg_.strategy == StrategyKind::kSFR ? sfr_build_row(t, grid_) : 0;
  }
  // Fragment a skew-path probe at `node` may join with.
  uint32_t fragment_for_node(NodeId node) const {
    return cfg_.strategy == StrategyKind::kSFR ? grid_.row_of(node) : 0;
  }
  Bucket& bucket(NodeId node, bool hash_index, Key key) {
    auto& index = hash_index ? nodes_[node].hash_index : nodes_[node].skew_index;
    Bucket& b = index[key];
    if (b.by_fragment.empty()) b.by_fragment.resize(fragments_);
    return b;
  }
  static const Agg& view(const Bucket& b, uint32_t fragment) {
    return fragment == kAllFragments ? b.total : b.by_fragment[fragment];
  }

  const Workload& w_;
  const SimConfig& cfg_;
  uint32_t n_;
  SfrGrid grid_;
  uint32_t fragments_ = 1;
  std::vector<ComputeNode> nodes_;

  std::unordered_set<Key> global_skew_;
  std::vector<SkewDetector> detectors_;
  std::vector<std::unique_ptr<SkewView>> views_;
  std::vector<RoutingContext> contexts_;

  std::optional<SimTrace> trace_;
  uint64_t pull_requests_ = 0;
  uint64_t pulled_tuples_ = 0;
  uint64_t forwarded_tuples_ = 0;
  double detect_phase_seconds_ = 0.0;
  double merge_seconds_ = 0.0;
  ResultDigest digest_;
  std::vector<ResultPair> pairs_;
};

void Simulation::deliver(NodeId src, NodeId dst, uint32_t bytes, DeliveryKind kind) {
  if (src == dst) return;
  nodes_[src].ledger.bytes_sent += bytes;
  nodes_[dst].ledger.bytes_received += bytes;
  if (trace_) trace_->deliveries.push_back({src, dst, bytes, kind});
}

void Simulation::setup_classification() {
  const double theta = cfg_.detector.theta;
  switch (cfg_.mode) {
    case DetectorMode::kOracle: {
      uint64_t total = 0;
      for (const auto& [k, c] : w_.true_counts) total += c;
      for (const auto& [k, c] : w_.true_counts) {
        if (static_cast<double>(c) >= theta * static_cast<double>(total)) global_skew_.insert(k);
      }
      break;
    }
    case DetectorMode::kTwoPass:
      run_two_pass_detection();
      break;
    case DetectorMode::kOnline:
      detectors_.reserve(n_);
      for (uint32_t i = 0; i < n_; ++i) detectors_.emplace_back(cfg_.detector);
      break;
  }
  for (NodeId i = 0; i < n_; ++i) {
    if (cfg_.mode == DetectorMode::kOnline) {
      views_.push_back(std::make_unique<LatchView>(&detectors_[i]));
    } else {
      views_.push_back(std::make_unique<SetView>(&global_skew_));
    }
    contexts_.push_back(
        make_routing_context(cfg_.strategy, n_, i, views_[i].get(), cfg_.epsilon, cfg_.scope));
    contexts_.back().build_hash_copy = cfg_.mode == DetectorMode::kOnline;
  }
}

void Simulation::run_two_pass_detection() {
  if (!w_.replayable) {
    throw std::invalid_argument("two-pass detection needs a replayable workload");
  }
  const NodeId resp = cfg_.cluster.response_node;
  const CostModel& cost = cfg_.cost;
  std::optional<SkewSketch> merged;
  for (NodeId i = 0; i < n_; ++i) {
    SkewSketch sketch(cfg_.detector.capacity);
    for (const Tuple& t : w_.probe_shards[i]) sketch.observe(t.key);
    nodes_[i].ledger.detector_observes += w_.probe_shards[i].size();
    detect_phase_seconds_ = std::max(
        detect_phase_seconds_, cost.detect_cost * static_cast<double>(w_.probe_shards[i].size()));
    const auto bytes = static_cast<uint32_t>(sketch.size() * cost.sketch_record_bytes);
    if (i != resp) {
      deliver(i, resp, bytes, DeliveryKind::kSketch);
      nodes_[i].merge_bytes += bytes;
      nodes_[resp].merge_bytes += bytes;
    }
    merged = merged ? SkewSketch::merge(*merged, sketch) : std::move(sketch);
  }
  const double threshold = cfg_.detector.theta * static_cast<double>(merged->n_seen());
  for (const auto& c : merged->counters()) {
    if (static_cast<double>(c.count) >= threshold) global_skew_.insert(c.key);
  }
  const auto list_bytes = static_cast<uint32_t>(global_skew_.size() * sizeof(Key));
  if (list_bytes > 0) {
    for (NodeId j = 0; j < n_; ++j) {
      if (j == resp) continue;
      deliver(resp, j, list_bytes, DeliveryKind::kSkewList);
      nodes_[j].merge_bytes += list_bytes;
      nodes_[resp].merge_bytes += list_bytes;
    }
  }
  merge_seconds_ = static_cast<double>(nodes_[resp].merge_bytes) * 8.0 /
                   (cost.bandwidth_mbps * 1e6);
}

void Simulation::store_build(NodeId node, const Tuple& t) {
  const bool at_hash_node = hash_node(t.key, n_) == node;
  Bucket& b = bucket(node, at_hash_node, t.key);
  const uint32_t fragment = fragment_of_build(t);
  b.rows.push_back({t.rowid, fragment});
  b.by_fragment[fragment].add(t.rowid);
  b.total.add(t.rowid);
  if (!at_hash_node) b.have.insert(t.rowid.packed());
  ++nodes_[node].ledger.build_inserted;
}

void Simulation::forward_to_subscribers(NodeId q, const Tuple& t) {
  auto it = nodes_[q].subscribers.find(t.key);
  if (it == nodes_[q].subscribers.end()) return;
  const uint32_t fragment = fragment_of_build(t);
  for (NodeId j : it->second) {
    if (fragment_for_node(j) != fragment) continue;
    Bucket& b = bucket(j, false, t.key);
    if (b.have.contains(t.rowid.packed())) continue;
    deliver(q, j, cfg_.cost.tuple_wire_bytes, DeliveryKind::kForwardedTuple);
    store_build(j, t);
    ++forwarded_tuples_;
  }
}

void Simulation::process_build(NodeId origin, const Tuple& t) {
  const Destinations d = route(cfg_.strategy, Side::kBuild, t, contexts_[origin]);
  const NodeId q = hash_node(t.key, n_);
  bool reached_q = false;
  for (NodeId dst : d.nodes) {
    deliver(origin, dst, cfg_.cost.tuple_wire_bytes, DeliveryKind::kTuple);
    store_build(dst, t);
    reached_q |= dst == q;
  }
  if (reached_q) forward_to_subscribers(q, t);
}

void Simulation::pull(NodeId node, Key key) {
  ComputeNode& cn = nodes_[node];
  if (!cn.registered.insert(key).second) return;
  const NodeId q = hash_node(key, n_);
  ++pull_requests_;
  deliver(node, q, cfg_.cost.pull_request_bytes, DeliveryKind::kPullRequest);
  const uint32_t fragment = fragment_for_node(node);
  auto it = nodes_[q].hash_index.find(key);
  if (it != nodes_[q].hash_index.end()) {
    // Copy: store_build below may rehash the destination's index, but never
    // the source's.
    const std::vector<BuildEntry> rows = it->second.rows;
    Bucket& mine = bucket(node, false, key);
    for (const BuildEntry& e : rows) {
      if (e.fragment != fragment || mine.have.contains(e.rowid.packed())) continue;
      deliver(q, node, cfg_.cost.tuple_wire_bytes, DeliveryKind::kPulledTuple);
      store_build(node, Tuple{key, e.rowid, Side::kBuild});
      ++pulled_tuples_;
    }
  }
  nodes_[q].subscribers[key].push_back(node);
}

void Simulation::probe_at(NodeId node, const Tuple& t, bool skew_path) {
  ComputeNode& cn = nodes_[node];
  const NodeId q = hash_node(t.key, n_);
  ++cn.ledger.probe_processed;
  uint32_t fragment = kAllFragments;
  if (skew_path) {
    ++cn.ledger.skewed_received;
    if (node != q && needs_pull()) pull(node, t.key);
    if (cfg_.strategy == StrategyKind::kSFR) fragment = fragment_for_node(node);
  }
  const bool use_hash_index = node == q;
  const Bucket& b = bucket(node, use_hash_index, t.key);
  const Agg& now = view(b, fragment);
  cn.ledger.result_count += now.count;
  cn.pending.push_back({t.key, t.rowid, use_hash_index, fragment, now});
}

void Simulation::process_probe(NodeId origin, const Tuple& t) {
  if (cfg_.mode == DetectorMode::kOnline) {
    detectors_[origin].observe_and_classify(t.key);
    ++nodes_[origin].ledger.detector_observes;
  }
  RoutingContext& ctx = contexts_[origin];
  const Destinations d = route(cfg_.strategy, Side::kProbe, t, ctx);
  for (NodeId dst : d.nodes) {
    deliver(origin, dst, cfg_.cost.tuple_wire_bytes, DeliveryKind::kTuple);
    if (trace_ && d.skew_path) {
      uint32_t u_size = 0;
      if (ctx.bppr) u_size = static_cast<uint32_t>(ctx.bppr->find(t.key)->u.members.size());
      trace_->routes.push_back({t.rowid, origin, dst, u_size});
    }
    probe_at(dst, t, d.skew_path);
  }
}

void Simulation::drain() {
  for (NodeId j = 0; j < n_; ++j) {
    ComputeNode& cn = nodes_[j];
    for (const PendingProbe& p : cn.pending) {
      const Bucket& b = bucket(j, p.hash_index, p.key);
      const Agg& end = view(b, p.fragment);
      // Matches for build tuples that arrived after the probe.
      cn.ledger.result_count += end.count - p.snapshot.count;
      digest_.count += end.count;
      digest_.fp_a += probe_sig_a(p.rowid) * end.sig_a;
      digest_.fp_b += probe_sig_b(p.rowid) * end.sig_b;
      if (cfg_.collect_pairs) {
        for (const BuildEntry& e : b.rows) {
          if (p.fragment == kAllFragments || e.fragment == p.fragment) {
            pairs_.push_back({e.rowid, p.rowid});
          }
        }
      }
    }
  }
}

void Simulation::aggregate() {
  const NodeId resp = cfg_.cluster.response_node;
  for (NodeId j = 0; j < n_; ++j) deliver(j, resp, cfg_.cost.count_bytes, DeliveryKind::kCount);
}

SimReport Simulation::execute() {
  setup_classification();

  // Round-robin over data nodes; each node alternates build then probe.
  size_t longest = 0;
  for (NodeId i = 0; i < n_; ++i) {
    longest = std::max({longest, w_.build_shards[i].size(), w_.probe_shards[i].size()});
  }
  for (size_t step = 0; step < longest; ++step) {
    for (NodeId i = 0; i < n_; ++i) {
      if (step < w_.build_shards[i].size()) process_build(i, w_.build_shards[i][step]);
      if (step < w_.probe_shards[i].size()) process_probe(i, w_.probe_shards[i][step]);
    }
  }
  drain();
  aggregate();
  return finish();
}

SimReport Simulation::finish() {
  SimReport r;
  r.strategy = cfg_.strategy;
  r.mode = cfg_.mode;
  r.n = n_;
  r.bandwidth_mbps = cfg_.cost.bandwidth_mbps;
  r.epsilon = cfg_.epsilon;
  r.theta = cfg_.detector.theta;
  r.labels = cfg_.labels;

  const CostModel& cost = cfg_.cost;
  double join_phase = 0.0;
  std::vector<uint64_t> skewed(n_);
  for (NodeId j = 0; j < n_; ++j) {
    const NodeLedger& l = nodes_[j].ledger;
    r.ledgers.push_back(l);
    r.total_result_count += l.result_count;
    r.total_network_bytes += l.bytes_sent;
    skewed[j] = l.skewed_received;
    const uint64_t join_bytes = l.bytes_sent + l.bytes_received - nodes_[j].merge_bytes;
    double t = static_cast<double>(join_bytes) * 8.0 / (cost.bandwidth_mbps * 1e6) +
               cost.c_build * static_cast<double>(l.build_inserted) +
               cost.c_probe * static_cast<double>(l.probe_processed) +
               cost.c_result * static_cast<double>(l.result_count);
    if (cfg_.mode != DetectorMode::kTwoPass) {
      t += cost.detect_cost * static_cast<double>(l.detector_observes);
    }
    join_phase = std::max(join_phase, t);
  }
  r.elapsed_seconds = detect_phase_seconds_ + merge_seconds_ + join_phase;
  r.detect_phase_seconds = detect_phase_seconds_;
  r.merge_seconds = merge_seconds_;
  r.global_balance_B = balance_factor(skewed);

  for (const RoutingContext& ctx : contexts_) {
    if (!ctx.bppr) continue;
    for (const auto& [size, count] : ctx.bppr->u_size_histogram()) r.u_histogram[size] += count;
    r.max_local_balance = std::max(r.max_local_balance, ctx.bppr->local_balance());
    r.route_ops += ctx.bppr->ops();
  }
  r.pull_requests = pull_requests_;
  r.pulled_tuples = pulled_tuples_;
  r.forwarded_tuples = forwarded_tuples_;
  if (cfg_.mode == DetectorMode::kOnline) {
    for (const auto& d : detectors_) r.skew_keys += d.latched_count();
  } else {
    r.skew_keys = global_skew_.size();
  }
  r.digest = digest_;
  r.trace = std::move(trace_);
  if (cfg_.collect_pairs) {
    std::sort(pairs_.begin(), pairs_.end());
    r.pairs = std::move(pairs_);
  }
  return r;
}

}  // namespace

SimReport run(const Workload& workload, const SimConfig& cfg) {
  cfg.cluster.validate();
  cfg.cost.validate();
  if (workload.n_nodes != cfg.cluster.n || workload.build_shards.size() != cfg.cluster.n ||
      workload.probe_shards.size() != cfg.cluster.n) {
    throw std::invalid_argument("run: workload shard count does not match cluster size");
  }
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0)) {
    throw std::invalid_argument("run: epsilon must be in (0, 1]");
  }
  if (!(cfg.detector.theta > 0.0 && cfg.detector.theta < 1.0)) {
    throw std::invalid_argument("run: theta must be in (0, 1)");
  }
  Simulation sim(workload, cfg);
  return sim.execute();
}

SimReport run(const Workload& workload, std::string_view strategy_name,
              const ClusterSpec& cluster, const CostModel& cost, DetectorMode mode,
              SimConfig options) {
  options.strategy = parse_strategy(strategy_name);
  options.cluster = cluster;
  options.cost = cost;
  options.mode = mode;
  return run(workload, options);
}

std::vector<ResultPair> local_hash_join(std::span<const Tuple> build, std::span<const Tuple> probe) {
  std::unordered_map<Key, std::vector<RowId>> table;
  for (const Tuple& b : build) table[b.key].push_back(b.rowid);
  std::vector<ResultPair> out;
  for (const Tuple& p : probe) {
    auto it = table.find(p.key);
    if (it == table.end()) continue;
    for (RowId b : it->second) out.push_back({b, p.rowid});
  }
  return out;
}

OracleJoin oracle_join(const Workload& w) {
  std::vector<Tuple> build;
  std::vector<Tuple> probe;
  for (const auto& s : w.build_shards) build.insert(build.end(), s.begin(), s.end());
  for (const auto& s : w.probe_shards) probe.insert(probe.end(), s.begin(), s.end());
  OracleJoin j;
  j.pairs = local_hash_join(build, probe);
  std::sort(j.pairs.begin(), j.pairs.end());
  j.size = j.pairs.size();
  return j;
}

uint64_t oracle_join_size(const Workload& w) {
  std::unordered_map<Key, uint64_t> build_counts;
  for (const auto& s : w.build_shards) {
    for (const Tuple& t : s) ++build_counts[t.key];
  }
  uint64_t size = 0;
  for (const auto& [key, s_count] : count_probe_keys(w)) {
    auto it = build_counts.find(key);
    if (it != build_counts.end()) size += it->second * s_count;
  }
  return size;
}

ResultDigest oracle_digest(const Workload& w) {
  struct KeySum {
    uint64_t count = 0;
    uint64_t a = 0;
    uint64_t b = 0;
  };
  std::unordered_map<Key, KeySum> sums;
  for (const auto& s : w.build_shards) {
    for (const Tuple& t : s) {
      KeySum& k = sums[t.key];
      ++k.count;
      k.a += build_sig_a(t.rowid);
      k.b += build_sig_b(t.rowid);
    }
  }
  ResultDigest d;
  for (const auto& s : w.probe_shards) {
    for (const Tuple& t : s) {
      auto it = sums.find(t.key);
      if (it == sums.end()) continue;
      d.count += it->second.count;
      d.fp_a += probe_sig_a(t.rowid) * it->second.a;
      d.fp_b += probe_sig_b(t.rowid) * it->second.b;
    }
  }
  return d;
}

void write_route_trace_csv(const SimTrace& trace, std::ostream& out) {
  out << "rowid_node,rowid_seq,origin,target,u_size\n";
  for (const auto& e : trace.routes) {
    out << e.rowid.node << ',' << e.rowid.seq << ',' << e.origin << ',' << e.target << ','
        << e.u_size << '\n';
  }
}

}  // namespace balajoin
