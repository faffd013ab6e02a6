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
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "balajoin/types.h"

namespace balajoin {

// (max - min) / max over `loads`; 0 when max is 0. Throws
// std::invalid_argument on an empty span.
double balance_factor(std::span<const uint64_t> loads);

// Deterministic per-key candidate node order. Every node derives the same
// sequence for a key, so no coordination is needed to agree on it.
struct NodeSeq {
  Key key = 0;
  std::vector<NodeId> seq;
};

// A node's current candidate targets for one key: always a prefix of the
// key's NodeSeq.
struct CandidateSet {
  Key key = 0;
  std::vector<NodeId> members;
};

// Appends the next sequence element unless `seq` already covers all n nodes.
// Starting at epoch = |seq|, probes hash64(key + epoch) mod n until it finds a
// node not yet in the sequence. Returns the number of hash probes made.
size_t gen_seq(NodeSeq& seq, uint32_t n);

// Grows `u` by one node along `seq`, extending `seq` first when needed. A
// saturated set (|u| == n) is left unchanged. Returns hash probes made.
size_t update_u(CandidateSet& u, NodeSeq& seq, uint32_t n);

enum class BalanceScope : uint8_t {
  // min/max over all n partitions, empty ones included.
  kAllNodes,
  // min/max over partitions that hold at least one tuple. Experimental.
  kActiveNodes,
};

/// Per data node routing state for skewed probe tuples.
///
/// Each skewed tuple is tentatively placed where the previous tuple of the
/// same key went. If that would push the node's local balance factor above
/// epsilon, the tuple moves to the least loaded member of the key's candidate
/// set; if that member is the previous target itself (load ties count as a
/// match), the candidate set grows by one node along the key's sequence and
/// the tuple goes to the new node. A saturated set moves the tuple to another
/// least loaded member when one exists. The
/// max/min of the partition loads are maintained incrementally, so the balance
/// check is O(1).
class BpprState {
 public:
  struct KeyRecord {
    NodeSeq seq;
    CandidateSet u;
    NodeId last = 0;
  };

  BpprState(uint32_t n, double epsilon, BalanceScope scope = BalanceScope::kAllNodes);

  NodeId route_skewed(Key key);

  // Balance factor over the current partition loads.
  double local_balance() const;

  uint32_t n() const { return n_; }
  double epsilon() const { return epsilon_; }
  const std::vector<uint64_t>& partition_loads() const { return loads_; }
  uint64_t max_load() const { return max_; }
  uint64_t min_load() const { return min_; }
  uint64_t skewed_routed() const { return routed_; }
  // Basic operations spent in route_skewed so far: one per call, plus one
  // per hash probe and per candidate inspected.
  uint64_t ops() const { return ops_; }

  const KeyRecord* find(Key key) const;
  const std::unordered_map<Key, KeyRecord>& records() const { return keys_; }
  // |U| -> number of keys.
  std::map<size_t, uint64_t> u_size_histogram() const;

  // Cached extrema and bookkeeping match a from-scratch recomputation.
  bool check_invariants() const;

 private:
  double tentative_balance(NodeId target) const;
  // Least loaded member of `u`; ties prefer members other than `avoid`, then
  // the lowest index.
  NodeId min_member(const CandidateSet& u, NodeId avoid);
  void add_load(NodeId target);

  uint32_t n_;
  double epsilon_;
  BalanceScope scope_;
  std::unordered_map<Key, KeyRecord> keys_;
  std::vector<uint64_t> loads_;
  // load value -> number of partitions holding it.
  std::unordered_map<uint64_t, uint32_t> load_freq_;
  uint64_t max_ = 0;
  uint64_t min_ = 0;
  uint32_t at_min_ = 0;
  uint64_t routed_ = 0;
  uint64_t ops_ = 0;
};

}  // namespace balajoin
