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

#include "balajoin/bppr.h"

#include <algorithm>
#include <stdexcept>

#include "balajoin/hash.h"

namespace balajoin {

double balance_factor(std::span<const uint64_t> loads) {
  if (loads.empty()) throw std::invalid_argument("balance_factor: empty load vector");
  const auto [lo, hi] = std::minmax_element(loads.begin(), loads.end());
  if (*hi == 0) return 0.0;
  return static_cast<double>(*hi - *lo) / static_cast<double>(*hi);
}

size_t gen_seq(NodeSeq& seq, uint32_t n) {
  if (seq.seq.size() >= n) return 0;
  uint64_t epoch = seq.seq.size();
  size_t probes = 1;
  auto candidate = static_cast<NodeId>(hash64(seq.key + epoch) % n);
  while (std::find(seq.seq.begin(), seq.seq.end(), candidate) != seq.seq.end()) {
    ++epoch;
    ++probes;
    candidate = static_cast<NodeId>(hash64(seq.key + epoch) % n);
  }
  seq.seq.push_back(candidate);
  return probes;
}

size_t update_u(CandidateSet& u, NodeSeq& seq, uint32_t n) {
  const size_t size = u.members.size();
  const size_t probes = gen_seq(seq, n);
  if (size == seq.seq.size()) return probes;
  u.members.push_back(seq.seq[size]);
  return probes;
}

BpprState::BpprState(uint32_t n, double epsilon, BalanceScope scope)
    : n_(n), epsilon_(epsilon), scope_(scope), loads_(n, 0), at_min_(n) {
  if (n == 0) throw std::invalid_argument("BpprState: n must be >= 1");
  load_freq_[0] = n;
}

const BpprState::KeyRecord* BpprState::find(Key key) const {
  auto it = keys_.find(key);
  return it == keys_.end() ? nullptr : &it->second;
}

double BpprState::local_balance() const {
  if (scope_ == BalanceScope::kAllNodes) {
    return max_ == 0 ? 0.0 : static_cast<double>(max_ - min_) / static_cast<double>(max_);
  }
  uint64_t hi = 0;
  uint64_t lo = UINT64_MAX;
  for (uint64_t l : loads_) {
    if (l == 0) continue;
    hi = std::max(hi, l);
    lo = std::min(lo, l);
  }
  return hi == 0 ? 0.0 : static_cast<double>(hi - lo) / static_cast<double>(hi);
}

double BpprState::tentative_balance(NodeId target) const {
  if (scope_ == BalanceScope::kAllNodes) {
    const uint64_t hi = std::max(max_, loads_[target] + 1);
    const uint64_t lo = (loads_[target] == min_ && at_min_ == 1) ? min_ + 1 : min_;
    return static_cast<double>(hi - lo) / static_cast<double>(hi);
  }
  uint64_t hi = 0;
  uint64_t lo = UINT64_MAX;
  for (NodeId j = 0; j < n_; ++j) {
    const uint64_t l = loads_[j] + (j == target ? 1 : 0);
    if (l == 0) continue;
    hi = std::max(hi, l);
    lo = std::min(lo, l);
  }
  return static_cast<double>(hi - lo) / static_cast<double>(hi);
}

NodeId BpprState::min_member(const CandidateSet& u, NodeId avoid) {
  NodeId best = u.members.front();
  for (NodeId j : u.members) {
    ++ops_;
    if (loads_[j] < loads_[best]) {
      best = j;
    } else if (loads_[j] == loads_[best] && (best == avoid || (j != avoid && j < best))) {
      best = j;
    }
  }
  return best;
}

void BpprState::add_load(NodeId target) {
  const uint64_t old = loads_[target]++;
  if (--load_freq_[old] == 0) load_freq_.erase(old);
  ++load_freq_[old + 1];
  max_ = std::max(max_, old + 1);
  if (old == min_ && --at_min_ == 0) {
    min_ = old + 1;
    at_min_ = load_freq_.at(min_);
  }
  ++routed_;
}

NodeId BpprState::route_skewed(Key key) {
  ++ops_;
  auto [it, inserted] = keys_.try_emplace(key);
  KeyRecord& rec = it->second;
  NodeId target;
  if (inserted) {
    rec.seq.key = key;
    rec.u.key = key;
    ops_ += update_u(rec.u, rec.seq, n_);
    target = rec.seq.seq.front();
  } else if (tentative_balance(rec.last) <= epsilon_) {
    target = rec.last;
  } else {
    target = min_member(rec.u, rec.last);
    if (loads_[target] == loads_[rec.last]) {
      const size_t before = rec.u.members.size();
      ops_ += update_u(rec.u, rec.seq, n_);
      // A saturated set cannot grow; the least loaded member stands.
      if (rec.u.members.size() > before) target = rec.u.members.back();
    }
  }
  rec.last = target;
  add_load(target);
  return target;
}

std::map<size_t, uint64_t> BpprState::u_size_histogram() const {
  std::map<size_t, uint64_t> hist;
  for (const auto& [key, rec] : keys_) ++hist[rec.u.members.size()];
  return hist;
}

bool BpprState::check_invariants() const {
  uint64_t total = 0;
  for (uint64_t l : loads_) total += l;
  if (total != routed_) return false;
  const auto [lo, hi] = std::minmax_element(loads_.begin(), loads_.end());
  if (*lo != min_ || *hi != max_) return false;
  if (static_cast<uint32_t>(std::count(loads_.begin(), loads_.end(), min_)) != at_min_) {
    return false;
  }
  for (const auto& [key, rec] : keys_) {
    const auto& seq = rec.seq.seq;
    if (seq.empty() || seq.size() > n_ || seq.front() != hash_node(key, n_)) return false;
    std::vector<NodeId> sorted = seq;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    const auto& members = rec.u.members;
    if (members.size() > seq.size() || !std::equal(members.begin(), members.end(), seq.begin())) {
      return false;
    }
  }
  return true;
}

}  // namespace balajoin
