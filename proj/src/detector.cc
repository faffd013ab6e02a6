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

#include "balajoin/detector.h"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace balajoin {

SkewSketch::SkewSketch(size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("SkewSketch: capacity must be >= 1");
  counters_.reserve(capacity);
  slot_of_.reserve(capacity * 2);
}

uint64_t SkewSketch::min_count() const { return full() ? counters_.back().count : 0; }

std::optional<SketchCounter> SkewSketch::find(Key key) const {
  auto it = slot_of_.find(key);
  if (it == slot_of_.end()) return std::nullopt;
  return counters_[it->second];
}

void SkewSketch::increment_slot(size_t slot) {
  const uint64_t c = counters_[slot].count;
  const uint32_t head = group_head_.at(c);
  if (head != slot) {
    std::swap(counters_[head], counters_[slot]);
    slot_of_[counters_[head].key] = head;
    slot_of_[counters_[slot].key] = static_cast<uint32_t>(slot);
  }
  if (head + 1 < counters_.size() && counters_[head + 1].count == c) {
    group_head_[c] = head + 1;
  } else {
    group_head_.erase(c);
  }
  counters_[head].count = c + 1;
  group_head_.try_emplace(c + 1, head);
}

void SkewSketch::observe(Key key) {
  ++n_seen_;
  if (auto it = slot_of_.find(key); it != slot_of_.end()) {
    increment_slot(it->second);
    return;
  }
  if (counters_.size() < capacity_) {
    counters_.push_back({key, 1, 0});
    const auto slot = static_cast<uint32_t>(counters_.size() - 1);
    slot_of_.emplace(key, slot);
    group_head_.try_emplace(1, slot);
    return;
  }
  // Evict a minimum: the last slot. The newcomer inherits its count.
  const size_t slot = counters_.size() - 1;
  SketchCounter& victim = counters_[slot];
  slot_of_.erase(victim.key);
  victim.key = key;
  victim.overestimate = victim.count;
  slot_of_.emplace(key, static_cast<uint32_t>(slot));
  increment_slot(slot);
}

bool SkewSketch::is_skewed(Key key, double theta, uint64_t warmup) const {
  if (n_seen_ < warmup) return false;
  auto it = slot_of_.find(key);
  if (it == slot_of_.end()) return false;
  return static_cast<double>(counters_[it->second].count) >= theta * static_cast<double>(n_seen_);
}

void SkewSketch::rebuild_from(std::vector<SketchCounter> counters, uint64_t n_seen) {
  std::sort(counters.begin(), counters.end(), [](const SketchCounter& a, const SketchCounter& b) {
    return a.count != b.count ? a.count > b.count : a.key < b.key;
  });
  if (counters.size() > capacity_) counters.resize(capacity_);
  counters_ = std::move(counters);
  n_seen_ = n_seen;
  slot_of_.clear();
  group_head_.clear();
  for (uint32_t i = 0; i < counters_.size(); ++i) {
    slot_of_.emplace(counters_[i].key, i);
    group_head_.try_emplace(counters_[i].count, i);
  }
}

SkewSketch SkewSketch::merge(const SkewSketch& a, const SkewSketch& b) {
  if (a.capacity_ != b.capacity_) {
    throw std::invalid_argument("SkewSketch::merge: capacity mismatch");
  }
  // A key missing from a full sketch may still have occurred there up to
  // that sketch's minimum count times; charging it keeps est >= true.
  const uint64_t a_floor = a.min_count();
  const uint64_t b_floor = b.min_count();

  std::vector<SketchCounter> merged;
  merged.reserve(a.size() + b.size());
  for (const auto& c : a.counters_) {
    SketchCounter m = c;
    if (auto other = b.find(c.key)) {
      m.count += other->count;
      m.overestimate += other->overestimate;
    } else {
      m.count += b_floor;
      m.overestimate += b_floor;
    }
    merged.push_back(m);
  }
  for (const auto& c : b.counters_) {
    if (a.slot_of_.contains(c.key)) continue;
    merged.push_back({c.key, c.count + a_floor, c.overestimate + a_floor});
  }

  SkewSketch out(a.capacity_);
  out.rebuild_from(std::move(merged), a.n_seen_ + b.n_seen_);
  return out;
}

void SkewSketch::dump_csv(std::ostream& out) const {
  out << "key,est,overestimate\n";
  for (const auto& c : counters_) out << c.key << ',' << c.count << ',' << c.overestimate << '\n';
}

bool SkewSketch::check_invariants() const {
  if (counters_.size() > capacity_ || slot_of_.size() != counters_.size()) return false;
  for (uint32_t i = 0; i < counters_.size(); ++i) {
    if (i > 0 && counters_[i - 1].count < counters_[i].count) return false;
    auto it = slot_of_.find(counters_[i].key);
    if (it == slot_of_.end() || it->second != i) return false;
    const bool is_head = i == 0 || counters_[i - 1].count != counters_[i].count;
    auto g = group_head_.find(counters_[i].count);
    if (g == group_head_.end()) return false;
    if (is_head && g->second != i) return false;
  }
  return true;
}

bool SkewDetector::observe_and_classify(Key key) {
  sketch_.observe(key);
  if (latched_.contains(key)) return true;
  if (sketch_.is_skewed(key, cfg_.theta, cfg_.warmup)) {
    latched_.insert(key);
    return true;
  }
  return false;
}

}  // namespace balajoin
