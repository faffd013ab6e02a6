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
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "balajoin/types.h"

namespace balajoin {

struct SketchCounter {
  Key key = 0;
  uint64_t count = 0;
  // Upper bound on how much `count` exceeds the true frequency.
  uint64_t overestimate = 0;

  friend bool operator==(const SketchCounter&, const SketchCounter&) = default;
};

/// Space Saving heavy-hitter summary with at most `capacity` counters.
///
/// Counters live in an array kept in non-increasing count order, with a hash
/// index from key to array slot. Equal counts form contiguous groups, and the
/// first slot of each group is tracked, so an increment is a single swap to
/// the front of its group. The minimum is always the last slot.
class SkewSketch {
 public:
  explicit SkewSketch(size_t capacity);

  void observe(Key key);

  size_t capacity() const { return capacity_; }
  size_t size() const { return counters_.size(); }
  uint64_t n_seen() const { return n_seen_; }
  bool full() const { return counters_.size() == capacity_; }

  // Smallest tracked count, or 0 when not full.
  uint64_t min_count() const;

  std::optional<SketchCounter> find(Key key) const;

  // Ordered by count, highest first.
  const std::vector<SketchCounter>& counters() const { return counters_; }

  // True iff n_seen >= warmup, key is tracked, and est >= theta * n_seen.
  bool is_skewed(Key key, double theta, uint64_t warmup) const;

  // Parallel Space Saving combination; throws std::invalid_argument when the
  // capacities differ.
  static SkewSketch merge(const SkewSketch& a, const SkewSketch& b);

  // Writes `key,est,overestimate` rows.
  void dump_csv(std::ostream& out) const;

  // Recomputes ordering and index consistency from scratch.
  bool check_invariants() const;

 private:
  void increment_slot(size_t slot);
  void rebuild_from(std::vector<SketchCounter> counters, uint64_t n_seen);

  size_t capacity_;
  uint64_t n_seen_ = 0;
  std::vector<SketchCounter> counters_;
  std::unordered_map<Key, uint32_t> slot_of_;
  // count -> first slot holding that count.
  std::unordered_map<uint64_t, uint32_t> group_head_;
};

struct DetectorConfig {
  double theta = 0.001;
  size_t capacity = 256;
  uint64_t warmup = 1000;
};

// A node-local detector: a sketch plus a latch so that a key, once reported
// skewed, stays skewed for the rest of the run.
class SkewDetector {
 public:
  explicit SkewDetector(DetectorConfig cfg) : cfg_(cfg), sketch_(cfg.capacity) {}

  // Feeds one probe key and returns its (possibly newly latched) class.
  bool observe_and_classify(Key key);

  bool is_latched(Key key) const { return latched_.contains(key); }
  const SkewSketch& sketch() const { return sketch_; }
  const DetectorConfig& config() const { return cfg_; }
  size_t latched_count() const { return latched_.size(); }

 private:
  DetectorConfig cfg_;
  SkewSketch sketch_;
  std::unordered_set<Key> latched_;
};

}  // namespace balajoin
