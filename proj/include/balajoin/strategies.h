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

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <unordered_map>

#include <boost/container/small_vector.hpp>

#include "balajoin/bppr.h"
#include "balajoin/types.h"

namespace balajoin {

enum class StrategyKind : uint8_t { kGraHJ, kPRPD, kSFR, kPnR, kBPPR };

inline constexpr std::array<StrategyKind, 5> kAllStrategies = {
    StrategyKind::kGraHJ, StrategyKind::kPRPD, StrategyKind::kSFR, StrategyKind::kPnR,
    StrategyKind::kBPPR};

std::string_view to_string(StrategyKind s);
// Accepts "grahj" | "prpd" | "sfr" | "pnr" | "bppr"; throws
// std::invalid_argument otherwise.
StrategyKind parse_strategy(std::string_view name);

using NodeList = boost::container::small_vector<NodeId, 8>;

struct Destinations {
  NodeList nodes;
  // All listed nodes receive a copy (as opposed to a single target).
  bool replicated = false;
  // Routed by skew handling rather than plain hash partitioning.
  bool skew_path = false;
};

// Answers "is this key skewed?" from the point of view of one data node.
class SkewView {
 public:
  virtual ~SkewView() = default;
  virtual bool is_skewed(Key key) const = 0;
};

// Logical r x c arrangement of the nodes for fragment-replicate routing.
// Node (row, col) has index row * cols + col.
struct SfrGrid {
  uint32_t rows = 1;
  uint32_t cols = 1;

  // Nearest-square factorization with rows <= cols; a prime n gives 1 x n.
  static SfrGrid for_nodes(uint32_t n);
  uint32_t row_of(NodeId node) const { return node / cols; }
  uint32_t col_of(NodeId node) const { return node % cols; }
};

uint32_t sfr_build_row(const Tuple& t, const SfrGrid& grid);
uint32_t sfr_probe_col(const Tuple& t, const SfrGrid& grid);

struct RoutingContext {
  uint32_t n = 0;
  NodeId origin = 0;
  // Null means no key is ever skewed.
  const SkewView* skew = nullptr;
  SfrGrid grid;
  // Per key round-robin cursor for PnR.
  std::unordered_map<Key, uint32_t> pnr_cursor;
  std::optional<BpprState> bppr;
  // SFR only: skew-replicated build tuples also go to their hash node, so
  // the hash node holds every build tuple of the key.
  bool build_hash_copy = false;

  bool is_skewed(Key key) const { return skew != nullptr && skew->is_skewed(key); }
};

RoutingContext make_routing_context(StrategyKind strategy, uint32_t n, NodeId origin,
                                    const SkewView* skew, double epsilon = 0.2,
                                    BalanceScope scope = BalanceScope::kAllNodes);

Destinations route_grahj(Side side, const Tuple& t, RoutingContext& ctx);
Destinations route_prpd(Side side, const Tuple& t, RoutingContext& ctx);
Destinations route_sfr(Side side, const Tuple& t, RoutingContext& ctx);
Destinations route_pnr(Side side, const Tuple& t, RoutingContext& ctx);
Destinations route_bppr(Side side, const Tuple& t, RoutingContext& ctx);

Destinations route(StrategyKind strategy, Side side, const Tuple& t, RoutingContext& ctx);

}  // namespace balajoin
