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

#include "balajoin/strategies.h"

#include <stdexcept>
#include <string>

#include "balajoin/hash.h"

namespace balajoin {

std::string_view to_string(StrategyKind s) {
  switch (s) {
    case StrategyKind::kGraHJ:
      return "grahj";
    case StrategyKind::kPRPD:
      return "prpd";
    case StrategyKind::kSFR:
      return "sfr";
    case StrategyKind::kPnR:
      return "pnr";
    case StrategyKind::kBPPR:
      return "bppr";
  }
  return "unknown";
}

StrategyKind parse_strategy(std::string_view name) {
  for (StrategyKind s : kAllStrategies) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown strategy: " + std::string(name));
}

SfrGrid SfrGrid::for_nodes(uint32_t n) {
  uint32_t rows = 1;
  for (uint32_t r = 1; r * r <= n; ++r) {
    if (n % r == 0) rows = r;
  }
  return SfrGrid{rows, n / rows};
}

uint32_t sfr_build_row(const Tuple& t, const SfrGrid& grid) {
  return static_cast<uint32_t>(hash64(t.rowid.packed()) % grid.rows);
}

uint32_t sfr_probe_col(const Tuple& t, const SfrGrid& grid) {
  return static_cast<uint32_t>(hash64(t.rowid.packed()) % grid.cols);
}

RoutingContext make_routing_context(StrategyKind strategy, uint32_t n, NodeId origin,
                                    const SkewView* skew, double epsilon, BalanceScope scope) {
  RoutingContext ctx;
  ctx.n = n;
  ctx.origin = origin;
  ctx.skew = skew;
  ctx.grid = SfrGrid::for_nodes(n);
  if (strategy == StrategyKind::kBPPR) ctx.bppr.emplace(n, epsilon, scope);
  return ctx;
}

namespace {

Destinations to_hash_node(const Tuple& t, const RoutingContext& ctx) {
  Destinations d;
  d.nodes.push_back(hash_node(t.key, ctx.n));
  return d;
}

Destinations broadcast(const RoutingContext& ctx) {
  Destinations d;
  d.replicated = true;
  d.skew_path = true;
  for (NodeId j = 0; j < ctx.n; ++j) d.nodes.push_back(j);
  return d;
}

Destinations single_skewed(NodeId node) {
  Destinations d;
  d.skew_path = true;
  d.nodes.push_back(node);
  return d;
}

}  // namespace

Destinations route_grahj(Side /*side*/, const Tuple& t, RoutingContext& ctx) {
  return to_hash_node(t, ctx);
}

Destinations route_prpd(Side side, const Tuple& t, RoutingContext& ctx) {
  if (!ctx.is_skewed(t.key)) return to_hash_node(t, ctx);
  return side == Side::kProbe ? single_skewed(ctx.origin) : broadcast(ctx);
}

Destinations route_sfr(Side side, const Tuple& t, RoutingContext& ctx) {
  if (!ctx.is_skewed(t.key)) return to_hash_node(t, ctx);
  const SfrGrid& g = ctx.grid;
  Destinations d;
  d.skew_path = true;
  d.replicated = true;
  if (side == Side::kBuild) {
    const uint32_t row = sfr_build_row(t, g);
    for (uint32_t c = 0; c < g.cols; ++c) d.nodes.push_back(row * g.cols + c);
    if (ctx.build_hash_copy) {
      const NodeId q = hash_node(t.key, ctx.n);
      if (g.row_of(q) != row) d.nodes.push_back(q);
    }
  } else {
    const uint32_t col = sfr_probe_col(t, g);
    for (uint32_t r = 0; r < g.rows; ++r) d.nodes.push_back(r * g.cols + col);
  }
  return d;
}

Destinations route_pnr(Side side, const Tuple& t, RoutingContext& ctx) {
  if (!ctx.is_skewed(t.key)) return to_hash_node(t, ctx);
  if (side == Side::kBuild) return broadcast(ctx);
  uint32_t& cursor = ctx.pnr_cursor[t.key];
  const NodeId target = cursor;
  cursor = (cursor + 1) % ctx.n;
  return single_skewed(target);
}

Destinations route_bppr(Side side, const Tuple& t, RoutingContext& ctx) {
  // Build tuples are never replicated here; nodes that receive skewed probes
  // pull them from the hash node.
  if (side == Side::kBuild || !ctx.is_skewed(t.key)) return to_hash_node(t, ctx);
  if (!ctx.bppr) throw std::logic_error("route_bppr: missing BPPR state");
  return single_skewed(ctx.bppr->route_skewed(t.key));
}

Destinations route(StrategyKind strategy, Side side, const Tuple& t, RoutingContext& ctx) {
  switch (strategy) {
    case StrategyKind::kGraHJ:
      return route_grahj(side, t, ctx);
    case StrategyKind::kPRPD:
      return route_prpd(side, t, ctx);
    case StrategyKind::kSFR:
      return route_sfr(side, t, ctx);
    case StrategyKind::kPnR:
      return route_pnr(side, t, ctx);
    case StrategyKind::kBPPR:
      return route_bppr(side, t, ctx);
  }
  throw std::invalid_argument("route: bad strategy");
}

}  // namespace balajoin
