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


#include <algorithm>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include <gtest/gtest.h>

#include "balajoin/hash.h"
#include "balajoin/strategies.h"

namespace balajoin {
namespace {

class FixedSkew : public SkewView {
 public:
  explicit FixedSkew(std::unordered_set<Key> keys) : keys_(std::move(keys)) {}
  bool is_skewed(Key key) const override { return keys_.contains(key); }

 private:
  std::unordered_set<Key> keys_;
};

Key key_with_hash_node(NodeId q, uint32_t n) {
  for (Key k = 0;; ++k) {
    if (hash_node(k, n) == q) return k;
  }
}

Tuple probe(Key key, uint32_t seq = 0, NodeId node = 0) {
  return Tuple{key, RowId{node, seq}, Side::kProbe};
}
Tuple build(Key key, uint32_t seq = 0, NodeId node = 0) {
  return Tuple{key, RowId{node, seq}, Side::kBuild};
}

std::vector<NodeId> nodes(const Destinations& d) { return {d.nodes.begin(), d.nodes.end()}; }

TEST(Strategies, NamesRoundTrip) {
  for (StrategyKind s : kAllStrategies) EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_THROW(parse_strategy("hash"), std::invalid_argument);
}

TEST(GraHJ, RoutesBothSidesToHashNode) {
  const Key k = key_with_hash_node(1, 3);
  auto ctx = make_routing_context(StrategyKind::kGraHJ, 3, 0, nullptr);
  EXPECT_EQ(nodes(route_grahj(Side::kBuild, build(k), ctx)), std::vector<NodeId>{1});
  EXPECT_EQ(nodes(route_grahj(Side::kProbe, probe(k), ctx)), std::vector<NodeId>{1});
}

TEST(Prpd, KeepsSkewedProbesLocalAndBroadcastsBuilds) {
  FixedSkew skew({5});
  auto ctx = make_routing_context(StrategyKind::kPRPD, 3, 2, &skew);
  const Destinations p = route_prpd(Side::kProbe, probe(5), ctx);
  EXPECT_EQ(nodes(p), std::vector<NodeId>{2});
  EXPECT_TRUE(p.skew_path);
  const Destinations b = route_prpd(Side::kBuild, build(5), ctx);
  EXPECT_EQ(nodes(b), (std::vector<NodeId>{0, 1, 2}));
  EXPECT_TRUE(b.replicated);
  EXPECT_EQ(nodes(route_prpd(Side::kProbe, probe(6), ctx)),
            std::vector<NodeId>{hash_node(6, 3)});
}

TEST(SfrGrid, NearestSquareFactorization) {
  EXPECT_EQ(SfrGrid::for_nodes(4).rows, 2u);
  EXPECT_EQ(SfrGrid::for_nodes(4).cols, 2u);
  EXPECT_EQ(SfrGrid::for_nodes(6).rows, 2u);
  EXPECT_EQ(SfrGrid::for_nodes(6).cols, 3u);
  EXPECT_EQ(SfrGrid::for_nodes(3).rows, 1u);
  EXPECT_EQ(SfrGrid::for_nodes(3).cols, 3u);
  EXPECT_EQ(SfrGrid::for_nodes(9).rows, 3u);
}

TEST(Sfr, RowAndColumnMeetAtOneNode) {
  FixedSkew skew({5});
  auto ctx = make_routing_context(StrategyKind::kSFR, 4, 0, &skew);
  const SfrGrid& g = ctx.grid;
  for (uint32_t bs = 0; bs < 20; ++bs) {
    const Tuple b = build(5, bs);
    const auto bn = nodes(route_sfr(Side::kBuild, b, ctx));
    const uint32_t row = sfr_build_row(b, g);
    EXPECT_EQ(bn, (std::vector<NodeId>{row * 2, row * 2 + 1}));
    for (uint32_t ps = 100; ps < 120; ++ps) {
      const Tuple p = probe(5, ps);
      const auto pn = nodes(route_sfr(Side::kProbe, p, ctx));
      const uint32_t col = sfr_probe_col(p, g);
      EXPECT_EQ(pn, (std::vector<NodeId>{col, 2 + col}));
      int meet = 0;
      for (NodeId x : bn) meet += std::count(pn.begin(), pn.end(), x);
      EXPECT_EQ(meet, 1);
    }
  }
}

TEST(Pnr, RoundRobinPerKey) {
  FixedSkew skew({5, 6});
  auto ctx = make_routing_context(StrategyKind::kPnR, 3, 1, &skew);
  std::vector<NodeId> got;
  for (int i = 0; i < 6; ++i) got.push_back(route_pnr(Side::kProbe, probe(5), ctx).nodes[0]);
  EXPECT_EQ(got, (std::vector<NodeId>{0, 1, 2, 0, 1, 2}));
  EXPECT_EQ(route_pnr(Side::kProbe, probe(6), ctx).nodes[0], 0u);
  EXPECT_EQ(nodes(route_pnr(Side::kBuild, build(5), ctx)), (std::vector<NodeId>{0, 1, 2}));
}

TEST(Bppr, BuildsAlwaysGoToHashNode) {
  FixedSkew skew({5});
  auto ctx = make_routing_context(StrategyKind::kBPPR, 3, 0, &skew);
  EXPECT_EQ(nodes(route_bppr(Side::kBuild, build(5), ctx)),
            std::vector<NodeId>{hash_node(5, 3)});
  const Destinations p = route_bppr(Side::kProbe, probe(5), ctx);
  EXPECT_TRUE(p.skew_path);
  EXPECT_EQ(nodes(p), std::vector<NodeId>{hash_node(5, 3)});
}

TEST(Bppr, NoSkewMeansGraHJ) {
  FixedSkew none({});
  auto bppr = make_routing_context(StrategyKind::kBPPR, 5, 2, &none);
  auto grahj = make_routing_context(StrategyKind::kGraHJ, 5, 2, &none);
  for (Key k = 0; k < 500; ++k) {
    for (Side s : {Side::kBuild, Side::kProbe}) {
      const Tuple t{k, RowId{2, static_cast<uint32_t>(k)}, s};
      EXPECT_EQ(nodes(route(StrategyKind::kBPPR, s, t, bppr)),
                nodes(route(StrategyKind::kGraHJ, s, t, grahj)));
    }
  }
}

TEST(Route, EveryDestinationIsInRange) {
  FixedSkew skew({0, 1, 2, 3});
  for (StrategyKind s : kAllStrategies) {
    for (uint32_t n : {2u, 3u, 4u, 7u, 8u}) {
      auto ctx = make_routing_context(s, n, n - 1, &skew);
      for (Key k = 0; k < 50; ++k) {
        for (Side side : {Side::kBuild, Side::kProbe}) {
          const Destinations d = route(s, side, Tuple{k, RowId{n - 1, static_cast<uint32_t>(k)}, side}, ctx);
          ASSERT_FALSE(d.nodes.empty());
          for (NodeId j : d.nodes) ASSERT_LT(j, n);
          if (side == Side::kProbe && s != StrategyKind::kSFR) ASSERT_EQ(d.nodes.size(), 1u);
        }
      }
    }
  }
}

}  // namespace
}  // namespace balajoin
