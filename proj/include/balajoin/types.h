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

#include <compare>
#include <cstdint>
#include <functional>
#include <string_view>

namespace balajoin {

using Key = uint64_t;
using NodeId = uint32_t;

enum class Side : uint8_t { kBuild, kProbe };

std::string_view to_string(Side side);

// Globally unique row identity: the node a tuple originates from plus its
// position in that node's sequence counter (shared by both sides).
struct RowId {
  NodeId node = 0;
  uint32_t seq = 0;

  uint64_t packed() const { return (static_cast<uint64_t>(node) << 32) | seq; }
  static RowId unpack(uint64_t v) {
    return RowId{static_cast<NodeId>(v >> 32), static_cast<uint32_t>(v)};
  }

  friend auto operator<=>(const RowId&, const RowId&) = default;
};

struct Tuple {
  Key key = 0;
  RowId rowid;
  Side side = Side::kProbe;

  friend bool operator==(const Tuple&, const Tuple&) = default;
};

// One row of a join result: (build rowid, probe rowid).
struct ResultPair {
  RowId build;
  RowId probe;

  friend auto operator<=>(const ResultPair&, const ResultPair&) = default;
};

}  // namespace balajoin

template <>
struct std::hash<balajoin::RowId> {
  size_t operator()(const balajoin::RowId& r) const noexcept {
    return std::hash<uint64_t>{}(r.packed());
  }
};
