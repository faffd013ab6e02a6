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

#include <iosfwd>
#include <string>
#include <vector>

#include "balajoin/datagen.h"
#include "balajoin/simulator.h"

namespace balajoin {

// Result tuples per second of model time. Throws std::invalid_argument if
// elapsed_seconds is not positive.
double throughput(const SimReport& report);

// Balance factor over the per-node skewed_received counts.
double global_balance(const SimReport& report);

struct Verdict {
  std::string check;
  bool pass = false;
  std::string detail;
};

// Recomputes the report's claims independently: result count and digest
// against the single-node join, byte totals from the delivery log, and the
// global balance factor from the routing trace. Throws
// std::invalid_argument when the report carries no trace.
std::vector<Verdict> verify_report(const SimReport& report, const Workload& workload);

bool all_pass(const std::vector<Verdict>& verdicts);

// One summary row per report:
// strategy,n,bandwidth,z,ratio,epsilon,theta,seed,result_count,elapsed_s,
// throughput,total_bytes,B_global
std::string summary_header();
std::string summary_row(const SimReport& report);

enum class SweepAxis : uint8_t { kBandwidth, kEpsilon, kZipf, kRsRatio, kNodes };

std::string_view to_string(SweepAxis a);
// "bandwidth" | "epsilon" | "zipf" | "rs_ratio" | "nodes".
SweepAxis parse_sweep_axis(std::string_view name);

struct SweepPoint {
  double value = 0.0;
  SimReport report;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kBandwidth;
  std::vector<SweepPoint> points;

  // Orders points by (value, strategy, seed).
  void sort();
};

// Columns: axis,value followed by the summary columns.
void write_sweep_csv(const SweepResult& sweep, std::ostream& out);

}  // namespace balajoin
