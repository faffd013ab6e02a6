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


#include "balajoin/metrics.h"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "balajoin/bppr.h"

namespace balajoin {

double throughput(const SimReport& report) {
  if (!(report.elapsed_seconds > 0.0)) {
    throw std::invalid_argument("throughput: elapsed time must be positive");
  }
  return static_cast<double>(report.total_result_count) / report.elapsed_seconds;
}

double global_balance(const SimReport& report) {
  if (report.ledgers.empty()) return 0.0;
  std::vector<uint64_t> skewed;
  skewed.reserve(report.ledgers.size());
  for (const NodeLedger& l : report.ledgers) skewed.push_back(l.skewed_received);
  return balance_factor(skewed);
}

namespace {

Verdict make(std::string check, bool pass, std::string detail) {
  return Verdict{std::move(check), pass, std::move(detail)};
}

std::string expected(uint64_t got, uint64_t want) {
  return "report " + std::to_string(got) + ", recomputed " + std::to_string(want);
}

}  // namespace

std::vector<Verdict> verify_report(const SimReport& report, const Workload& workload) {
  if (!report.trace) throw std::invalid_argument("verify_report: report has no trace");
  const SimTrace& trace = *report.trace;
  const size_t n = report.ledgers.size();
  std::vector<Verdict> out;

  out.push_back(make("node_count", n == workload.n_nodes && n == report.n,
                     "ledgers " + std::to_string(n) + ", workload " +
                         std::to_string(workload.n_nodes)));
  if (!out.back().pass) return out;

  const uint64_t join_size = oracle_join_size(workload);
  out.push_back(make("result_count", report.total_result_count == join_size,
                     expected(report.total_result_count, join_size)));

  uint64_t ledger_results = 0;
  for (const NodeLedger& l : report.ledgers) ledger_results += l.result_count;
  out.push_back(make("result_union", ledger_results == report.total_result_count,
                     expected(report.total_result_count, ledger_results)));

  const ResultDigest digest = oracle_digest(workload);
  out.push_back(make("result_multiset", report.digest == digest,
                     report.digest == digest ? "digest match" : "digest mismatch"));

  uint64_t sent = 0;
  uint64_t received = 0;
  for (const NodeLedger& l : report.ledgers) {
    sent += l.bytes_sent;
    received += l.bytes_received;
  }
  out.push_back(make("byte_conservation",
                     sent == received && sent == report.total_network_bytes,
                     "sent " + std::to_string(sent) + ", received " + std::to_string(received) +
                         ", total " + std::to_string(report.total_network_bytes)));

  std::vector<uint64_t> trace_sent(n, 0);
  std::vector<uint64_t> trace_received(n, 0);
  bool in_range = true;
  for (const DeliveryEvent& d : trace.deliveries) {
    if (d.src >= n || d.dst >= n || d.src == d.dst) {
      in_range = false;
      continue;
    }
    trace_sent[d.src] += d.bytes;
    trace_received[d.dst] += d.bytes;
  }
  std::string bad_nodes;
  for (size_t j = 0; j < n; ++j) {
    if (trace_sent[j] != report.ledgers[j].bytes_sent ||
        trace_received[j] != report.ledgers[j].bytes_received) {
      bad_nodes += " " + std::to_string(j);
    }
  }
  out.push_back(make("byte_recount", in_range && bad_nodes.empty(),
                     bad_nodes.empty() ? (in_range ? "per-node bytes match" : "bad delivery event")
                                       : "mismatch at node" + bad_nodes));

  std::vector<uint64_t> skewed(n, 0);
  for (const RouteTraceEntry& e : trace.routes) {
    if (e.target < n) ++skewed[e.target];
  }
  bool skew_match = true;
  for (size_t j = 0; j < n; ++j) skew_match &= skewed[j] == report.ledgers[j].skewed_received;
  const double b = balance_factor(skewed);
  out.push_back(make("balance_recompute", skew_match && b == report.global_balance_B,
                     "report " + std::to_string(report.global_balance_B) + ", recomputed " +
                         std::to_string(b)));

  out.push_back(make("elapsed_positive", report.elapsed_seconds > 0.0,
                     std::to_string(report.elapsed_seconds)));
  return out;
}

bool all_pass(const std::vector<Verdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::string summary_header() {
  return "strategy,n,bandwidth,z,ratio,epsilon,theta,seed,result_count,elapsed_s,throughput,"
         "total_bytes,B_global";
}

std::string summary_row(const SimReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%s,%u,%g,%g,%.6g,%g,%g,%llu,%llu,%.9g,%.9g,%llu,%.6f",
                std::string(to_string(r.strategy)).c_str(), r.n, r.bandwidth_mbps,
                r.labels.zipf_z, r.labels.rs_ratio, r.epsilon, r.theta,
                static_cast<unsigned long long>(r.labels.seed),
                static_cast<unsigned long long>(r.total_result_count), r.elapsed_seconds,
                r.elapsed_seconds > 0.0 ? throughput(r) : 0.0,
                static_cast<unsigned long long>(r.total_network_bytes), r.global_balance_B);
  return buf;
}

std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::kBandwidth:
      return "bandwidth";
    case SweepAxis::kEpsilon:
      return "epsilon";
    case SweepAxis::kZipf:
      return "zipf";
    case SweepAxis::kRsRatio:
      return "rs_ratio";
    case SweepAxis::kNodes:
      return "nodes";
  }
  return "unknown";
}

SweepAxis parse_sweep_axis(std::string_view name) {
  for (auto a : {SweepAxis::kBandwidth, SweepAxis::kEpsilon, SweepAxis::kZipf,
                 SweepAxis::kRsRatio, SweepAxis::kNodes}) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown sweep axis: " + std::string(name));
}

void SweepResult::sort() {
  std::stable_sort(points.begin(), points.end(), [](const SweepPoint& a, const SweepPoint& b) {
    return std::make_tuple(a.value, a.report.strategy, a.report.labels.seed) <
           std::make_tuple(b.value, b.report.strategy, b.report.labels.seed);
  });
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
  out << "axis,value," << summary_header() << '\n';
  for (const SweepPoint& p : sweep.points) {
    out << to_string(sweep.axis) << ',' << p.value << ',' << summary_row(p.report) << '\n';
  }
}

}  // namespace balajoin
