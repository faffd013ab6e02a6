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


#include "balajoin/report_io.h"

#include <fstream>
#include <stdexcept>

namespace balajoin {

using nlohmann::json;

namespace {

constexpr std::string_view kModelCaveat =
    "elapsed_seconds is model time: max over nodes of serialized communication "
    "plus compute, with no overlap";

json ledger_to_json(const NodeLedger& l) {
  return json{{"bytes_sent", l.bytes_sent},         {"bytes_received", l.bytes_received},
              {"build_inserted", l.build_inserted}, {"probe_processed", l.probe_processed},
              {"detector_observes", l.detector_observes},
              {"skewed_received", l.skewed_received}, {"result_count", l.result_count}};
}

NodeLedger ledger_from_json(const json& j) {
  NodeLedger l;
  l.bytes_sent = j.at("bytes_sent").get<uint64_t>();
  l.bytes_received = j.at("bytes_received").get<uint64_t>();
  l.build_inserted = j.at("build_inserted").get<uint64_t>();
  l.probe_processed = j.at("probe_processed").get<uint64_t>();
  l.detector_observes = j.at("detector_observes").get<uint64_t>();
  l.skewed_received = j.at("skewed_received").get<uint64_t>();
  l.result_count = j.at("result_count").get<uint64_t>();
  return l;
}

// Traces are stored column-wise to keep files compact.
json trace_to_json(const SimTrace& t) {
  json routes = json::object();
  std::vector<uint64_t> rowid;
  std::vector<NodeId> origin, target;
  std::vector<uint32_t> u_size;
  for (const RouteTraceEntry& e : t.routes) {
    rowid.push_back(e.rowid.packed());
    origin.push_back(e.origin);
    target.push_back(e.target);
    u_size.push_back(e.u_size);
  }
  routes["rowid"] = rowid;
  routes["origin"] = origin;
  routes["target"] = target;
  routes["u_size"] = u_size;

  json deliveries = json::object();
  std::vector<NodeId> src, dst;
  std::vector<uint32_t> bytes;
  std::vector<int> kind;
  for (const DeliveryEvent& d : t.deliveries) {
    src.push_back(d.src);
    dst.push_back(d.dst);
    bytes.push_back(d.bytes);
    kind.push_back(static_cast<int>(d.kind));
  }
  deliveries["src"] = src;
  deliveries["dst"] = dst;
  deliveries["bytes"] = bytes;
  deliveries["kind"] = kind;
  return json{{"routes", routes}, {"deliveries", deliveries}};
}

SimTrace trace_from_json(const json& j) {
  SimTrace t;
  const json& r = j.at("routes");
  const auto rowid = r.at("rowid").get<std::vector<uint64_t>>();
  const auto origin = r.at("origin").get<std::vector<NodeId>>();
  const auto target = r.at("target").get<std::vector<NodeId>>();
  const auto u_size = r.at("u_size").get<std::vector<uint32_t>>();
  if (origin.size() != rowid.size() || target.size() != rowid.size() ||
      u_size.size() != rowid.size()) {
    throw std::invalid_argument("report: ragged route trace");
  }
  for (size_t i = 0; i < rowid.size(); ++i) {
    t.routes.push_back({RowId::unpack(rowid[i]), origin[i], target[i], u_size[i]});
  }
  const json& d = j.at("deliveries");
  const auto src = d.at("src").get<std::vector<NodeId>>();
  const auto dst = d.at("dst").get<std::vector<NodeId>>();
  const auto bytes = d.at("bytes").get<std::vector<uint32_t>>();
  const auto kind = d.at("kind").get<std::vector<int>>();
  if (dst.size() != src.size() || bytes.size() != src.size() || kind.size() != src.size()) {
    throw std::invalid_argument("report: ragged delivery trace");
  }
  for (size_t i = 0; i < src.size(); ++i) {
    if (kind[i] < 0 || kind[i] > static_cast<int>(DeliveryKind::kCount)) {
      throw std::invalid_argument("report: bad delivery kind");
    }
    t.deliveries.push_back({src[i], dst[i], bytes[i], static_cast<DeliveryKind>(kind[i])});
  }
  return t;
}

}  // namespace

json report_to_json(const SimReport& r) {
  json j;
  j["strategy"] = std::string(to_string(r.strategy));
  j["detector_mode"] = std::string(to_string(r.mode));
  j["n"] = r.n;
  j["bandwidth_mbps"] = r.bandwidth_mbps;
  j["epsilon"] = r.epsilon;
  j["theta"] = r.theta;
  j["zipf_z"] = r.labels.zipf_z;
  j["rs_ratio"] = r.labels.rs_ratio;
  j["seed"] = r.labels.seed;
  j["model_caveat"] = std::string(kModelCaveat);

  json ledgers = json::array();
  for (const NodeLedger& l : r.ledgers) ledgers.push_back(ledger_to_json(l));
  j["ledgers"] = ledgers;
  j["total_result_count"] = r.total_result_count;
  j["total_network_bytes"] = r.total_network_bytes;
  j["elapsed_seconds"] = r.elapsed_seconds;
  j["global_balance_B"] = r.global_balance_B;
  j["detect_phase_seconds"] = r.detect_phase_seconds;
  j["merge_seconds"] = r.merge_seconds;

  json hist = json::array();
  for (const auto& [size, count] : r.u_histogram) hist.push_back({size, count});
  j["u_histogram"] = hist;
  j["max_local_balance"] = r.max_local_balance;
  j["route_ops"] = r.route_ops;
  j["pull_requests"] = r.pull_requests;
  j["pulled_tuples"] = r.pulled_tuples;
  j["forwarded_tuples"] = r.forwarded_tuples;
  j["skew_keys"] = r.skew_keys;
  j["digest"] = {r.digest.count, r.digest.fp_a, r.digest.fp_b};
  if (r.trace) j["trace"] = trace_to_json(*r.trace);
  return j;
}

SimReport report_from_json(const json& j) {
  SimReport r;
  r.strategy = parse_strategy(j.at("strategy").get<std::string>());
  r.mode = parse_detector_mode(j.at("detector_mode").get<std::string>());
  r.n = j.at("n").get<uint32_t>();
  r.bandwidth_mbps = j.at("bandwidth_mbps").get<double>();
  r.epsilon = j.at("epsilon").get<double>();
  r.theta = j.at("theta").get<double>();
  r.labels.zipf_z = j.at("zipf_z").get<double>();
  r.labels.rs_ratio = j.at("rs_ratio").get<double>();
  r.labels.seed = j.at("seed").get<uint64_t>();
  for (const json& l : j.at("ledgers")) r.ledgers.push_back(ledger_from_json(l));
  r.total_result_count = j.at("total_result_count").get<uint64_t>();
  r.total_network_bytes = j.at("total_network_bytes").get<uint64_t>();
  r.elapsed_seconds = j.at("elapsed_seconds").get<double>();
  r.global_balance_B = j.at("global_balance_B").get<double>();
  r.detect_phase_seconds = j.at("detect_phase_seconds").get<double>();
  r.merge_seconds = j.at("merge_seconds").get<double>();
  for (const json& h : j.at("u_histogram")) {
    r.u_histogram[h.at(0).get<size_t>()] = h.at(1).get<uint64_t>();
  }
  r.max_local_balance = j.at("max_local_balance").get<double>();
  r.route_ops = j.at("route_ops").get<uint64_t>();
  r.pull_requests = j.at("pull_requests").get<uint64_t>();
  r.pulled_tuples = j.at("pulled_tuples").get<uint64_t>();
  r.forwarded_tuples = j.at("forwarded_tuples").get<uint64_t>();
  r.skew_keys = j.at("skew_keys").get<uint64_t>();
  const json& d = j.at("digest");
  r.digest = ResultDigest{d.at(0).get<uint64_t>(), d.at(1).get<uint64_t>(), d.at(2).get<uint64_t>()};
  if (j.contains("trace")) r.trace = trace_from_json(j.at("trace"));
  return r;
}

void write_reports(const std::vector<SimReport>& reports, const std::filesystem::path& path) {
  json all = json::array();
  for (const SimReport& r : reports) all.push_back(report_to_json(r));
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << all.dump() << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<SimReport> read_reports(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json all;
  try {
    all = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("report " + path.string() + ": " + e.what());
  }
  std::vector<SimReport> reports;
  try {
    if (all.is_object()) {
      reports.push_back(report_from_json(all));
    } else {
      for (const json& j : all) reports.push_back(report_from_json(j));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument("report " + path.string() + ": " + e.what());
  }
  return reports;
}

}  // namespace balajoin
