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


#include "balajoin/experiment.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>
#include <thread>

namespace balajoin {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw std::invalid_argument("bad value for " + std::string(key) + ": '" + std::string(value) +
                              "'");
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  value = trim(value);
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    bad_value(key, value);
  }
  return out;
}

// A real number or a fraction such as "2/3".
double parse_ratio(std::string_view key, std::string_view value) {
  const auto slash = value.find('/');
  if (slash == std::string_view::npos) return parse_number<double>(key, value);
  const double num = parse_number<double>(key, value.substr(0, slash));
  const double den = parse_number<double>(key, value.substr(slash + 1));
  if (den == 0.0) bad_value(key, value);
  return num / den;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value);
}

Placement parse_placement(std::string_view key, std::string_view value) {
  if (value == "uniform") return Placement::kUniform;
  if (value == "concentrated") return Placement::kConcentratedSkew;
  bad_value(key, value);
}

Arrival parse_arrival(std::string_view key, std::string_view value) {
  if (value == "interleaved") return Arrival::kInterleaved;
  if (value == "clustered") return Arrival::kClusteredByKey;
  bad_value(key, value);
}

BalanceScope parse_scope(std::string_view key, std::string_view value) {
  if (value == "all") return BalanceScope::kAllNodes;
  if (value == "active") return BalanceScope::kActiveNodes;
  bad_value(key, value);
}

std::vector<StrategyKind> parse_strategies(std::string_view value) {
  if (value == "all") return {kAllStrategies.begin(), kAllStrategies.end()};
  std::vector<StrategyKind> out;
  for (std::string_view name : split(value, ',')) {
    const StrategyKind s = parse_strategy(name);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (strategies.empty()) throw std::invalid_argument("config: no strategies");
  if (seeds.empty()) throw std::invalid_argument("config: no seeds");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("config: epsilon");
  if (!(detector.theta > 0.0 && detector.theta < 1.0)) throw std::invalid_argument("config: theta");
  if (detector.capacity == 0) throw std::invalid_argument("config: detector.k must be >= 1");
  cluster.validate();
  cost.validate();
  if (!workload_csv) {
    WorkloadConfig w = workload;
    w.n_nodes = cluster.n;
    w.validate();
  }
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  WorkloadConfig& w = cfg.workload;
  CostModel& c = cfg.cost;
  if (key == "workload.s_count") {
    w.s_count = parse_number<uint64_t>(key, value);
  } else if (key == "workload.rs_ratio") {
    w.rs_ratio = parse_ratio(key, value);
  } else if (key == "workload.universe") {
    w.universe = parse_number<uint64_t>(key, value);
  } else if (key == "workload.z") {
    w.zipf_z = parse_number<double>(key, value);
  } else if (key == "workload.placement") {
    w.placement = parse_placement(key, value);
  } else if (key == "workload.skew_node") {
    w.skew_node = parse_number<NodeId>(key, value);
  } else if (key == "workload.arrival") {
    w.arrival = parse_arrival(key, value);
  } else if (key == "workload.seed") {
    cfg.seeds = {parse_number<uint64_t>(key, value)};
  } else if (key == "workload.theta_gen") {
    w.theta_gen = parse_number<double>(key, value);
  } else if (key == "workload.csv") {
    cfg.workload_csv = std::filesystem::path(std::string(value));
  } else if (key == "cluster.n" || key == "workload.n_nodes") {
    cfg.cluster.n = parse_number<uint32_t>(key, value);
  } else if (key == "cluster.response_node") {
    cfg.cluster.response_node = parse_number<NodeId>(key, value);
  } else if (key == "cost.bandwidth_mbps") {
    c.bandwidth_mbps = parse_number<double>(key, value);
  } else if (key == "cost.tuple_wire_bytes") {
    c.tuple_wire_bytes = parse_number<uint32_t>(key, value);
  } else if (key == "cost.pull_request_bytes") {
    c.pull_request_bytes = parse_number<uint32_t>(key, value);
  } else if (key == "cost.count_bytes") {
    c.count_bytes = parse_number<uint32_t>(key, value);
  } else if (key == "cost.sketch_record_bytes") {
    c.sketch_record_bytes = parse_number<uint32_t>(key, value);
  } else if (key == "cost.c_build") {
    c.c_build = parse_number<double>(key, value);
  } else if (key == "cost.c_probe") {
    c.c_probe = parse_number<double>(key, value);
  } else if (key == "cost.c_result") {
    c.c_result = parse_number<double>(key, value);
  } else if (key == "cost.detect_cost") {
    c.detect_cost = parse_number<double>(key, value);
  } else if (key == "run.strategies" || key == "run.strategy") {
    cfg.strategies = parse_strategies(value);
  } else if (key == "run.detector") {
    cfg.mode = parse_detector_mode(value);
  } else if (key == "run.epsilon") {
    cfg.epsilon = parse_number<double>(key, value);
  } else if (key == "run.scope") {
    cfg.scope = parse_scope(key, value);
  } else if (key == "run.seeds") {
    cfg.seeds = parse_seed_list(value);
  } else if (key == "run.out") {
    cfg.out = std::string(value);
  } else if (key == "run.trace") {
    cfg.record_trace = parse_bool(key, value);
  } else if (key == "detector.theta") {
    cfg.detector.theta = parse_number<double>(key, value);
  } else if (key == "detector.k") {
    cfg.detector.capacity = parse_number<size_t>(key, value);
  } else if (key == "detector.warmup") {
    cfg.detector.warmup = parse_number<uint64_t>(key, value);
  } else {
    throw std::invalid_argument("unknown config key: " + std::string(key));
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_setting(cfg, trim(text.substr(0, eq)), text.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  return parse_config(in);
}

std::vector<uint64_t> parse_seed_list(std::string_view text) {
  std::vector<uint64_t> seeds;
  for (std::string_view part : split(text, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string_view::npos) {
      seeds.push_back(parse_number<uint64_t>("seeds", part));
      continue;
    }
    const auto lo = parse_number<uint64_t>("seeds", part.substr(0, dots));
    const auto hi = parse_number<uint64_t>("seeds", part.substr(dots + 2));
    if (hi < lo) bad_value("seeds", part);
    for (uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

std::vector<double> parse_value_list(std::string_view text) {
  std::vector<double> values;
  for (std::string_view part : split(text, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string_view::npos) {
      values.push_back(parse_number<double>("values", part));
      continue;
    }
    const auto colon = part.find(':', dots);
    if (colon == std::string_view::npos) bad_value("values", part);
    const double lo = parse_number<double>("values", part.substr(0, dots));
    const double hi = parse_number<double>("values", part.substr(dots + 2, colon - dots - 2));
    const double step = parse_number<double>("values", part.substr(colon + 1));
    if (!(step > 0.0) || hi < lo) bad_value("values", part);
    // Index-based stepping so 0.1..0.7:0.1 yields exactly seven points.
    const auto count = static_cast<int64_t>(std::floor((hi - lo) / step + 1e-9));
    for (int64_t i = 0; i <= count; ++i) values.push_back(lo + static_cast<double>(i) * step);
  }
  return values;
}

Workload make_workload(const ExperimentConfig& cfg, uint64_t seed) {
  if (cfg.workload_csv) return read_workload_csv(*cfg.workload_csv);
  WorkloadConfig w = cfg.workload;
  w.n_nodes = cfg.cluster.n;
  w.seed = seed;
  return build_workload(w);
}

SimConfig make_sim_config(const ExperimentConfig& cfg, StrategyKind strategy, uint64_t seed) {
  SimConfig sim;
  sim.strategy = strategy;
  sim.mode = cfg.mode;
  sim.cluster = cfg.cluster;
  sim.cost = cfg.cost;
  sim.detector = cfg.detector;
  sim.epsilon = cfg.epsilon;
  sim.scope = cfg.scope;
  sim.record_trace = cfg.record_trace;
  sim.labels = RunLabels{cfg.workload.zipf_z, cfg.workload.rs_ratio, seed};
  return sim;
}

std::vector<SimReport> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<SimReport> reports;
  for (uint64_t seed : cfg.seeds) {
    const Workload w = make_workload(cfg, seed);
    for (StrategyKind s : cfg.strategies) reports.push_back(run(w, make_sim_config(cfg, s, seed)));
  }
  return reports;
}

void apply_axis(ExperimentConfig& cfg, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::kBandwidth:
      cfg.cost.bandwidth_mbps = value;
      break;
    case SweepAxis::kEpsilon:
      cfg.epsilon = value;
      break;
    case SweepAxis::kZipf:
      cfg.workload.zipf_z = value;
      break;
    case SweepAxis::kRsRatio:
      cfg.workload.rs_ratio = value;
      break;
    case SweepAxis::kNodes:
      if (value < 2 || value != std::floor(value)) {
        throw std::invalid_argument("nodes axis needs integers >= 2");
      }
      cfg.cluster.n = static_cast<uint32_t>(value);
      break;
  }
}

SweepResult run_sweep(const ExperimentConfig& cfg, SweepAxis axis,
                      const std::vector<double>& values, unsigned parallel) {
  std::vector<ExperimentConfig> points;
  for (double v : values) {
    ExperimentConfig point = cfg;
    apply_axis(point, axis, v);
    point.validate();
    points.push_back(std::move(point));
  }

  std::vector<std::vector<SimReport>> results(points.size());
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (size_t i = next++; i < points.size() && !failed; i = next++) {
      try {
        results[i] = run_experiment(points[i]);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(parallel, points.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  SweepResult sweep;
  sweep.axis = axis;
  for (size_t i = 0; i < points.size(); ++i) {
    for (SimReport& r : results[i]) sweep.points.push_back({values[i], std::move(r)});
  }
  sweep.sort();
  return sweep;
}

}  // namespace balajoin
