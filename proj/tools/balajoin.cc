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


// Batch experiment runner for the simulated cluster.
//
//   balajoin gen    --config exp.conf --out workload.csv
//   balajoin run    --config exp.conf [--seeds 1..5] [--out reports.json]
//   balajoin sweep  --config exp.conf --axis bandwidth --values 10..300:50 [--parallel 4]
//   balajoin verify reports.json workload.csv
//   balajoin report reports.json [--out summary.csv]
//
// Exit status: 0 on success, 1 on a usage or input error, 2 when a
// verification check fails.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "balajoin/datagen.h"
#include "balajoin/experiment.h"
#include "balajoin/metrics.h"
#include "balajoin/report_io.h"

namespace {

using namespace balajoin;

constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;

struct Options {
  std::string config;
  std::string out;
  std::string seeds;
  std::string axis;
  std::string values;
  unsigned parallel = 1;
  std::string report;
  std::string workload;
};

ExperimentConfig load(const Options& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (!o.seeds.empty()) cfg.seeds = parse_seed_list(o.seeds);
  if (!o.out.empty()) cfg.out = o.out;
  return cfg;
}

// Writes to the file at `path`, or standard output when empty.
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  fn(out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

int cmd_gen(const Options& o) {
  ExperimentConfig cfg = load(o);
  cfg.validate();
  if (cfg.seeds.size() != 1) throw std::invalid_argument("gen takes exactly one seed");
  if (cfg.out.empty()) throw std::invalid_argument("gen needs --out or run.out");
  const Workload w = make_workload(cfg, cfg.seeds.front());
  write_workload_csv(w, std::filesystem::path(cfg.out));
  std::fprintf(stderr, "wrote %llu build + %llu probe tuples to %s\n",
               static_cast<unsigned long long>(w.build_size()),
               static_cast<unsigned long long>(w.probe_size()), cfg.out.c_str());
  return 0;
}

int cmd_run(const Options& o) {
  ExperimentConfig cfg = load(o);
  // Reports written to disk carry their trace so `verify` can recheck them.
  if (!cfg.out.empty()) cfg.record_trace = true;
  const std::vector<SimReport> reports = run_experiment(cfg);
  std::cout << summary_header() << '\n';
  for (const SimReport& r : reports) std::cout << summary_row(r) << '\n';
  if (!cfg.out.empty()) write_reports(reports, cfg.out);
  return 0;
}

int cmd_sweep(const Options& o) {
  ExperimentConfig cfg = load(o);
  const SweepAxis axis = parse_sweep_axis(o.axis);
  const std::vector<double> values = parse_value_list(o.values);
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  const SweepResult sweep = run_sweep(cfg, axis, values, o.parallel);
  emit(cfg.out, [&](std::ostream& out) { write_sweep_csv(sweep, out); });
  return 0;
}

int cmd_verify(const Options& o) {
  const std::vector<SimReport> reports = read_reports(o.report);
  const Workload w = read_workload_csv(std::filesystem::path(o.workload));
  bool ok = !reports.empty();
  for (size_t i = 0; i < reports.size(); ++i) {
    const SimReport& r = reports[i];
    if (!r.trace) {
      std::printf("report %zu (%s): FAIL trace_present\n", i,
                  std::string(to_string(r.strategy)).c_str());
      ok = false;
      continue;
    }
    for (const Verdict& v : verify_report(r, w)) {
      std::printf("report %zu (%s): %s %s  %s\n", i, std::string(to_string(r.strategy)).c_str(),
                  v.pass ? "PASS" : "FAIL", v.check.c_str(), v.detail.c_str());
      ok &= v.pass;
    }
  }
  return ok ? 0 : kExitVerifyFailed;
}

int cmd_report(const Options& o) {
  const std::vector<SimReport> reports = read_reports(o.report);
  emit(o.out, [&](std::ostream& out) {
    out << summary_header() << '\n';
    for (const SimReport& r : reports) out << summary_row(r) << '\n';
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skew-aware distributed hash join simulator"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Generate a workload and write it as CSV");
  gen->add_option("--config", o.config, "Experiment config (key=value)")->required();
  gen->add_option("--out", o.out, "Output CSV path");
  gen->add_option("--seeds", o.seeds, "Seed to generate with");

  auto* run = app.add_subcommand("run", "Run every configured strategy and seed");
  run->add_option("--config", o.config, "Experiment config (key=value)")->required();
  run->add_option("--out", o.out, "Write full JSON reports here");
  run->add_option("--seeds", o.seeds, "Seed list, e.g. 1,2,3 or 1..20");

  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter axis");
  sweep->add_option("--config", o.config, "Experiment config (key=value)")->required();
  sweep->add_option("--axis", o.axis, "bandwidth | epsilon | zipf | rs_ratio | nodes")
      ->required();
  sweep->add_option("--values", o.values, "Values, e.g. 0.1,0.3 or 10..300:50")->required();
  sweep->add_option("--out", o.out, "Output CSV path (default stdout)");
  sweep->add_option("--seeds", o.seeds, "Seed list");
  sweep->add_option("--parallel", o.parallel, "Worker threads")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Recheck reports against their workload");
  verify->add_option("report", o.report, "JSON report file")->required();
  verify->add_option("workload", o.workload, "Workload CSV")->required();

  auto* report = app.add_subcommand("report", "Summarize a JSON report file as CSV");
  report->add_option("report", o.report, "JSON report file")->required();
  report->add_option("--out", o.out, "Output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(o);
    if (*run) return cmd_run(o);
    if (*sweep) return cmd_sweep(o);
    if (*verify) return cmd_verify(o);
    if (*report) return cmd_report(o);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "balajoin: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
