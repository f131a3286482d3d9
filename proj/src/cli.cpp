/* Copyright 2026 The recperf Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "recperf/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "recperf/accounting.hpp"
#include "recperf/collectives.hpp"
#include "recperf/config_io.hpp"
#include "recperf/error.hpp"
#include "recperf/format.hpp"
#include "recperf/memory_model.hpp"
#include "recperf/scenario.hpp"
#include "recperf/step_engine.hpp"
#include "recperf/sweep.hpp"

namespace recperf {

namespace {

constexpr const char* kVersion = "recperf 0.1.0";

const std::vector<std::string> kModes = {"inference", "training"};
const std::vector<std::string> kShardings = {"unsharded", "sharded",
                                             "fully_sharded"};
const std::vector<std::string> kPolicies = {"pipelined", "sequential"};
const std::vector<std::string> kFormats = {"csv", "json"};

// Scenario-shaping flags shared by `run` and `sweep`. Precedence is
// flags > config file > preset defaults.
struct ScenarioFlags {
  std::string config;
  std::string system;
  std::string model;
  std::string mode;
  std::string sharding;
  std::string policy;
  bool imbalanced = false;
  std::optional<int> chips;
  std::optional<std::int64_t> batch;
  std::optional<double> latency;
  std::optional<double> bandwidth;
  std::optional<double> efficiency;
  std::optional<double> mem_bw;
};

void AddScenarioFlags(CLI::App* app, ScenarioFlags& f, bool with_cc) {
  app->add_option("-c,--config", f.config, "Scenario YAML file")
      ->check(CLI::ExistingFile);
  app->add_option("-p,--preset,--system", f.system, "System preset name");
  app->add_option("-m,--model", f.model, "Model preset name");
  app->add_option("--mode", f.mode, "inference | training")
      ->check(CLI::IsMember(kModes));
  app->add_option("--sharding", f.sharding, "unsharded | sharded")
      ->check(CLI::IsMember(kShardings));
  app->add_option("--policy", f.policy, "pipelined | sequential")
      ->check(CLI::IsMember(kPolicies));
  app->add_flag("--imbalanced", f.imbalanced,
                "Charge whole-table placement imbalance (unsharded only)");
  app->add_option("--chips", f.chips, "Number of chips");
  app->add_option("--batch", f.batch, "Samples per query");
  if (with_cc) {
    app->add_option("--latency", f.latency, "CC latency for every op (s)");
    app->add_option("--bandwidth", f.bandwidth, "CC bandwidth per chip (B/s)");
  }
  app->add_option("--link-efficiency", f.efficiency, "CC link efficiency");
  app->add_option("--mem-bw", f.mem_bw,
                  "Pin the fast memory's effective bandwidth (B/s)");
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IO_ERROR", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void PinFastMemory(Scenario& s, double bw) {
  for (auto& mem : s.system.chip.memory) {
    if (mem.role == MemoryRole::kFast) mem.effective_bw_override = bw;
  }
}

Scenario BuildScenario(const ScenarioFlags& f) {
  Scenario s;
  if (!f.config.empty()) {
    s = parse_scenario(ReadFile(f.config));
  } else if (f.system.empty() || f.model.empty()) {
    throw Error("USAGE", "give --config, or both --preset and --model");
  }
  if (!f.system.empty()) s.system = system_preset(f.system);
  if (!f.model.empty()) s.model = model_preset(f.model);
  if (!f.mode.empty()) s.mode = mode_from_string(f.mode);
  if (!f.sharding.empty()) s.sharding.kind = sharding_from_string(f.sharding);
  if (!f.policy.empty()) s.overlap_policy = overlap_policy_from_string(f.policy);
  if (f.imbalanced) s.sharding.assume_balanced = false;
  if (f.chips) s.system.num_chips = *f.chips;
  if (f.batch) s.model.batch_size = *f.batch;
  if (f.latency) {
    s.system.chip.cc.latency_by_op = LatencyTable(*f.latency);
  }
  if (f.bandwidth) s.system.chip.cc.per_chip_bandwidth = *f.bandwidth;
  if (f.efficiency) s.system.chip.cc.link_efficiency = *f.efficiency;
  if (f.mem_bw) PinFastMemory(s, *f.mem_bw);
  require_valid(s);
  return s;
}

// Writes to `path`, or to `out` when the path is empty or "-".
template <typename Fn>
void WriteOutput(const std::string& path, std::ostream& out, Fn&& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("IO_ERROR", "cannot write " + path);
  write(file);
  if (!file) throw Error("IO_ERROR", "write failed: " + path);
}

void Explain(const Scenario& s, std::ostream& err) {
  const PhaseVolumes v = message_volumes(s);
  const StepTerms t = step_terms(s, v);
  const auto row = [&](const char* name, double value, const char* unit) {
    err << "  " << std::left << std::setw(24) << name << FormatDouble(value)
        << ' ' << unit << '\n';
  };
  err << "scenario: " << to_string(s.mode) << ", "
      << to_string(s.sharding.kind) << ", " << to_string(s.overlap_policy)
      << ", " << s.system.num_chips << " chips, batch " << s.model.batch_size
      << '\n';
  err << "per-chip volumes:\n";
  row("idx_exchange_payload", v.idx_exchange_payload, "B (all_to_all)");
  row("lookup_bytes", v.lookup_bytes, "B");
  row("pool_flops", v.pool_flops, "FLOP");
  row("embed_exchange_payload", v.embed_exchange_payload, "B");
  err << "  " << std::left << std::setw(24) << "embed_exchange_kind"
      << to_string(v.embed_exchange_kind) << '\n';
  row("fwd_dense_flops", v.fwd_dense_flops, "FLOP");
  if (s.mode == Mode::kTraining) {
    row("grad_exchange_payload", v.grad_exchange_payload, "B");
    err << "  " << std::left << std::setw(24) << "grad_exchange_kind"
        << to_string(v.grad_exchange_kind) << '\n';
    row("expand_flops", v.expand_flops, "FLOP");
    row("embed_write_bytes", v.embed_write_bytes, "B");
    row("dense_grad_payload", v.dense_grad_payload, "B (all_reduce)");
    row("bwd_dense_flops", v.bwd_dense_flops, "FLOP");
  }
  row("onchip_buffer_bytes", v.onchip_buffer_bytes,
      onchip_buffer_sufficient(s, v) ? "B (fits)" : "B (exceeds buffer)");
  err << "terms:\n";
  row("idx_latency", t.idx_latency, "s");
  row("idx_wire", t.idx_wire, "s");
  row("lookup", t.lookup, "s");
  row("exchange_latency", t.exchange_latency, "s");
  row("exchange_wire", t.exchange_wire, "s");
  row("fwd_compute", t.fwd_compute, "s");
  if (s.mode == Mode::kTraining) {
    row("grad_latency", t.grad_latency, "s");
    row("grad_wire", t.grad_wire, "s");
    row("write", t.write, "s");
    row("bwd_compute", t.bwd_compute, "s");
    row("allreduce_latency", t.allreduce_latency, "s");
    row("allreduce_wire", t.allreduce_wire, "s");
  }
  err << "composition:\n";
  if (s.overlap_policy == OverlapPolicy::kSequential) {
    err << "  step = sum of all terms\n";
  } else {
    err << "  forward = max(idx_latency + max(idx_wire, lookup, "
           "exchange_latency + exchange_wire), fwd_compute) = "
        << FormatDouble(compose_forward(t, OverlapPolicy::kPipelined))
        << " s\n";
    if (s.mode == Mode::kTraining) {
      err << "  step = forward + grad_latency + max(grad_wire, write) + "
             "max(bwd_compute, allreduce_latency + allreduce_wire) = "
          << FormatDouble(compose_training(t, OverlapPolicy::kPipelined))
          << " s\n";
    }
  }
}

int CodeToExit(const std::string& code) {
  if (code == "USAGE" || code == "AXIS_INVALID" || code == "UNKNOWN_FORMAT") {
    return kExitUsage;
  }
  return kExitValidation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Analytical upper-bound performance model for distributed "
               "recommendation inference and training",
               "recperf"};
  app.require_subcommand(1);
  bool show_version = false;
  app.add_flag("--version", show_version, "Print the version to stderr");

  // run
  ScenarioFlags run_flags;
  std::string run_output;
  bool explain = false;
  std::optional<double> sla_budget;
  double sla_percentile = 0.99;
  CLI::App* run = app.add_subcommand("run", "Estimate one scenario");
  AddScenarioFlags(run, run_flags, true);
  run->add_option("-o,--output", run_output, "Output file (default stdout)");
  run->add_flag("--explain", explain,
                "Print volumes, terms and the composition to stderr");
  run->add_option("--sla-budget", sla_budget, "Latency budget (s)");
  run->add_option("--sla-percentile", sla_percentile, "Percentile in (0, 1)");

  // sweep
  ScenarioFlags sweep_flags;
  double lat_min = 0.5e-6, lat_max = 10e-6, bw_min = 100e9, bw_max = 1000e9;
  int lat_points = 20, bw_points = 19, threads = 0;
  std::vector<double> latencies, bandwidths;
  std::vector<std::string> ops;
  std::string sweep_format = "csv", sweep_output, output_dir, label;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Evaluate a CC latency x bandwidth grid");
  AddScenarioFlags(sweep, sweep_flags, false);
  sweep->add_option("--lat-min", lat_min, "Smallest latency (s)");
  sweep->add_option("--lat-max", lat_max, "Largest latency (s)");
  sweep->add_option("--lat-points", lat_points, "Log-spaced latency points");
  sweep->add_option("--bw-min", bw_min, "Smallest bandwidth (B/s)");
  sweep->add_option("--bw-max", bw_max, "Largest bandwidth (B/s)");
  sweep->add_option("--bw-points", bw_points, "Linear bandwidth points");
  auto* lat_list = sweep->add_option("--latencies", latencies,
                                     "Explicit latency axis (s)")
                       ->delimiter(',');
  auto* bw_list = sweep->add_option("--bandwidths", bandwidths,
                                    "Explicit bandwidth axis (B/s)")
                      ->delimiter(',');
  lat_list->excludes(sweep->get_option("--lat-min"))
      ->excludes(sweep->get_option("--lat-max"))
      ->excludes(sweep->get_option("--lat-points"));
  bw_list->excludes(sweep->get_option("--bw-min"))
      ->excludes(sweep->get_option("--bw-max"))
      ->excludes(sweep->get_option("--bw-points"));
  sweep->add_option("--ops", ops, "Op kinds the latency axis overrides")
      ->delimiter(',')
      ->check(CLI::IsMember(
          {"all_to_all", "all_reduce", "reduce_scatter", "all_gather"}));
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");
  sweep->add_option("-f,--format", sweep_format)->check(CLI::IsMember(kFormats));
  auto* sweep_out =
      sweep->add_option("-o,--output", sweep_output, "Output file");
  auto* dir_opt = sweep->add_option(
      "--output-dir", output_dir,
      "Write <label>_<mode>_<sharding>.<format> into this directory");
  sweep->add_option("--label", label, "Scenario label for --output-dir")
      ->needs(dir_opt);
  sweep_out->excludes(dir_opt);

  // compare
  std::string baseline_name = "dgx2", candidate_name = "recspeed16";
  std::string baseline_config, candidate_config, compare_mode = "both";
  std::string compare_policy, compare_format = "csv", compare_output;
  std::optional<double> baseline_mem_bw, candidate_mem_bw;
  CLI::App* cmp = app.add_subcommand(
      "compare", "Speedup of a candidate system over a baseline");
  auto* bname = cmp->add_option("--baseline", baseline_name,
                                "Baseline system preset")
                    ->capture_default_str();
  auto* cname = cmp->add_option("--candidate", candidate_name,
                                "Candidate system preset")
                    ->capture_default_str();
  cmp->add_option("--baseline-config", baseline_config,
                  "Baseline scenario YAML (system and policy are used)")
      ->check(CLI::ExistingFile)
      ->excludes(bname);
  cmp->add_option("--candidate-config", candidate_config,
                  "Candidate scenario YAML (system and policy are used)")
      ->check(CLI::ExistingFile)
      ->excludes(cname);
  cmp->add_option("--mode", compare_mode, "inference | training | both")
      ->check(CLI::IsMember({"inference", "training", "both"}));
  cmp->add_option("--policy", compare_policy)->check(CLI::IsMember(kPolicies));
  cmp->add_option("--baseline-mem-bw", baseline_mem_bw,
                  "Pin the baseline fast memory bandwidth (B/s)");
  cmp->add_option("--candidate-mem-bw", candidate_mem_bw,
                  "Pin the candidate fast memory bandwidth (B/s)");
  cmp->add_option("-f,--format", compare_format)
      ->check(CLI::IsMember(kFormats));
  cmp->add_option("-o,--output", compare_output, "Output file");

  // calibrate
  std::string samples_path, calibrate_output;
  CLI::App* cal = app.add_subcommand(
      "calibrate", "Fit CC latency and bandwidth to measured samples");
  cal->add_option("-s,--samples", samples_path,
                  "CSV of payload_bytes,seconds rows")
      ->required()
      ->check(CLI::ExistingFile);
  cal->add_option("-o,--output", calibrate_output, "Output file");

  // presets
  bool timings = false, curves = false;
  CLI::App* presets = app.add_subcommand("presets", "List the preset catalog");
  auto* timings_flag =
      presets->add_flag("--timings", timings, "DRAM timing presets as CSV");
  presets->add_flag("--curves", curves,
                    "Effective bandwidth vs access size as CSV")
      ->excludes(timings_flag);

  std::vector<const char*> argv = {"recperf"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      // `--version` alone trips the required subcommand check.
      if (show_version && args.size() == 1) {
        err << kVersion << '\n';
        return kExitOk;
      }
      throw Error("USAGE", e.what());
    }
    if (show_version) err << kVersion << '\n';

    if (run->parsed()) {
      const Scenario s = BuildScenario(run_flags);
      if (explain) Explain(s, err);
      const StepEstimate e = estimate(s);
      std::optional<SlaResult> sla;
      if (sla_budget) sla = sla_check(e, sla_percentile, *sla_budget);
      WriteOutput(run_output, out, [&](std::ostream& os) {
        os << step_estimate_json(e) << '\n';
      });
      if (sla) {
        err << "sla: p" << FormatDouble(sla_percentile * 100) << " latency "
            << FormatDouble(sla->percentile_latency) << " s, budget "
            << FormatDouble(*sla_budget) << " s, "
            << (sla->pass ? "pass" : "miss") << '\n';
      }
      return kExitOk;
    }

    if (sweep->parsed()) {
      SweepGrid g;
      g.base = BuildScenario(sweep_flags);
      g.latency_axis = latencies.empty()
                           ? log_axis(lat_min, lat_max, lat_points)
                           : latencies;
      g.bandwidth_axis = bandwidths.empty()
                             ? linear_axis(bw_min, bw_max, bw_points)
                             : bandwidths;
      if (!(lat_min <= lat_max) || !(bw_min <= bw_max)) {
        throw Error("AXIS_INVALID", "axis range is reversed");
      }
      if (!ops.empty()) {
        g.vary_op_kinds.clear();
        for (const auto& op : ops) {
          g.vary_op_kinds.push_back(cc_op_kind_from_string(op));
        }
      }
      validate_grid(g);
      const auto rows = run_sweep(g, threads);
      const OutputFormat fmt = output_format_from_string(sweep_format);
      std::string path = sweep_output;
      if (!output_dir.empty()) {
        if (label.empty()) label = "scenario";
        path = (std::filesystem::path(output_dir) /
                (output_basename(label, g.base.mode, g.base.sharding.kind) +
                 "." + sweep_format))
                   .string();
      }
      WriteOutput(path, out, [&](std::ostream& os) { emit(rows, fmt, os); });
      return kExitOk;
    }

    if (cmp->parsed()) {
      const auto side = [&](const std::string& config, const std::string& name,
                            const std::optional<double>& mem_bw) {
        Scenario s;
        if (!config.empty()) {
          s = parse_scenario(ReadFile(config));
        } else {
          s.system = system_preset(name);
        }
        if (!compare_policy.empty()) {
          s.overlap_policy = overlap_policy_from_string(compare_policy);
        }
        if (mem_bw) PinFastMemory(s, *mem_bw);
        return s;
      };
      const Scenario base = side(baseline_config, baseline_name, baseline_mem_bw);
      const Scenario cand =
          side(candidate_config, candidate_name, candidate_mem_bw);
      std::vector<CompareConfig> configs;
      for (Mode m : {Mode::kInference, Mode::kTraining}) {
        if (compare_mode == "both" || compare_mode == to_string(m)) {
          const auto c = default_compare_configs(m);
          configs.insert(configs.end(), c.begin(), c.end());
        }
      }
      const auto rows = compare(base, cand, configs);
      const OutputFormat fmt = output_format_from_string(compare_format);
      WriteOutput(compare_output, out,
                  [&](std::ostream& os) { emit(rows, fmt, os); });
      return kExitOk;
    }

    if (cal->parsed()) {
      std::ifstream in(samples_path);
      if (!in) throw Error("IO_ERROR", "cannot open " + samples_path);
      const auto samples = read_calibration_csv(in);
      const CalibrationFit fit = fit_latency_bandwidth(samples);
      WriteOutput(calibrate_output, out, [&](std::ostream& os) {
        os << calibration_fit_json(fit) << '\n';
      });
      return kExitOk;
    }

    if (presets->parsed()) {
      if (timings) {
        write_timing_table(out);
      } else if (curves) {
        const std::vector<double> sizes = {32, 64, 128, 256, 512, 1024, 2048};
        write_bandwidth_curves_csv(out, sizes);
      } else {
        for (const auto& p : preset_catalog()) {
          out << std::left << std::setw(20) << p.name << std::setw(8)
              << p.kind << p.summary << '\n';
        }
      }
      return kExitOk;
    }
    throw Error("USAGE", "no subcommand");
  } catch (const ParseError& e) {
    err << "error: " << e.code() << ": " << e.what() << " (line " << e.line()
        << ", column " << e.column() << ")\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.code() << ": " << e.what() << '\n';
    return CodeToExit(e.code());
  } catch (const std::exception& e) {
    err << "error: INTERNAL: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace recperf
