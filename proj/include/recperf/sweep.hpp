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

#ifndef RECPERF_SWEEP_HPP_
#define RECPERF_SWEEP_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "recperf/scenario.hpp"
#include "recperf/step_engine.hpp"

namespace recperf {

struct SweepGrid {
  std::vector<double> latency_axis;    // seconds
  std::vector<double> bandwidth_axis;  // bytes/s per chip
  Scenario base;
  // Op kinds whose latency the latency axis replaces. Bandwidth is a chip
  // property and is always replaced.
  std::vector<CcOpKind> vary_op_kinds = {kAllCcOpKinds.begin(),
                                         kAllCcOpKinds.end()};
};

// `count` log-spaced points in [lo, hi]; endpoints are exact.
std::vector<double> log_axis(double lo, double hi, int count);
std::vector<double> linear_axis(double lo, double hi, int count);

// 20 log-spaced latencies in [0.5us, 10us] x 19 linear bandwidths in
// [100 GB/s, 1000 GB/s].
SweepGrid default_grid(const Scenario& base);

// Throws Error("AXIS_INVALID") for empty, non-positive or non-increasing
// axes.
void validate_grid(const SweepGrid& g);

// `s` with every selected op latency set to `latency` and the chip bandwidth
// set to `bandwidth`.
Scenario with_cc(const Scenario& s, double latency, double bandwidth,
                 const std::vector<CcOpKind>& kinds);

struct SweepRow {
  double latency = 0;
  double bandwidth = 0;
  StepEstimate estimate;
};

// Latency-major rows. `threads` <= 0 picks the hardware concurrency; the
// output does not depend on it.
std::vector<SweepRow> run_sweep(const SweepGrid& g, int threads = 1);

struct CompareConfig {
  std::string label;  // e.g. "small/unsharded"
  ModelConfig model;
  ShardingMode sharding;
  Mode mode = Mode::kInference;
};

// {small, large} x {unsharded, sharded} for one mode, in that order.
std::vector<CompareConfig> default_compare_configs(Mode mode);

struct ComparisonRow {
  std::string config_label;
  Mode mode = Mode::kInference;
  double candidate_qps = 0;
  double candidate_metric = 0;  // mem_util (inference) or allreduce_fraction
  double baseline_qps = 0;
  double baseline_metric = 0;
  double speedup = 0;  // candidate_qps / baseline_qps
};

// Evaluates each config on the baseline and candidate systems. The model,
// sharding and mode come from the config; everything else from the two
// scenarios.
std::vector<ComparisonRow> compare(const Scenario& baseline,
                                   const Scenario& candidate,
                                   const std::vector<CompareConfig>& configs);

enum class OutputFormat { kCsv, kJson };
// "csv" or "json"; throws Error("UNKNOWN_FORMAT").
OutputFormat output_format_from_string(std::string_view s);

// Sweep CSV columns: latency_s, bandwidth_Bps, qps, samples_per_sec,
// step_time_s, mem_util, allreduce_fraction, bottleneck, then one column per
// phase of the first row. JSON is an array of objects holding latency_s,
// bandwidth_Bps and the StepEstimate fields. Throws Error("EMPTY_TABLE").
void emit(const std::vector<SweepRow>& rows, OutputFormat format,
          std::ostream& out);

// Comparison CSV columns: config, mode, candidate_qps, candidate_metric,
// baseline_qps, baseline_metric, metric, speedup.
void emit(const std::vector<ComparisonRow>& rows, OutputFormat format,
          std::ostream& out);

std::vector<SweepRow> sweep_rows_from_json(std::string_view text);

// "<label>_<mode>_<sharding>", e.g. "recspeed16-small_inference_unsharded".
std::string output_basename(std::string_view label, Mode mode,
                            Sharding sharding);

}  // namespace recperf

#endif  // RECPERF_SWEEP_HPP_
