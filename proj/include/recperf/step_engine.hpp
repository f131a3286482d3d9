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

#ifndef RECPERF_STEP_ENGINE_HPP_
#define RECPERF_STEP_ENGINE_HPP_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "recperf/accounting.hpp"
#include "recperf/scenario.hpp"

namespace recperf {

// Phase names, in schedule order. Inference uses the first four.
inline constexpr std::array<std::string_view, 8> kPhaseNames = {
    "idx_exchange",     "embed_lookup",  "embed_exchange",
    "dense_fwd_compute", "grad_exchange", "embed_update",
    "dense_bwd_compute", "dense_allreduce"};
inline constexpr size_t kInferencePhaseCount = 4;

struct Phase {
  std::string name;
  double seconds = 0;

  bool operator==(const Phase&) const = default;
};
using PhaseBreakdown = std::vector<Phase>;

enum class Bottleneck { kLatencyBound, kBandwidthBound, kMemoryBound,
                        kComputeBound };
std::string_view to_string(Bottleneck b);
Bottleneck bottleneck_from_string(std::string_view s);

// Label of the largest additive contribution. Ties go to the earlier label in
// the order latency, bandwidth, memory, compute.
Bottleneck classify_bottleneck(double latency, double wire, double memory,
                               double compute);

// Isolated cost of every term the schedule composes. CC phases are split
// into their fixed latency and their wire-transfer time.
struct StepTerms {
  double idx_latency = 0;
  double idx_wire = 0;
  double lookup = 0;
  double exchange_latency = 0;
  double exchange_wire = 0;
  double fwd_compute = 0;
  double grad_latency = 0;
  double grad_wire = 0;
  double write = 0;
  double bwd_compute = 0;
  double allreduce_latency = 0;
  double allreduce_wire = 0;
};

StepTerms step_terms(const Scenario& s, const PhaseVolumes& v);

// Pipelined forward pass: the index all-to-all latency is paid up front;
// after that, index transfer, lookups and the embedding exchange stream
// through each other so the slowest of the three sets the pace. Dense
// forward compute overlaps the whole embedding path.
//   max(idx_latency + max(idx_wire, lookup, exchange), fwd_compute)
// Sequential: every term added.
double compose_forward(const StepTerms& t, OverlapPolicy policy);

// Pipelined training step: forward, then the embedding-gradient exchange
// overlapped with the row writes, then backward dense compute overlapped with
// the dense all-reduce. The three stages add.
double compose_training(const StepTerms& t, OverlapPolicy policy);

struct StepEstimate {
  Mode mode = Mode::kInference;
  double step_time = 0;  // seconds per query (one batch of b samples)
  double qps = 0;
  double samples_per_sec = 0;
  double mem_util = 0;
  double allreduce_fraction = 0;  // training only
  double compute_util = 0;
  Bottleneck bottleneck = Bottleneck::kLatencyBound;
  PhaseBreakdown breakdown;

  double phase(std::string_view name) const;
};

StepEstimate inference_step(const Scenario& s);
StepEstimate training_step(const Scenario& s);
// Dispatches on s.mode.
StepEstimate estimate(const Scenario& s);

struct SlaResult {
  bool pass = false;
  double margin = 0;  // budget - latency at the requested percentile
  double percentile_latency = 0;
};

// The model is a deterministic upper bound, so the per-query latency
// distribution is a point mass at step_time and every percentile equals it.
SlaResult sla_check(const StepEstimate& e, double percentile, double budget);

// Fixed schema: mode, step_time_s, qps, samples_per_sec, mem_util,
// allreduce_fraction, compute_util, bottleneck, breakdown[{phase, seconds}].
std::string step_estimate_json(const StepEstimate& e, int indent = 2);
StepEstimate step_estimate_from_json(std::string_view text);

}  // namespace recperf

#endif  // RECPERF_STEP_ENGINE_HPP_
