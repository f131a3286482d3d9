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

#include "recperf/step_engine.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "recperf/collectives.hpp"
#include "recperf/error.hpp"
#include "recperf/memory_model.hpp"

namespace recperf {

namespace {

struct CcTerms {
  double latency = 0;
  double wire = 0;
};

CcTerms CcCost(CcOpKind kind, double payload, const Scenario& s) {
  const int n = s.system.num_chips;
  if (n == 1) return {};
  const CcSpec& cc = s.system.chip.cc;
  return {cc_latency(kind, cc), cc_wire_time(kind, payload, n, cc)};
}

StepEstimate Finish(const Scenario& s, double step_time, PhaseBreakdown phases) {
  if (!(step_time > 0) || !std::isfinite(step_time)) {
    throw Error("ZERO_STEP_TIME",
                "scenario has no costed work; step time is not positive");
  }
  StepEstimate e;
  e.mode = s.mode;
  e.step_time = step_time;
  e.qps = 1.0 / step_time;
  e.samples_per_sec = static_cast<double>(s.model.batch_size) * e.qps;
  e.breakdown = std::move(phases);
  return e;
}

PhaseBreakdown Phases(const StepTerms& t, bool training) {
  PhaseBreakdown p = {
      {std::string(kPhaseNames[0]), t.idx_latency + t.idx_wire},
      {std::string(kPhaseNames[1]), t.lookup},
      {std::string(kPhaseNames[2]), t.exchange_latency + t.exchange_wire},
      {std::string(kPhaseNames[3]), t.fwd_compute},
  };
  if (training) {
    p.push_back({std::string(kPhaseNames[4]), t.grad_latency + t.grad_wire});
    p.push_back({std::string(kPhaseNames[5]), t.write});
    p.push_back({std::string(kPhaseNames[6]), t.bwd_compute});
    p.push_back({std::string(kPhaseNames[7]),
                 t.allreduce_latency + t.allreduce_wire});
  }
  return p;
}

}  // namespace

std::string_view to_string(Bottleneck b) {
  switch (b) {
    case Bottleneck::kLatencyBound:
      return "latency_bound";
    case Bottleneck::kBandwidthBound:
      return "bandwidth_bound";
    case Bottleneck::kMemoryBound:
      return "memory_bound";
    case Bottleneck::kComputeBound:
      return "compute_bound";
  }
  return "?";
}

Bottleneck bottleneck_from_string(std::string_view s) {
  for (auto b : {Bottleneck::kLatencyBound, Bottleneck::kBandwidthBound,
                 Bottleneck::kMemoryBound, Bottleneck::kComputeBound}) {
    if (to_string(b) == s) return b;
  }
  throw Error("UNKNOWN_ENUM", "unknown bottleneck '" + std::string(s) + "'");
}

Bottleneck classify_bottleneck(double latency, double wire, double memory,
                               double compute) {
  // max_element keeps the first of equal maxima, i.e. the enum order.
  const std::array<double, 4> terms = {latency, wire, memory, compute};
  const auto it = std::max_element(terms.begin(), terms.end());
  return static_cast<Bottleneck>(std::distance(terms.begin(), it));
}

StepTerms step_terms(const Scenario& s, const PhaseVolumes& v) {
  const ChipSpec& chip = s.system.chip;
  const double row = s.model.embedding_row_bytes();
  StepTerms t;

  const CcTerms idx = CcCost(CcOpKind::kAllToAll, v.idx_exchange_payload, s);
  t.idx_latency = idx.latency;
  t.idx_wire = idx.wire;
  t.lookup = embedding_access_time(chip, v.lookup_bytes, row,
                                   AccessDirection::kRead);
  const CcTerms ex =
      CcCost(v.embed_exchange_kind, v.embed_exchange_payload, s);
  t.exchange_latency = ex.latency;
  t.exchange_wire = ex.wire;
  t.fwd_compute = (v.fwd_dense_flops + v.pool_flops) / chip.compute_rate;

  if (s.mode == Mode::kTraining) {
    const CcTerms grad =
        CcCost(v.grad_exchange_kind, v.grad_exchange_payload, s);
    t.grad_latency = grad.latency;
    t.grad_wire = grad.wire;
    t.write = embedding_access_time(chip, v.embed_write_bytes, row,
                                    AccessDirection::kWrite);
    t.bwd_compute = v.bwd_dense_flops / chip.compute_rate;
    if (v.dense_grad_payload > 0) {
      const CcTerms ar = CcCost(CcOpKind::kAllReduce, v.dense_grad_payload, s);
      t.allreduce_latency = ar.latency;
      t.allreduce_wire = ar.wire;
    }
  }
  return t;
}

double compose_forward(const StepTerms& t, OverlapPolicy policy) {
  if (policy == OverlapPolicy::kSequential) {
    return t.idx_latency + t.idx_wire + t.lookup + t.exchange_latency +
           t.exchange_wire + t.fwd_compute;
  }
  const double embed_path =
      t.idx_latency +
      std::max({t.idx_wire, t.lookup, t.exchange_latency + t.exchange_wire});
  return std::max(embed_path, t.fwd_compute);
}

double compose_training(const StepTerms& t, OverlapPolicy policy) {
  const double forward = compose_forward(t, policy);
  if (policy == OverlapPolicy::kSequential) {
    return forward + t.grad_latency + t.grad_wire + t.write + t.bwd_compute +
           t.allreduce_latency + t.allreduce_wire;
  }
  const double embed_backward = t.grad_latency + std::max(t.grad_wire, t.write);
  const double dense =
      std::max(t.bwd_compute, t.allreduce_latency + t.allreduce_wire);
  return forward + embed_backward + dense;
}

double StepEstimate::phase(std::string_view name) const {
  for (const auto& p : breakdown) {
    if (p.name == name) return p.seconds;
  }
  throw Error("UNKNOWN_PHASE", "no phase named '" + std::string(name) + "'");
}

StepEstimate inference_step(const Scenario& s) {
  if (s.mode != Mode::kInference) {
    throw Error("MODE_MISMATCH", "inference_step needs an inference scenario");
  }
  require_valid(s);
  const StepTerms t = step_terms(s, message_volumes(s));
  StepEstimate e =
      Finish(s, compose_forward(t, s.overlap_policy), Phases(t, false));
  e.mem_util = t.lookup / e.step_time;
  e.compute_util = t.fwd_compute / e.step_time;
  e.bottleneck =
      classify_bottleneck(t.idx_latency + t.exchange_latency,
                          t.idx_wire + t.exchange_wire, t.lookup, t.fwd_compute);
  return e;
}

StepEstimate training_step(const Scenario& s) {
  if (s.mode != Mode::kTraining) {
    throw Error("MODE_MISMATCH", "training_step needs a training scenario");
  }
  require_valid(s);
  const StepTerms t = step_terms(s, message_volumes(s));
  StepEstimate e =
      Finish(s, compose_training(t, s.overlap_policy), Phases(t, true));
  e.mem_util = (t.lookup + t.write) / e.step_time;
  e.compute_util = (t.fwd_compute + t.bwd_compute) / e.step_time;
  e.allreduce_fraction =
      (t.allreduce_latency + t.allreduce_wire) / e.step_time;
  e.bottleneck = classify_bottleneck(
      t.idx_latency + t.exchange_latency + t.grad_latency + t.allreduce_latency,
      t.idx_wire + t.exchange_wire + t.grad_wire + t.allreduce_wire,
      t.lookup + t.write, t.fwd_compute + t.bwd_compute);
  return e;
}

StepEstimate estimate(const Scenario& s) {
  return s.mode == Mode::kInference ? inference_step(s) : training_step(s);
}

SlaResult sla_check(const StepEstimate& e, double percentile, double budget) {
  if (!(budget > 0)) {
    throw Error("INVALID_BUDGET", "SLA budget must be > 0 seconds");
  }
  if (!(percentile > 0 && percentile < 1)) {
    throw Error("INVALID_ARGUMENT", "percentile must be in (0, 1)");
  }
  SlaResult r;
  r.percentile_latency = e.step_time;
  r.margin = budget - e.step_time;
  r.pass = e.step_time <= budget;
  return r;
}

std::string step_estimate_json(const StepEstimate& e, int indent) {
  nlohmann::ordered_json j;
  j["mode"] = std::string(to_string(e.mode));
  j["step_time_s"] = e.step_time;
  j["qps"] = e.qps;
  j["samples_per_sec"] = e.samples_per_sec;
  j["mem_util"] = e.mem_util;
  j["allreduce_fraction"] = e.allreduce_fraction;
  j["compute_util"] = e.compute_util;
  j["bottleneck"] = std::string(to_string(e.bottleneck));
  auto& phases = j["breakdown"] = nlohmann::ordered_json::array();
  for (const auto& p : e.breakdown) {
    phases.push_back({{"phase", p.name}, {"seconds", p.seconds}});
  }
  return j.dump(indent);
}

StepEstimate step_estimate_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(err.what(), 1, static_cast<int>(err.byte));
  }
  try {
    StepEstimate e;
    e.mode = mode_from_string(j.at("mode").get<std::string>());
    e.step_time = j.at("step_time_s").get<double>();
    e.qps = j.at("qps").get<double>();
    e.samples_per_sec = j.at("samples_per_sec").get<double>();
    e.mem_util = j.at("mem_util").get<double>();
    e.allreduce_fraction = j.at("allreduce_fraction").get<double>();
    e.compute_util = j.at("compute_util").get<double>();
    e.bottleneck = bottleneck_from_string(j.at("bottleneck").get<std::string>());
    for (const auto& p : j.at("breakdown")) {
      e.breakdown.push_back(
          {p.at("phase").get<std::string>(), p.at("seconds").get<double>()});
    }
    return e;
  } catch (const nlohmann::json::exception& err) {
    throw Error("MISSING_FIELD", err.what());
  }
}

}  // namespace recperf
