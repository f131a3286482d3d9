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

#include "recperf/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "recperf/error.hpp"

namespace recperf {

namespace {

template <typename Enum, size_t N>
Enum FromString(std::string_view name, const Enum (&values)[N],
                std::string_view what) {
  for (Enum v : values) {
    if (to_string(v) == name) return v;
  }
  throw Error("UNKNOWN_ENUM",
              "unknown " + std::string(what) + " '" + std::string(name) + "'");
}

void Add(ValidationReport& report, std::string code, std::string path,
         std::string message) {
  report.push_back({std::move(code), std::move(path), std::move(message)});
}

// ---- catalog entries -------------------------------------------------------

ModelConfig Rm2(std::int64_t embedding_dim, std::int64_t batch_size) {
  ModelConfig m;
  m.num_dense_features = 256;
  m.num_tables = 40;
  m.lookups_per_table = 80;
  m.embedding_dim = embedding_dim;
  m.element_bytes = 2;  // FP16
  // 4 B indices: 40 tables x 80 lookups x 25 samples is 320 KB per chip.
  m.index_bytes = 4;
  m.bottom_mlp_layers = {256, 128, 32, embedding_dim};
  m.top_mlp_layers = {512, 128, 1};
  m.batch_size = batch_size;
  return m;
}

MemorySystemSpec Memory(MemoryKind kind, std::string_view timing, int units,
                        double capacity, MemoryRole role) {
  MemorySystemSpec mem;
  mem.kind = kind;
  mem.units = units;
  mem.timing = timing_preset(timing);
  mem.capacity_bytes = capacity;
  mem.role = role;
  return mem;
}

// Reference homogeneous system used for the latency x bandwidth sweeps. The
// CC latency/bandwidth here are only defaults; sweeps override them.
SystemSpec Ref8() {
  SystemSpec s;
  s.num_chips = 8;
  s.chip.compute_rate = 200e12;
  s.chip.memory = {Memory(MemoryKind::kHBM2E, "HBM2E-2400", 6, 96e9,
                          MemoryRole::kFast)};
  s.chip.cc.topology = Topology::kQuadraticPointToPoint;
  s.chip.cc.per_chip_bandwidth = 1000e9;
  s.chip.cc.link_efficiency = 1.0;
  s.chip.cc.latency_by_op = LatencyTable(1e-6);
  return s;
}

SystemSpec RecSpeed16() {
  SystemSpec s;
  s.num_chips = 16;
  s.chip.compute_rate = 200e12;
  s.chip.memory = {
      Memory(MemoryKind::kHBM2E, "HBM2E-3000", 6, 96e9, MemoryRole::kFast),
      Memory(MemoryKind::kDDR4, "DDR4-3200", 1, 256e9, MemoryRole::kBulk)};
  s.chip.cc.topology = Topology::kQuadraticPointToPoint;
  s.chip.cc.per_chip_bandwidth = 1000e9;
  s.chip.cc.link_efficiency = 1.0;
  s.chip.cc.latency_by_op = LatencyTable(1e-6);
  return s;
}

// 16 x V100 behind NVSwitch. Latencies are measured values that already
// include switch and software overhead, so no separate switch hop is added.
// All-to-all has no published figure and takes the all-gather latency;
// reduce-scatter (an all-to-all plus local reduction) does the same.
SystemSpec Dgx2() {
  SystemSpec s;
  s.num_chips = 16;
  s.chip.compute_rate = 125e12;
  s.chip.memory = {
      Memory(MemoryKind::kHBM2, "HBM2-2300", 4, 32e9, MemoryRole::kFast)};
  s.chip.cc.topology = Topology::kSwitchedAllToAll;
  s.chip.cc.per_chip_bandwidth = 150e9;
  s.chip.cc.link_efficiency = 0.79;
  s.chip.cc.latency_by_op[CcOpKind::kAllReduce] = 50e-6;
  s.chip.cc.latency_by_op[CcOpKind::kAllGather] = 100e-6;
  s.chip.cc.latency_by_op[CcOpKind::kAllToAll] = 100e-6;
  s.chip.cc.latency_by_op[CcOpKind::kReduceScatter] = 100e-6;
  s.chip.cc.switch_traversal_latency = 0;
  return s;
}

}  // namespace

std::string_view to_string(Sharding s) {
  return s == Sharding::kUnsharded ? "unsharded" : "sharded";
}
std::string_view to_string(MemoryRole r) {
  return r == MemoryRole::kFast ? "fast" : "bulk";
}
std::string_view to_string(Mode m) {
  return m == Mode::kInference ? "inference" : "training";
}
std::string_view to_string(OverlapPolicy p) {
  return p == OverlapPolicy::kPipelined ? "pipelined" : "sequential";
}

Sharding sharding_from_string(std::string_view s) {
  if (s == "fully_sharded") return Sharding::kFullySharded;
  static constexpr Sharding kValues[] = {Sharding::kUnsharded,
                                         Sharding::kFullySharded};
  return FromString(s, kValues, "sharding");
}
MemoryRole memory_role_from_string(std::string_view s) {
  static constexpr MemoryRole kValues[] = {MemoryRole::kFast,
                                           MemoryRole::kBulk};
  return FromString(s, kValues, "memory role");
}
Mode mode_from_string(std::string_view s) {
  static constexpr Mode kValues[] = {Mode::kInference, Mode::kTraining};
  return FromString(s, kValues, "mode");
}
OverlapPolicy overlap_policy_from_string(std::string_view s) {
  static constexpr OverlapPolicy kValues[] = {OverlapPolicy::kPipelined,
                                              OverlapPolicy::kSequential};
  return FromString(s, kValues, "overlap policy");
}

// ---------------------------------------------------------------------------

ValidationReport validate(const ModelConfig& m) {
  ValidationReport r;
  const auto positive = [&](std::int64_t v, const char* path) {
    if (v <= 0) Add(r, "NONPOSITIVE_COUNT", path, std::string(path) + " must be > 0");
  };
  positive(m.num_dense_features, "model.num_dense_features");
  positive(m.num_tables, "model.num_tables");
  positive(m.lookups_per_table, "model.lookups_per_table");
  positive(m.embedding_dim, "model.embedding_dim");
  positive(m.batch_size, "model.batch_size");

  if (m.element_bytes != 1 && m.element_bytes != 2 && m.element_bytes != 4) {
    Add(r, "ELEMENT_BYTES", "model.element_bytes",
        "element_bytes must be 1, 2 or 4");
  }
  if (m.index_bytes != 2 && m.index_bytes != 4 && m.index_bytes != 8) {
    Add(r, "INDEX_BYTES", "model.index_bytes", "index_bytes must be 2, 4 or 8");
  }

  const auto check_layers = [&](const std::vector<std::int64_t>& layers,
                                const char* path) {
    if (layers.empty()) {
      Add(r, "EMPTY_MLP", path, std::string(path) + " needs at least one layer");
      return false;
    }
    if (std::any_of(layers.begin(), layers.end(),
                    [](std::int64_t w) { return w <= 0; })) {
      Add(r, "NONPOSITIVE_COUNT", path, "layer widths must be > 0");
    }
    return true;
  };
  if (check_layers(m.bottom_mlp_layers, "model.bottom_mlp_layers") &&
      m.bottom_mlp_layers.back() != m.embedding_dim) {
    Add(r, "MLP_DIM_MISMATCH", "model.bottom_mlp_layers",
        "last bottom-MLP width " + std::to_string(m.bottom_mlp_layers.back()) +
            " must equal embedding_dim " + std::to_string(m.embedding_dim));
  }
  if (check_layers(m.top_mlp_layers, "model.top_mlp_layers") &&
      m.top_mlp_layers.back() != 1) {
    Add(r, "TOP_MLP_OUTPUT", "model.top_mlp_layers",
        "last top-MLP width must be 1 (click probability)");
  }
  if (m.table_cardinalities) {
    const auto& c = *m.table_cardinalities;
    if (static_cast<std::int64_t>(c.size()) != m.num_tables ||
        std::any_of(c.begin(), c.end(), [](std::int64_t v) { return v <= 0; })) {
      Add(r, "CARDINALITY_INVALID", "model.table_cardinalities",
          "need one positive cardinality per table");
    }
  }
  return r;
}

ValidationReport validate(const SystemSpec& s) {
  ValidationReport r;
  if (s.num_chips < 1) {
    Add(r, "NUM_CHIPS", "system.num_chips", "num_chips must be >= 1");
  }
  const ChipSpec& chip = s.chip;
  if (!(chip.compute_rate > 0)) {
    Add(r, "COMPUTE_RATE", "system.chip.compute_rate",
        "compute_rate must be > 0");
  }
  if (chip.memory.empty()) {
    Add(r, "NO_MEMORY", "system.chip.memory",
        "a chip needs at least one memory system");
  }
  int fast = 0, bulk = 0;
  for (size_t i = 0; i < chip.memory.size(); ++i) {
    const auto& mem = chip.memory[i];
    const std::string path = "system.chip.memory[" + std::to_string(i) + "]";
    (mem.role == MemoryRole::kFast ? fast : bulk) += 1;
    if (mem.units <= 0) {
      Add(r, "NONPOSITIVE_COUNT", path + ".units", "units must be > 0");
    }
    if (!(mem.capacity_bytes > 0)) {
      Add(r, "CAPACITY", path + ".capacity_bytes", "capacity must be > 0");
    }
    try {
      validate_timing(mem.timing);
    } catch (const ValidationError& e) {
      Add(r, e.code(), path + ".timing", e.what());
    }
    if (mem.effective_bw_override && !(*mem.effective_bw_override > 0)) {
      Add(r, "OVERRIDE_RANGE", path + ".effective_bw_override",
          "effective bandwidth override must be > 0");
    }
  }
  if (fast > 1 || bulk > 1) {
    Add(r, "MEMORY_ROLE_DUPLICATE", "system.chip.memory",
        "at most one fast and one bulk memory system per chip");
  }
  if (!(chip.bulk_lookup_fraction >= 0 && chip.bulk_lookup_fraction <= 1)) {
    Add(r, "FRACTION_RANGE", "system.chip.bulk_lookup_fraction",
        "bulk_lookup_fraction must be in [0, 1]");
  } else if (chip.bulk_lookup_fraction > 0 && (fast == 0 || bulk == 0)) {
    Add(r, "FRACTION_RANGE", "system.chip.bulk_lookup_fraction",
        "bulk_lookup_fraction > 0 needs both a fast and a bulk memory");
  }
  if (chip.onchip_buffer_bytes && !(*chip.onchip_buffer_bytes > 0)) {
    Add(r, "BUFFER_RANGE", "system.chip.onchip_buffer_bytes",
        "on-chip buffer size must be > 0 when given");
  }

  const CcSpec& cc = chip.cc;
  if (!(cc.per_chip_bandwidth > 0)) {
    Add(r, "BANDWIDTH_RANGE", "system.chip.cc.per_chip_bandwidth",
        "CC bandwidth must be > 0");
  }
  if (!(cc.link_efficiency > 0 && cc.link_efficiency <= 1)) {
    Add(r, "EFFICIENCY_RANGE", "system.chip.cc.link_efficiency",
        "link_efficiency must be in (0, 1]");
  }
  for (auto kind : kAllCcOpKinds) {
    if (!(cc.latency_by_op[kind] >= 0)) {
      Add(r, "LATENCY_NEGATIVE",
          "system.chip.cc.latency." + std::string(to_string(kind)),
          "latencies must be >= 0");
    }
  }
  if (!(cc.switch_traversal_latency >= 0)) {
    Add(r, "LATENCY_NEGATIVE", "system.chip.cc.switch_traversal_latency",
        "latencies must be >= 0");
  }
  if (cc.ring_all_to_all_factor && !(*cc.ring_all_to_all_factor >= 1)) {
    Add(r, "RING_FACTOR_RANGE", "system.chip.cc.ring_all_to_all_factor",
        "ring all-to-all factor must be >= 1");
  }
  return r;
}

ValidationReport validate(const Scenario& s) {
  ValidationReport r = validate(s.model);
  ValidationReport sys = validate(s.system);
  r.insert(r.end(), sys.begin(), sys.end());
  return r;
}

void require_valid(const Scenario& s) {
  const auto report = validate(s);
  if (!report.empty()) {
    throw ValidationError(report.front().code,
                          report.front().path + ": " + report.front().message);
  }
}

// ---------------------------------------------------------------------------

PresetFragment preset(std::string_view name) {
  if (name == "dlrm-rm2-small") return Rm2(32, 200);
  if (name == "dlrm-rm2-large") return Rm2(128, 600);
  if (name == "ref8-homogeneous") return Ref8();
  if (name == "recspeed16") return RecSpeed16();
  if (name == "dgx2") return Dgx2();
  throw Error("UNKNOWN_PRESET", "unknown preset '" + std::string(name) + "'");
}

ModelConfig model_preset(std::string_view name) {
  auto fragment = preset(name);
  if (auto* m = std::get_if<ModelConfig>(&fragment)) return *m;
  throw Error("UNKNOWN_PRESET",
              "preset '" + std::string(name) + "' is not a model");
}

SystemSpec system_preset(std::string_view name) {
  auto fragment = preset(name);
  if (auto* s = std::get_if<SystemSpec>(&fragment)) return *s;
  throw Error("UNKNOWN_PRESET",
              "preset '" + std::string(name) + "' is not a system");
}

std::vector<PresetInfo> preset_catalog() {
  return {
      {"dlrm-rm2-small", "model",
       "40 tables x 80 lookups, d=32 FP16 (64 B rows), batch 200"},
      {"dlrm-rm2-large", "model",
       "40 tables x 80 lookups, d=128 FP16 (256 B rows), batch 600"},
      {"ref8-homogeneous", "system",
       "8 chips, 200 TFLOPS, 6x HBM2E-2400, quadratic links (sweep base)"},
      {"recspeed16", "system",
       "16 chips, 200 TFLOPS, 6x HBM2E-3000 + 1x DDR4-3200, 1 us, 1000 GB/s"},
      {"dgx2", "system",
       "16x V100, 125 TFLOPS, 4x HBM2-2300, 150 GB/s @ 79%, AR 50 us, "
       "AG/A2A 100 us"},
  };
}

Scenario make_scenario(std::string_view model, std::string_view system,
                       ShardingMode sharding, Mode mode, OverlapPolicy policy) {
  return Scenario{model_preset(model), system_preset(system), sharding, mode,
                  policy};
}

const MemorySystemSpec& fast_memory(const ChipSpec& chip) {
  if (chip.memory.empty()) {
    throw ValidationError("NO_MEMORY", "chip has no memory system");
  }
  for (const auto& m : chip.memory) {
    if (m.role == MemoryRole::kFast) return m;
  }
  return chip.memory.front();
}

const MemorySystemSpec* bulk_memory(const ChipSpec& chip) {
  const MemorySystemSpec* primary = &fast_memory(chip);
  for (const auto& m : chip.memory) {
    if (m.role == MemoryRole::kBulk && &m != primary) return &m;
  }
  return nullptr;
}

}  // namespace recperf
