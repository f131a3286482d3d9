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

#ifndef RECPERF_SCENARIO_HPP_
#define RECPERF_SCENARIO_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "recperf/collectives.hpp"
#include "recperf/dram.hpp"

namespace recperf {

// All quantities are SI base units: bytes, seconds, FLOP/s, bytes/s.

// DLRM-style model: bottom MLP over dense features, one embedding table per
// sparse feature with sum pooling, pairwise dot-product interactions with the
// diagonal excluded, and a top MLP ending in a single logit.
struct ModelConfig {
  std::int64_t num_dense_features = 0;
  std::int64_t num_tables = 0;
  std::int64_t lookups_per_table = 0;
  std::int64_t embedding_dim = 0;
  int element_bytes = 2;
  int index_bytes = 4;
  std::vector<std::int64_t> bottom_mlp_layers;
  std::vector<std::int64_t> top_mlp_layers;
  std::int64_t batch_size = 0;  // samples per query
  std::optional<std::vector<std::int64_t>> table_cardinalities;

  double embedding_row_bytes() const {
    return static_cast<double>(embedding_dim) * element_bytes;
  }

  bool operator==(const ModelConfig&) const = default;
};

enum class Sharding { kUnsharded, kFullySharded };

struct ShardingMode {
  Sharding kind = Sharding::kUnsharded;
  bool assume_balanced = true;  // Unsharded only

  static ShardingMode unsharded(bool assume_balanced = true) {
    return {Sharding::kUnsharded, assume_balanced};
  }
  static ShardingMode fully_sharded() { return {Sharding::kFullySharded, true}; }

  bool operator==(const ShardingMode&) const = default;
};

enum class MemoryRole { kFast, kBulk };

struct MemorySystemSpec {
  MemoryKind kind = MemoryKind::kHBM2E;
  int units = 0;  // channels (DDR4, GDDR6 devices) or stacks (HBM)
  DramTimingSpec timing;
  double capacity_bytes = 0;
  MemoryRole role = MemoryRole::kFast;
  // Pins the effective random-access bandwidth instead of deriving it from
  // the timing model; applies to reads and writes.
  std::optional<double> effective_bw_override;

  bool operator==(const MemorySystemSpec&) const = default;
};

struct ChipSpec {
  double compute_rate = 0;  // FLOP/s at model precision
  std::vector<MemorySystemSpec> memory;
  CcSpec cc;
  // Absent means on-chip buffering is assumed sufficient.
  std::optional<double> onchip_buffer_bytes;
  // Share of embedding lookup traffic served from the Bulk memory system.
  // 0 keeps all hot tables in Fast memory and uses Bulk only for capacity.
  double bulk_lookup_fraction = 0;

  bool operator==(const ChipSpec&) const = default;
};

struct SystemSpec {
  int num_chips = 0;
  ChipSpec chip;

  bool operator==(const SystemSpec&) const = default;
};

enum class Mode { kInference, kTraining };
enum class OverlapPolicy { kPipelined, kSequential };

struct Scenario {
  ModelConfig model;
  SystemSpec system;
  ShardingMode sharding;
  Mode mode = Mode::kInference;
  OverlapPolicy overlap_policy = OverlapPolicy::kPipelined;

  bool operator==(const Scenario&) const = default;
};

std::string_view to_string(Sharding s);
std::string_view to_string(MemoryRole r);
std::string_view to_string(Mode m);
std::string_view to_string(OverlapPolicy p);
Sharding sharding_from_string(std::string_view s);
MemoryRole memory_role_from_string(std::string_view s);
Mode mode_from_string(std::string_view s);
OverlapPolicy overlap_policy_from_string(std::string_view s);

// ---------------------------------------------------------------------------
// Validation

struct ValidationIssue {
  std::string code;  // e.g. MLP_DIM_MISMATCH, EFFICIENCY_RANGE
  std::string path;  // e.g. model.bottom_mlp_layers
  std::string message;

  bool operator==(const ValidationIssue&) const = default;
};

using ValidationReport = std::vector<ValidationIssue>;

ValidationReport validate(const ModelConfig& m);
ValidationReport validate(const SystemSpec& s);
ValidationReport validate(const Scenario& s);

// Throws ValidationError carrying the first issue's code when the report is
// not empty.
void require_valid(const Scenario& s);

// ---------------------------------------------------------------------------
// Preset catalog

using PresetFragment = std::variant<ModelConfig, SystemSpec>;

// dlrm-rm2-small, dlrm-rm2-large, ref8-homogeneous, recspeed16, dgx2.
// Throws Error("UNKNOWN_PRESET").
PresetFragment preset(std::string_view name);
ModelConfig model_preset(std::string_view name);
SystemSpec system_preset(std::string_view name);

struct PresetInfo {
  std::string name;
  std::string kind;  // "model" or "system"
  std::string summary;
};
std::vector<PresetInfo> preset_catalog();

// Convenience: model preset x system preset with the given knobs.
Scenario make_scenario(std::string_view model, std::string_view system,
                       ShardingMode sharding, Mode mode,
                       OverlapPolicy policy = OverlapPolicy::kPipelined);

// Returns the Fast-role memory system (or the only one). Throws when none.
const MemorySystemSpec& fast_memory(const ChipSpec& chip);
const MemorySystemSpec* bulk_memory(const ChipSpec& chip);

}  // namespace recperf

#endif  // RECPERF_SCENARIO_HPP_
