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

#include "recperf/config_io.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "recperf/error.hpp"
#include "recperf/format.hpp"

namespace recperf {

namespace {

std::string Where(const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  if (m.is_null()) return "";
  return " (line " + std::to_string(m.line + 1) + ", column " +
         std::to_string(m.column + 1) + ")";
}

void RequireMap(const YAML::Node& n, const std::string& path) {
  if (!n.IsMap()) {
    throw Error("BAD_VALUE", path + " must be a mapping" + Where(n));
  }
}

void CheckKeys(const YAML::Node& n, std::initializer_list<std::string_view> keys,
               const std::string& path) {
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    bool known = false;
    for (auto k : keys) known = known || k == key;
    if (!known) {
      throw Error("UNKNOWN_FIELD",
                  "unknown field '" + path + "." + key + "'" + Where(kv.first));
    }
  }
}

template <typename T>
T As(const YAML::Node& n, const std::string& path) {
  try {
    return n.as<T>();
  } catch (const YAML::BadConversion&) {
    throw Error("BAD_VALUE", "cannot read " + path + Where(n));
  }
}

// Reads `key` into `out` when present. When absent, `has_base` says whether a
// preset already supplied the value; otherwise the field is missing.
template <typename T>
void Field(const YAML::Node& n, const char* key, T& out, bool has_base,
           const std::string& path) {
  const YAML::Node v = n[key];
  const std::string full = path + "." + key;
  if (!v) {
    if (!has_base) throw Error("MISSING_FIELD", "missing field " + full);
    return;
  }
  out = As<T>(v, full);
}

template <typename T>
void OptionalField(const YAML::Node& n, const char* key, T& out,
                   const std::string& path) {
  if (const YAML::Node v = n[key]) out = As<T>(v, path + "." + key);
}

// `key: null` clears, a value sets, absence keeps the base.
template <typename T>
void NullableField(const YAML::Node& n, const char* key, std::optional<T>& out,
                   const std::string& path) {
  const YAML::Node v = n[key];
  if (!v) return;
  if (v.IsNull()) {
    out.reset();
  } else {
    out = As<T>(v, path + "." + key);
  }
}

template <typename Enum, typename Fn>
void EnumField(const YAML::Node& n, const char* key, Enum& out, Fn from_string,
               bool has_base, const std::string& path) {
  std::string text;
  const YAML::Node v = n[key];
  if (!v && has_base) return;
  Field(n, key, text, has_base, path);
  out = from_string(text);
}

DramTimingSpec ParseTiming(const YAML::Node& n, const std::string& path) {
  if (n.IsScalar()) return timing_preset(As<std::string>(n, path));
  RequireMap(n, path);
  CheckKeys(n,
            {"preset", "name", "data_rate", "channel_width_bits",
             "burst_length", "banks_per_channel", "tRC", "tRRD", "tFAW",
             "channels_per_unit", "row_bytes"},
            path);
  DramTimingSpec t;
  bool base = false;
  if (const YAML::Node p = n["preset"]) {
    t = timing_preset(As<std::string>(p, path + ".preset"));
    base = true;
  } else {
    t.name = "custom";
  }
  OptionalField(n, "name", t.name, path);
  Field(n, "data_rate", t.data_rate, base, path);
  Field(n, "channel_width_bits", t.channel_width_bits, base, path);
  Field(n, "burst_length", t.burst_length, base, path);
  Field(n, "banks_per_channel", t.banks_per_channel, base, path);
  Field(n, "tRC", t.tRC, base, path);
  Field(n, "tRRD", t.tRRD, base, path);
  Field(n, "tFAW", t.tFAW, base, path);
  Field(n, "channels_per_unit", t.channels_per_unit, base, path);
  Field(n, "row_bytes", t.row_bytes, base, path);
  return t;
}

MemorySystemSpec ParseMemory(const YAML::Node& n, const std::string& path) {
  RequireMap(n, path);
  CheckKeys(n,
            {"kind", "units", "timing", "capacity_bytes", "role",
             "effective_bw_override"},
            path);
  MemorySystemSpec m;
  EnumField(n, "kind", m.kind, memory_kind_from_string, false, path);
  Field(n, "units", m.units, false, path);
  if (!n["timing"]) throw Error("MISSING_FIELD", "missing field " + path + ".timing");
  m.timing = ParseTiming(n["timing"], path + ".timing");
  Field(n, "capacity_bytes", m.capacity_bytes, false, path);
  EnumField(n, "role", m.role, memory_role_from_string, true, path);
  NullableField(n, "effective_bw_override", m.effective_bw_override, path);
  return m;
}

void ParseLatency(const YAML::Node& n, LatencyTable& table, bool has_base,
                  const std::string& path) {
  const YAML::Node v = n["latency"];
  const std::string full = path + ".latency";
  if (!v) {
    if (!has_base) throw Error("MISSING_FIELD", "missing field " + full);
    return;
  }
  if (v.IsScalar()) {
    table = LatencyTable(As<double>(v, full));
    return;
  }
  RequireMap(v, full);
  CheckKeys(v, {"all_to_all", "all_reduce", "reduce_scatter", "all_gather"},
            full);
  for (CcOpKind kind : kAllCcOpKinds) {
    const std::string key(to_string(kind));
    Field(v, key.c_str(), table[kind], has_base, full);
  }
}

void ParseCc(const YAML::Node& n, CcSpec& cc, bool has_base,
             const std::string& path) {
  RequireMap(n, path);
  CheckKeys(n,
            {"topology", "per_chip_bandwidth", "link_efficiency", "latency",
             "switch_traversal_latency", "ring_all_to_all_factor"},
            path);
  EnumField(n, "topology", cc.topology, topology_from_string, true, path);
  Field(n, "per_chip_bandwidth", cc.per_chip_bandwidth, has_base, path);
  OptionalField(n, "link_efficiency", cc.link_efficiency, path);
  ParseLatency(n, cc.latency_by_op, has_base, path);
  OptionalField(n, "switch_traversal_latency", cc.switch_traversal_latency,
                path);
  NullableField(n, "ring_all_to_all_factor", cc.ring_all_to_all_factor, path);
}

void ParseChip(const YAML::Node& n, ChipSpec& chip, bool has_base,
               const std::string& path) {
  RequireMap(n, path);
  CheckKeys(n,
            {"compute_rate", "memory", "cc", "onchip_buffer_bytes",
             "bulk_lookup_fraction"},
            path);
  Field(n, "compute_rate", chip.compute_rate, has_base, path);
  if (const YAML::Node mem = n["memory"]) {
    if (!mem.IsSequence()) {
      throw Error("BAD_VALUE", path + ".memory must be a list" + Where(mem));
    }
    chip.memory.clear();
    for (size_t i = 0; i < mem.size(); ++i) {
      chip.memory.push_back(
          ParseMemory(mem[i], path + ".memory[" + std::to_string(i) + "]"));
    }
  } else if (!has_base) {
    throw Error("MISSING_FIELD", "missing field " + path + ".memory");
  }
  if (const YAML::Node cc = n["cc"]) {
    ParseCc(cc, chip.cc, has_base, path + ".cc");
  } else if (!has_base) {
    throw Error("MISSING_FIELD", "missing field " + path + ".cc");
  }
  NullableField(n, "onchip_buffer_bytes", chip.onchip_buffer_bytes, path);
  OptionalField(n, "bulk_lookup_fraction", chip.bulk_lookup_fraction, path);
}

ModelConfig ParseModel(const YAML::Node& n) {
  const std::string path = "model";
  RequireMap(n, path);
  CheckKeys(n,
            {"preset", "num_dense_features", "num_tables", "lookups_per_table",
             "embedding_dim", "element_bytes", "index_bytes",
             "bottom_mlp_layers", "top_mlp_layers", "batch_size",
             "table_cardinalities"},
            path);
  ModelConfig m;
  bool base = false;
  if (const YAML::Node p = n["preset"]) {
    m = model_preset(As<std::string>(p, "model.preset"));
    base = true;
  }
  Field(n, "num_dense_features", m.num_dense_features, base, path);
  Field(n, "num_tables", m.num_tables, base, path);
  Field(n, "lookups_per_table", m.lookups_per_table, base, path);
  Field(n, "embedding_dim", m.embedding_dim, base, path);
  OptionalField(n, "element_bytes", m.element_bytes, path);
  OptionalField(n, "index_bytes", m.index_bytes, path);
  Field(n, "bottom_mlp_layers", m.bottom_mlp_layers, base, path);
  Field(n, "top_mlp_layers", m.top_mlp_layers, base, path);
  Field(n, "batch_size", m.batch_size, base, path);
  NullableField(n, "table_cardinalities", m.table_cardinalities, path);
  return m;
}

SystemSpec ParseSystem(const YAML::Node& n) {
  const std::string path = "system";
  RequireMap(n, path);
  CheckKeys(n, {"preset", "num_chips", "chip"}, path);
  SystemSpec s;
  bool base = false;
  if (const YAML::Node p = n["preset"]) {
    s = system_preset(As<std::string>(p, "system.preset"));
    base = true;
  }
  Field(n, "num_chips", s.num_chips, base, path);
  if (const YAML::Node chip = n["chip"]) {
    ParseChip(chip, s.chip, base, "system.chip");
  } else if (!base) {
    throw Error("MISSING_FIELD", "missing field system.chip");
  }
  return s;
}

Scenario ParseRoot(const YAML::Node& root) {
  if (!root || root.IsNull()) {
    throw Error("MISSING_FIELD", "empty scenario document");
  }
  RequireMap(root, "document");
  CheckKeys(root,
            {"model", "system", "sharding", "assume_balanced", "mode",
             "overlap_policy"},
            "scenario");
  Scenario s;
  // A bare string is shorthand for {preset: NAME}.
  const auto section = [&](const char* key) {
    const YAML::Node v = root[key];
    if (!v) throw Error("MISSING_FIELD", std::string("missing field ") + key);
    if (v.IsScalar()) {
      YAML::Node wrapped;
      wrapped["preset"] = v;
      return wrapped;
    }
    return v;
  };
  s.model = ParseModel(section("model"));
  s.system = ParseSystem(section("system"));
  const std::string path = "scenario";
  Sharding kind = Sharding::kUnsharded;
  EnumField(root, "sharding", kind, sharding_from_string, false, path);
  s.sharding.kind = kind;
  OptionalField(root, "assume_balanced", s.sharding.assume_balanced, path);
  EnumField(root, "mode", s.mode, mode_from_string, false, path);
  EnumField(root, "overlap_policy", s.overlap_policy,
            overlap_policy_from_string, true, path);
  return s;
}

// Numbers go out through FormatDouble so a reload yields the identical value.
void EmitNumber(YAML::Emitter& out, double v) { out << FormatDouble(v); }

void EmitTiming(YAML::Emitter& out, const DramTimingSpec& t) {
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << t.name;
  out << YAML::Key << "data_rate" << YAML::Value;
  EmitNumber(out, t.data_rate);
  out << YAML::Key << "channel_width_bits" << YAML::Value
      << t.channel_width_bits;
  out << YAML::Key << "burst_length" << YAML::Value << t.burst_length;
  out << YAML::Key << "banks_per_channel" << YAML::Value
      << t.banks_per_channel;
  out << YAML::Key << "tRC" << YAML::Value;
  EmitNumber(out, t.tRC);
  out << YAML::Key << "tRRD" << YAML::Value;
  EmitNumber(out, t.tRRD);
  out << YAML::Key << "tFAW" << YAML::Value;
  EmitNumber(out, t.tFAW);
  out << YAML::Key << "channels_per_unit" << YAML::Value
      << t.channels_per_unit;
  out << YAML::Key << "row_bytes" << YAML::Value;
  EmitNumber(out, t.row_bytes);
  out << YAML::EndMap;
}

void EmitLayers(YAML::Emitter& out, const std::vector<std::int64_t>& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (auto x : v) out << x;
  out << YAML::EndSeq;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  try {
    return ParseRoot(root);
  } catch (const YAML::Exception& e) {
    throw Error("BAD_VALUE", e.what());
  }
}

Scenario load_scenario(std::string_view text) {
  Scenario s = parse_scenario(text);
  require_valid(s);
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IO_ERROR", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

std::string serialize(const Scenario& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;

  const ModelConfig& m = s.model;
  out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "num_dense_features" << YAML::Value
      << m.num_dense_features;
  out << YAML::Key << "num_tables" << YAML::Value << m.num_tables;
  out << YAML::Key << "lookups_per_table" << YAML::Value
      << m.lookups_per_table;
  out << YAML::Key << "embedding_dim" << YAML::Value << m.embedding_dim;
  out << YAML::Key << "element_bytes" << YAML::Value << m.element_bytes;
  out << YAML::Key << "index_bytes" << YAML::Value << m.index_bytes;
  out << YAML::Key << "bottom_mlp_layers" << YAML::Value;
  EmitLayers(out, m.bottom_mlp_layers);
  out << YAML::Key << "top_mlp_layers" << YAML::Value;
  EmitLayers(out, m.top_mlp_layers);
  out << YAML::Key << "batch_size" << YAML::Value << m.batch_size;
  if (m.table_cardinalities) {
    out << YAML::Key << "table_cardinalities" << YAML::Value;
    EmitLayers(out, *m.table_cardinalities);
  }
  out << YAML::EndMap;

  const ChipSpec& chip = s.system.chip;
  out << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "num_chips" << YAML::Value << s.system.num_chips;
  out << YAML::Key << "chip" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "compute_rate" << YAML::Value;
  EmitNumber(out, chip.compute_rate);
  if (chip.onchip_buffer_bytes) {
    out << YAML::Key << "onchip_buffer_bytes" << YAML::Value;
    EmitNumber(out, *chip.onchip_buffer_bytes);
  }
  out << YAML::Key << "bulk_lookup_fraction" << YAML::Value;
  EmitNumber(out, chip.bulk_lookup_fraction);
  out << YAML::Key << "memory" << YAML::Value << YAML::BeginSeq;
  for (const auto& mem : chip.memory) {
    out << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << std::string(to_string(mem.kind));
    out << YAML::Key << "units" << YAML::Value << mem.units;
    out << YAML::Key << "capacity_bytes" << YAML::Value;
    EmitNumber(out, mem.capacity_bytes);
    out << YAML::Key << "role" << YAML::Value << std::string(to_string(mem.role));
    if (mem.effective_bw_override) {
      out << YAML::Key << "effective_bw_override" << YAML::Value;
      EmitNumber(out, *mem.effective_bw_override);
    }
    out << YAML::Key << "timing" << YAML::Value;
    EmitTiming(out, mem.timing);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  const CcSpec& cc = chip.cc;
  out << YAML::Key << "cc" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "topology" << YAML::Value
      << std::string(to_string(cc.topology));
  out << YAML::Key << "per_chip_bandwidth" << YAML::Value;
  EmitNumber(out, cc.per_chip_bandwidth);
  out << YAML::Key << "link_efficiency" << YAML::Value;
  EmitNumber(out, cc.link_efficiency);
  out << YAML::Key << "latency" << YAML::Value << YAML::BeginMap;
  for (CcOpKind kind : kAllCcOpKinds) {
    out << YAML::Key << std::string(to_string(kind)) << YAML::Value;
    EmitNumber(out, cc.latency_by_op[kind]);
  }
  out << YAML::EndMap;
  out << YAML::Key << "switch_traversal_latency" << YAML::Value;
  EmitNumber(out, cc.switch_traversal_latency);
  if (cc.ring_all_to_all_factor) {
    out << YAML::Key << "ring_all_to_all_factor" << YAML::Value;
    EmitNumber(out, *cc.ring_all_to_all_factor);
  }
  out << YAML::EndMap;  // cc
  out << YAML::EndMap;  // chip
  out << YAML::EndMap;  // system

  out << YAML::Key << "sharding" << YAML::Value
      << std::string(to_string(s.sharding.kind));
  out << YAML::Key << "assume_balanced" << YAML::Value
      << s.sharding.assume_balanced;
  out << YAML::Key << "mode" << YAML::Value << std::string(to_string(s.mode));
  out << YAML::Key << "overlap_policy" << YAML::Value
      << std::string(to_string(s.overlap_policy));
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace recperf
