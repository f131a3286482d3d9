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

#include "recperf/memory_model.hpp"

#include <ostream>

#include "recperf/error.hpp"
#include "recperf/format.hpp"

namespace recperf {

CapacitySummary capacity_summary(const SystemSpec& sys) {
  CapacitySummary c;
  for (const auto& mem : sys.chip.memory) {
    (mem.role == MemoryRole::kFast ? c.fast_bytes : c.bulk_bytes) +=
        mem.capacity_bytes * sys.num_chips;
  }
  c.total_bytes = c.fast_bytes + c.bulk_bytes;
  c.fast_fraction = c.total_bytes > 0 ? c.fast_bytes / c.total_bytes : 0.0;
  return c;
}

double memory_bandwidth(const MemorySystemSpec& mem, double access_bytes,
                        AccessDirection direction) {
  if (mem.effective_bw_override) return *mem.effective_bw_override;
  return effective_random_access_bandwidth(mem.timing, mem.units, access_bytes,
                                           direction);
}

double embedding_access_time(const ChipSpec& chip, double bytes,
                             double access_bytes, AccessDirection direction) {
  if (bytes <= 0) return 0.0;
  const MemorySystemSpec& fast = fast_memory(chip);
  const MemorySystemSpec* bulk = bulk_memory(chip);
  const double fast_bw = memory_bandwidth(fast, access_bytes, direction);
  if (!(fast_bw > 0)) {
    throw Error("ZERO_BANDWIDTH", "memory system has no effective bandwidth");
  }
  if (bulk == nullptr || chip.bulk_lookup_fraction <= 0) {
    return bytes / fast_bw;
  }
  const double bulk_bw = memory_bandwidth(*bulk, access_bytes, direction);
  if (!(bulk_bw > 0)) {
    throw Error("ZERO_BANDWIDTH", "memory system has no effective bandwidth");
  }
  const double bulk_bytes = bytes * chip.bulk_lookup_fraction;
  return hybrid_lookup_time(fast_bw, bulk_bw, bytes - bulk_bytes, bulk_bytes);
}

void write_timing_table(std::ostream& out) {
  out << "name,data_rate_Tps,channel_width_bits,burst_length,banks_per_channel,"
         "tRC_s,tRRD_s,tFAW_s,channels_per_unit,row_bytes\n";
  for (const auto& name : timing_preset_names()) {
    const auto& t = timing_preset(name);
    out << t.name << ',' << FormatDouble(t.data_rate) << ','
        << t.channel_width_bits << ',' << t.burst_length << ','
        << t.banks_per_channel << ',' << FormatDouble(t.tRC) << ','
        << FormatDouble(t.tRRD) << ',' << FormatDouble(t.tFAW) << ','
        << t.channels_per_unit << ',' << FormatDouble(t.row_bytes) << '\n';
  }
}

void write_bandwidth_curves_csv(std::ostream& out,
                                std::span<const double> access_sizes) {
  out << "preset,units,access_bytes,effective_Bps,pin_Bps\n";
  for (const auto& name : timing_preset_names()) {
    const auto& t = timing_preset(name);
    // A 6-channel server DDR4 system; one stack or device otherwise.
    const int units = t.name.rfind("DDR4", 0) == 0 ? 6 : 1;
    for (double size : access_sizes) {
      out << t.name << ',' << units << ',' << FormatDouble(size) << ','
          << FormatDouble(effective_random_access_bandwidth(
                 t, units, size, AccessDirection::kRead))
          << ',' << FormatDouble(pin_bandwidth(t, units)) << '\n';
    }
  }
}

}  // namespace recperf
