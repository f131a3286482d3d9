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

#ifndef RECPERF_MEMORY_MODEL_HPP_
#define RECPERF_MEMORY_MODEL_HPP_

#include <iosfwd>
#include <span>
#include <string>

#include "recperf/dram.hpp"
#include "recperf/scenario.hpp"

namespace recperf {

struct CapacitySummary {
  double total_bytes = 0;
  double fast_bytes = 0;
  double bulk_bytes = 0;
  double fast_fraction = 0;
};

CapacitySummary capacity_summary(const SystemSpec& sys);

// Effective random-access bandwidth of one memory system for accesses of
// `access_bytes`; honours effective_bw_override.
double memory_bandwidth(const MemorySystemSpec& mem, double access_bytes,
                        AccessDirection direction);

// Time for one chip to move `bytes` of embedding rows (each `access_bytes`
// long). With a Fast and a Bulk system, bulk_lookup_fraction of the traffic
// goes to Bulk and both run concurrently. Throws Error("ZERO_BANDWIDTH")
// when a memory system that must serve traffic has no bandwidth.
double embedding_access_time(const ChipSpec& chip, double bytes,
                             double access_bytes, AccessDirection direction);

// One row per timing preset: name, data rate, width, burst, banks, tRC,
// tRRD, tFAW, channels/unit, row bytes.
void write_timing_table(std::ostream& out);

// CSV of effective read bandwidth vs access size for each preset:
// preset,units,access_bytes,effective_Bps,pin_Bps
void write_bandwidth_curves_csv(std::ostream& out,
                                std::span<const double> access_sizes);

}  // namespace recperf

#endif  // RECPERF_MEMORY_MODEL_HPP_
