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

#ifndef RECPERF_DRAM_HPP_
#define RECPERF_DRAM_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace recperf {

enum class MemoryKind { kDDR4, kGDDR6, kHBM2, kHBM2E };
enum class AccessDirection { kRead, kWrite };

std::string_view to_string(MemoryKind kind);
MemoryKind memory_kind_from_string(std::string_view name);

// Timing parameters of one DRAM channel. All times are in seconds and
// data_rate is in transfers per second per pin (the "MHz" figure vendors
// quote for DDR parts is this transfer rate).
struct DramTimingSpec {
  std::string name;
  double data_rate = 0;
  int channel_width_bits = 0;
  int burst_length = 0;
  int banks_per_channel = 0;
  double tRC = 0;
  double tRRD = 0;  // short (different bank group) activate-to-activate
  double tFAW = 0;
  int channels_per_unit = 0;
  // Bytes of one open row across the full channel width. Accesses larger than
  // this would need more than one activate.
  double row_bytes = 0;

  bool operator==(const DramTimingSpec&) const = default;
};

// Throws ValidationError("TIMING_INVALID") on non-positive fields or
// tFAW < tRRD / tRC < tRRD.
void validate_timing(const DramTimingSpec& t);

// Named timing presets: DDR4-3200, GDDR6-14000, HBM2-2300, HBM2-2430,
// HBM2E-2400, HBM2E-3000. Throws Error("UNKNOWN_PRESET").
const DramTimingSpec& timing_preset(std::string_view name);
std::vector<std::string> timing_preset_names();

double bytes_per_burst(const DramTimingSpec& t);

// units x channels_per_unit x width/8 x data_rate.
double pin_bandwidth(const DramTimingSpec& t, int units);

// Sustained bandwidth for a stream of independent random accesses of
// `access_bytes` each, with auto-precharge (every access opens a row).
//
// Per channel, the data bus needs ceil(bytes/burst) bursts of burst_length
// transfers, while the command side can only issue one activate per
// max(tRRD, tFAW/4, tRC/banks). The slower of the two sets the access rate;
// the result is capped at pin bandwidth. Writes follow the read schedule
// (tWR is second order for this access pattern).
//
// Throws ValidationError("ROW_OVERFLOW") when access_bytes > row_bytes and
// Error("INVALID_ARGUMENT") when access_bytes < 1.
double effective_random_access_bandwidth(const DramTimingSpec& t, int units,
                                         double access_bytes,
                                         AccessDirection direction);

// Minimum spacing between activates on one channel.
double activate_interval(const DramTimingSpec& t);

// Two memory systems serve their shares concurrently.
double hybrid_lookup_time(double fast_bw, double bulk_bw, double fast_bytes,
                          double bulk_bytes);

}  // namespace recperf

#endif  // RECPERF_DRAM_HPP_
