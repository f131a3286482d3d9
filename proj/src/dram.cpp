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

#include "recperf/dram.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "recperf/error.hpp"

namespace recperf {

namespace {

// HBM2/HBM2E run the device clock at half the transfer rate; timings quoted
// in clock cycles are converted with this.
constexpr double ClockPeriodHalfRate(double data_rate) {
  return 2.0 / data_rate;
}

// HBM2-class stack: 8 x 128-bit legacy channels, BL4 (64 B per burst),
// tRRD_S = 4 nCK, tFAW = 16 nCK, tRC ~45 ns. 8-high stacks expose 32 banks
// per channel, 4-high stacks 16.
DramTimingSpec HbmPreset(std::string name, double data_rate, int banks) {
  const double tck = ClockPeriodHalfRate(data_rate);
  return DramTimingSpec{
      .name = std::move(name),
      .data_rate = data_rate,
      .channel_width_bits = 128,
      .burst_length = 4,
      .banks_per_channel = banks,
      .tRC = 45e-9,
      .tRRD = 4 * tck,
      .tFAW = 16 * tck,
      .channels_per_unit = 8,
      .row_bytes = 2048,
  };
}

const std::array<DramTimingSpec, 6>& Catalog() {
  static const std::array<DramTimingSpec, 6> kCatalog = {
      // 64-bit channel, BL8, x8 devices with 1 KB pages (8 KB rank row).
      // tRRD_S = max(4 nCK, 2.5 ns), tFAW = 34 nCK at 1600 MHz.
      DramTimingSpec{
          .name = "DDR4-3200",
          .data_rate = 3.2e9,
          .channel_width_bits = 64,
          .burst_length = 8,
          .banks_per_channel = 16,
          .tRC = 45.75e-9,
          .tRRD = 2.5e-9,
          .tFAW = 21.25e-9,
          .channels_per_unit = 1,
          .row_bytes = 8192,
      },
      // Per device: two independent 16-bit channels, BL16 (32 B per burst).
      DramTimingSpec{
          .name = "GDDR6-14000",
          .data_rate = 14e9,
          .channel_width_bits = 16,
          .burst_length = 16,
          .banks_per_channel = 16,
          .tRC = 40e-9,
          .tRRD = 3.5e-9,
          .tFAW = 16e-9,
          .channels_per_unit = 2,
          .row_bytes = 2048,
      },
      HbmPreset("HBM2-2300", 2.3e9, 16),
      HbmPreset("HBM2-2430", 2.43e9, 16),
      HbmPreset("HBM2E-2400", 2.4e9, 32),
      HbmPreset("HBM2E-3000", 3.0e9, 32),
  };
  return kCatalog;
}

}  // namespace

std::string_view to_string(MemoryKind kind) {
  switch (kind) {
    case MemoryKind::kDDR4:
      return "DDR4";
    case MemoryKind::kGDDR6:
      return "GDDR6";
    case MemoryKind::kHBM2:
      return "HBM2";
    case MemoryKind::kHBM2E:
      return "HBM2E";
  }
  return "?";
}

MemoryKind memory_kind_from_string(std::string_view name) {
  for (auto kind : {MemoryKind::kDDR4, MemoryKind::kGDDR6, MemoryKind::kHBM2,
                    MemoryKind::kHBM2E}) {
    if (to_string(kind) == name) return kind;
  }
  throw Error("UNKNOWN_ENUM",
              "unknown memory kind '" + std::string(name) + "'");
}

void validate_timing(const DramTimingSpec& t) {
  const bool positive = t.data_rate > 0 && t.channel_width_bits > 0 &&
                        t.burst_length > 0 && t.banks_per_channel > 0 &&
                        t.tRC > 0 && t.tRRD > 0 && t.tFAW > 0 &&
                        t.channels_per_unit > 0 && t.row_bytes > 0;
  if (!positive) {
    throw ValidationError("TIMING_INVALID",
                          "DRAM timing '" + t.name +
                              "' has a non-positive field");
  }
  if (t.tFAW < t.tRRD || t.tRC < t.tRRD) {
    throw ValidationError("TIMING_INVALID",
                          "DRAM timing '" + t.name +
                              "' violates tFAW >= tRRD and tRC >= tRRD");
  }
}

const DramTimingSpec& timing_preset(std::string_view name) {
  for (const auto& t : Catalog()) {
    if (t.name == name) return t;
  }
  throw Error("UNKNOWN_PRESET",
              "unknown DRAM timing preset '" + std::string(name) + "'");
}

std::vector<std::string> timing_preset_names() {
  std::vector<std::string> names;
  for (const auto& t : Catalog()) names.push_back(t.name);
  return names;
}

double bytes_per_burst(const DramTimingSpec& t) {
  return t.channel_width_bits / 8.0 * t.burst_length;
}

double pin_bandwidth(const DramTimingSpec& t, int units) {
  validate_timing(t);
  if (units <= 0) {
    throw ValidationError("NONPOSITIVE_COUNT", "memory units must be > 0");
  }
  return units * t.channels_per_unit * (t.channel_width_bits / 8.0) *
         t.data_rate;
}

double activate_interval(const DramTimingSpec& t) {
  return std::max({t.tRRD, t.tFAW / 4.0, t.tRC / t.banks_per_channel});
}

double effective_random_access_bandwidth(const DramTimingSpec& t, int units,
                                         double access_bytes,
                                         AccessDirection /*direction*/) {
  const double peak = pin_bandwidth(t, units);
  if (!(access_bytes >= 1)) {
    throw Error("INVALID_ARGUMENT", "access_bytes must be >= 1");
  }
  if (access_bytes > t.row_bytes) {
    throw ValidationError("ROW_OVERFLOW",
                          "access of " + std::to_string(access_bytes) +
                              " B exceeds the " + std::to_string(t.row_bytes) +
                              " B row of " + t.name);
  }
  const double bursts = std::ceil(access_bytes / bytes_per_burst(t));
  const double data_time = bursts * t.burst_length / t.data_rate;
  const double per_access = std::max(data_time, activate_interval(t));
  const double bw =
      access_bytes / per_access * t.channels_per_unit * static_cast<double>(units);
  return std::min(bw, peak);
}

double hybrid_lookup_time(double fast_bw, double bulk_bw, double fast_bytes,
                          double bulk_bytes) {
  if (!(fast_bw > 0) || !(bulk_bw > 0)) {
    throw Error("INVALID_ARGUMENT", "memory bandwidths must be > 0");
  }
  return std::max(fast_bytes / fast_bw, bulk_bytes / bulk_bw);
}

}  // namespace recperf
