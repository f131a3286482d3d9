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

#ifndef RECPERF_COLLECTIVES_HPP_
#define RECPERF_COLLECTIVES_HPP_

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace recperf {

enum class CcOpKind { kAllToAll, kAllReduce, kReduceScatter, kAllGather };
inline constexpr std::array<CcOpKind, 4> kAllCcOpKinds = {
    CcOpKind::kAllToAll, CcOpKind::kAllReduce, CcOpKind::kReduceScatter,
    CcOpKind::kAllGather};

enum class Topology { kQuadraticPointToPoint, kSwitchedAllToAll, kRing };

std::string_view to_string(CcOpKind kind);
std::string_view to_string(Topology topology);
CcOpKind cc_op_kind_from_string(std::string_view name);
Topology topology_from_string(std::string_view name);

// Per-op latency table indexed by CcOpKind.
class LatencyTable {
 public:
  LatencyTable() = default;
  explicit LatencyTable(double uniform) { values_.fill(uniform); }

  double operator[](CcOpKind kind) const {
    return values_[static_cast<size_t>(kind)];
  }
  double& operator[](CcOpKind kind) {
    return values_[static_cast<size_t>(kind)];
  }

  bool operator==(const LatencyTable&) const = default;

 private:
  std::array<double, 4> values_{};
};

// Chip-to-chip collective communication capabilities. Bandwidth is per chip,
// each direction, aggregated over all links.
struct CcSpec {
  Topology topology = Topology::kQuadraticPointToPoint;
  double per_chip_bandwidth = 0;
  double link_efficiency = 1.0;
  LatencyTable latency_by_op;
  double switch_traversal_latency = 0;  // SwitchedAllToAll only
  // Overrides the mean-hop all-to-all multiplier on a Ring.
  std::optional<double> ring_all_to_all_factor;

  bool operator==(const CcSpec&) const = default;
};

// Lower-bound bytes each processor sends (and receives) for one collective
// whose per-processor input payload is `payload`:
//   all-to-all, reduce-scatter: V(n-1)/n
//   all-reduce:                 2V(n-1)/n
//   all-gather:                 V(n-1)
// Zero for n == 1. Throws Error("INVALID_ARGUMENT") for n == 0.
double wire_bytes_per_proc(CcOpKind kind, double payload, int n);

// Mean shortest-path hop count over all n^2 ordered (source, destination)
// pairs of a bidirectional ring, self-pairs included: n/4 for even n.
double ring_mean_hops(int n);

double topology_adjusted_wire_bytes(CcOpKind kind, double wire_bytes, int n,
                                    const CcSpec& spec);

// Latency charged by one invocation of `kind` (includes the switch hop).
double cc_latency(CcOpKind kind, const CcSpec& spec);
// Pure transfer time, no latency.
double cc_wire_time(CcOpKind kind, double payload, int n, const CcSpec& spec);
// latency + wire time; exactly 0 when n == 1.
double cc_time(CcOpKind kind, double payload, int n, const CcSpec& spec);

struct CalibrationSample {
  double payload_bytes = 0;
  double measured_time = 0;
};

struct CalibrationFit {
  double latency = 0;
  double bandwidth = 0;
  double residual = 0;  // RMS, seconds
  bool latency_clamped = false;
};

// Ordinary least squares of time on payload. Throws
// Error("DEGENERATE_SAMPLES") when fewer than two distinct payloads exist and
// Error("NONPOSITIVE_SLOPE") when the fitted slope is <= 0.
CalibrationFit fit_latency_bandwidth(std::span<const CalibrationSample> samples);

// Two-column CSV, optional header row: payload_bytes,seconds.
std::vector<CalibrationSample> read_calibration_csv(std::istream& in);
std::string calibration_fit_json(const CalibrationFit& fit);

}  // namespace recperf

#endif  // RECPERF_COLLECTIVES_HPP_
