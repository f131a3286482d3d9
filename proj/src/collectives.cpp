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

#include "recperf/collectives.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include "json.hpp"
#include "recperf/error.hpp"

namespace recperf {

std::string_view to_string(CcOpKind kind) {
  switch (kind) {
    case CcOpKind::kAllToAll:
      return "all_to_all";
    case CcOpKind::kAllReduce:
      return "all_reduce";
    case CcOpKind::kReduceScatter:
      return "reduce_scatter";
    case CcOpKind::kAllGather:
      return "all_gather";
  }
  return "?";
}

std::string_view to_string(Topology topology) {
  switch (topology) {
    case Topology::kQuadraticPointToPoint:
      return "quadratic";
    case Topology::kSwitchedAllToAll:
      return "switched";
    case Topology::kRing:
      return "ring";
  }
  return "?";
}

CcOpKind cc_op_kind_from_string(std::string_view name) {
  for (auto kind : kAllCcOpKinds) {
    if (to_string(kind) == name) return kind;
  }
  throw Error("UNKNOWN_ENUM", "unknown CC op '" + std::string(name) + "'");
}

Topology topology_from_string(std::string_view name) {
  for (auto t : {Topology::kQuadraticPointToPoint, Topology::kSwitchedAllToAll,
                 Topology::kRing}) {
    if (to_string(t) == name) return t;
  }
  throw Error("UNKNOWN_ENUM", "unknown topology '" + std::string(name) + "'");
}

double wire_bytes_per_proc(CcOpKind kind, double payload, int n) {
  if (n <= 0) {
    throw Error("INVALID_ARGUMENT", "collective needs at least one processor");
  }
  if (n == 1) return 0.0;
  const double others = n - 1.0;
  switch (kind) {
    case CcOpKind::kAllToAll:
    case CcOpKind::kReduceScatter:
      return payload * others / n;
    case CcOpKind::kAllReduce:
      return 2.0 * payload * others / n;
    case CcOpKind::kAllGather:
      return payload * others;
  }
  return 0.0;
}

double ring_mean_hops(int n) {
  if (n <= 0) throw Error("INVALID_ARGUMENT", "ring needs n >= 1");
  // Sum of min(k, n-k) for k in [0, n), times n sources, over n^2 pairs.
  if (n % 2 == 0) return n / 4.0;
  return (static_cast<double>(n) * n - 1.0) / (4.0 * n);
}

double topology_adjusted_wire_bytes(CcOpKind kind, double wire_bytes, int n,
                                    const CcSpec& spec) {
  if (spec.topology != Topology::kRing || kind != CcOpKind::kAllToAll) {
    return wire_bytes;
  }
  const double factor = spec.ring_all_to_all_factor.value_or(
      std::max(1.0, ring_mean_hops(n)));
  return wire_bytes * factor;
}

double cc_latency(CcOpKind kind, const CcSpec& spec) {
  double latency = spec.latency_by_op[kind];
  if (spec.topology == Topology::kSwitchedAllToAll) {
    latency += spec.switch_traversal_latency;
  }
  return latency;
}

double cc_wire_time(CcOpKind kind, double payload, int n, const CcSpec& spec) {
  const double wire = topology_adjusted_wire_bytes(
      kind, wire_bytes_per_proc(kind, payload, n), n, spec);
  return wire / (spec.per_chip_bandwidth * spec.link_efficiency);
}

double cc_time(CcOpKind kind, double payload, int n, const CcSpec& spec) {
  if (n == 1) return 0.0;
  return cc_latency(kind, spec) + cc_wire_time(kind, payload, n, spec);
}

CalibrationFit fit_latency_bandwidth(
    std::span<const CalibrationSample> samples) {
  const auto distinct = [&] {
    if (samples.empty()) return false;
    return std::any_of(samples.begin(), samples.end(), [&](const auto& s) {
      return s.payload_bytes != samples.front().payload_bytes;
    });
  }();
  if (samples.size() < 2 || !distinct) {
    throw Error("DEGENERATE_SAMPLES",
                "calibration needs at least two distinct payload sizes");
  }
  // Centered sums keep the normal equations well conditioned when payloads
  // span many decades.
  const double count = static_cast<double>(samples.size());
  double mean_x = 0, mean_y = 0;
  for (const auto& s : samples) {
    mean_x += s.payload_bytes;
    mean_y += s.measured_time;
  }
  mean_x /= count;
  mean_y /= count;
  double sxx = 0, sxy = 0;
  for (const auto& s : samples) {
    const double dx = s.payload_bytes - mean_x;
    sxx += dx * dx;
    sxy += dx * (s.measured_time - mean_y);
  }
  const double slope = sxy / sxx;
  if (!(slope > 0)) {
    throw Error("NONPOSITIVE_SLOPE",
                "fitted time-per-byte is not positive; no bandwidth fits");
  }
  CalibrationFit fit;
  fit.bandwidth = 1.0 / slope;
  fit.latency = mean_y - slope * mean_x;
  if (fit.latency < 0) {
    fit.latency = 0;
    fit.latency_clamped = true;
  }
  double sq = 0;
  for (const auto& s : samples) {
    const double r = s.measured_time - (fit.latency + slope * s.payload_bytes);
    sq += r * r;
  }
  fit.residual = std::sqrt(sq / count);
  return fit;
}

std::vector<CalibrationSample> read_calibration_csv(std::istream& in) {
  std::vector<CalibrationSample> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError("expected two comma-separated columns", line_no, 1);
    }
    const std::string a = line.substr(0, comma);
    const std::string b = line.substr(comma + 1);
    std::size_t used_a = 0, used_b = 0;
    double payload = 0, time = 0;
    try {
      payload = std::stod(a, &used_a);
      time = std::stod(b, &used_b);
    } catch (const std::exception&) {
      if (line_no == 1 && samples.empty()) continue;  // header row
      throw ParseError("non-numeric calibration field", line_no, 1);
    }
    const auto trailing = [](const std::string& s, std::size_t used) {
      return s.find_first_not_of(" \t", used) != std::string::npos;
    };
    if (trailing(a, used_a) || trailing(b, used_b)) {
      throw ParseError("trailing characters in calibration field", line_no,
                       static_cast<int>(trailing(a, used_a) ? used_a + 1
                                                            : comma + 2 + used_b));
    }
    if (!(payload > 0) || !(time > 0)) {
      throw ValidationError("NONPOSITIVE_SAMPLE",
                            "calibration samples must be positive (line " +
                                std::to_string(line_no) + ")");
    }
    samples.push_back({payload, time});
  }
  return samples;
}

std::string calibration_fit_json(const CalibrationFit& fit) {
  nlohmann::ordered_json j;
  j["latency_s"] = fit.latency;
  j["bandwidth_Bps"] = fit.bandwidth;
  j["residual_rms_s"] = fit.residual;
  j["latency_clamped"] = fit.latency_clamped;
  return j.dump(2);
}

}  // namespace recperf
