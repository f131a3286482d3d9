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

#include "recperf/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "recperf/error.hpp"
#include "recperf/format.hpp"

namespace recperf {

namespace {

void CheckAxis(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) {
    throw Error("AXIS_INVALID", std::string(name) + " axis is empty");
  }
  for (size_t i = 0; i < axis.size(); ++i) {
    if (!(axis[i] > 0) || !std::isfinite(axis[i])) {
      throw Error("AXIS_INVALID", std::string(name) + " axis must be positive");
    }
    if (i > 0 && !(axis[i] > axis[i - 1])) {
      throw Error("AXIS_INVALID",
                  std::string(name) + " axis must be strictly increasing");
    }
  }
}

double Metric(const StepEstimate& e) {
  return e.mode == Mode::kInference ? e.mem_util : e.allreduce_fraction;
}

const char* MetricName(Mode mode) {
  return mode == Mode::kInference ? "mem_util" : "allreduce_fraction";
}

}  // namespace

std::vector<double> log_axis(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0) || !(hi >= lo)) {
    throw Error("AXIS_INVALID", "log axis needs 0 < lo <= hi and count >= 1");
  }
  if (count == 1) return {lo};
  std::vector<double> v(count);
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) v[i] = lo * std::exp(step * i);
  v.front() = lo;
  v.back() = hi;
  return v;
}

std::vector<double> linear_axis(double lo, double hi, int count) {
  if (count < 1 || !(hi >= lo)) {
    throw Error("AXIS_INVALID", "linear axis needs lo <= hi and count >= 1");
  }
  if (count == 1) return {lo};
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) {
    v[i] = lo + (hi - lo) * i / (count - 1);
  }
  v.back() = hi;
  return v;
}

SweepGrid default_grid(const Scenario& base) {
  SweepGrid g;
  g.latency_axis = log_axis(0.5e-6, 10e-6, 20);
  g.bandwidth_axis = linear_axis(100e9, 1000e9, 19);
  g.base = base;
  return g;
}

void validate_grid(const SweepGrid& g) {
  CheckAxis(g.latency_axis, "latency");
  CheckAxis(g.bandwidth_axis, "bandwidth");
}

Scenario with_cc(const Scenario& s, double latency, double bandwidth,
                 const std::vector<CcOpKind>& kinds) {
  Scenario out = s;
  for (CcOpKind kind : kinds) out.system.chip.cc.latency_by_op[kind] = latency;
  out.system.chip.cc.per_chip_bandwidth = bandwidth;
  return out;
}

std::vector<SweepRow> run_sweep(const SweepGrid& g, int threads) {
  validate_grid(g);
  require_valid(g.base);
  const size_t nb = g.bandwidth_axis.size();
  const size_t total = g.latency_axis.size() * nb;
  std::vector<SweepRow> rows(total);

  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  const auto worker = [&] {
    for (size_t i = next++; i < total; i = next++) {
      try {
        SweepRow& row = rows[i];
        row.latency = g.latency_axis[i / nb];
        row.bandwidth = g.bandwidth_axis[i % nb];
        row.estimate = estimate(
            with_cc(g.base, row.latency, row.bandwidth, g.vary_op_kinds));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = total;
      }
    }
  };

  if (threads <= 0) {
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  threads = static_cast<int>(std::min<size_t>(threads, total));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<CompareConfig> default_compare_configs(Mode mode) {
  std::vector<CompareConfig> out;
  for (const char* size : {"small", "large"}) {
    const ModelConfig model =
        model_preset(std::string("dlrm-rm2-") + size);
    out.push_back({std::string(size) + "/unsharded", model,
                   ShardingMode::unsharded(), mode});
    out.push_back({std::string(size) + "/sharded", model,
                   ShardingMode::fully_sharded(), mode});
  }
  return out;
}

std::vector<ComparisonRow> compare(const Scenario& baseline,
                                   const Scenario& candidate,
                                   const std::vector<CompareConfig>& configs) {
  std::vector<ComparisonRow> rows;
  rows.reserve(configs.size());
  for (const auto& c : configs) {
    const auto apply = [&](Scenario s) {
      s.model = c.model;
      s.sharding = c.sharding;
      s.mode = c.mode;
      return estimate(s);
    };
    const StepEstimate b = apply(baseline);
    const StepEstimate k = apply(candidate);
    ComparisonRow r;
    r.config_label = c.label;
    r.mode = c.mode;
    r.baseline_qps = b.qps;
    r.baseline_metric = Metric(b);
    r.candidate_qps = k.qps;
    r.candidate_metric = Metric(k);
    r.speedup = k.qps / b.qps;
    rows.push_back(r);
  }
  return rows;
}

OutputFormat output_format_from_string(std::string_view s) {
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "json") return OutputFormat::kJson;
  throw Error("UNKNOWN_FORMAT",
              "unknown output format '" + std::string(s) + "'; use csv or json");
}

void emit(const std::vector<SweepRow>& rows, OutputFormat format,
          std::ostream& out) {
  if (rows.empty()) throw Error("EMPTY_TABLE", "nothing to emit");
  if (format == OutputFormat::kJson) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      auto j = nlohmann::ordered_json::parse(step_estimate_json(r.estimate, -1));
      nlohmann::ordered_json row;
      row["latency_s"] = r.latency;
      row["bandwidth_Bps"] = r.bandwidth;
      for (auto& [k, v] : j.items()) row[k] = v;
      arr.push_back(std::move(row));
    }
    out << arr.dump(2) << '\n';
  } else {
    out << "latency_s,bandwidth_Bps,qps,samples_per_sec,step_time_s,mem_util,"
           "allreduce_fraction,bottleneck";
    const auto& phases = rows.front().estimate.breakdown;
    for (const auto& p : phases) out << ',' << p.name;
    out << '\n';
    for (const auto& r : rows) {
      const StepEstimate& e = r.estimate;
      out << FormatDouble(r.latency) << ',' << FormatDouble(r.bandwidth) << ','
          << FormatDouble(e.qps) << ',' << FormatDouble(e.samples_per_sec)
          << ',' << FormatDouble(e.step_time) << ','
          << FormatDouble(e.mem_util) << ','
          << FormatDouble(e.allreduce_fraction) << ','
          << to_string(e.bottleneck);
      for (const auto& p : phases) out << ',' << FormatDouble(e.phase(p.name));
      out << '\n';
    }
  }
  if (!out) throw Error("IO_ERROR", "write failed");
}

void emit(const std::vector<ComparisonRow>& rows, OutputFormat format,
          std::ostream& out) {
  if (rows.empty()) throw Error("EMPTY_TABLE", "nothing to emit");
  if (format == OutputFormat::kJson) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json j;
      j["config"] = r.config_label;
      j["mode"] = std::string(to_string(r.mode));
      j["candidate_qps"] = r.candidate_qps;
      j["candidate_metric"] = r.candidate_metric;
      j["baseline_qps"] = r.baseline_qps;
      j["baseline_metric"] = r.baseline_metric;
      j["metric"] = MetricName(r.mode);
      j["speedup"] = r.speedup;
      arr.push_back(std::move(j));
    }
    out << arr.dump(2) << '\n';
  } else {
    out << "config,mode,candidate_qps,candidate_metric,baseline_qps,"
           "baseline_metric,metric,speedup\n";
    for (const auto& r : rows) {
      out << r.config_label << ',' << to_string(r.mode) << ','
          << FormatDouble(r.candidate_qps) << ','
          << FormatDouble(r.candidate_metric) << ','
          << FormatDouble(r.baseline_qps) << ','
          << FormatDouble(r.baseline_metric) << ',' << MetricName(r.mode)
          << ',' << FormatDouble(r.speedup) << '\n';
    }
  }
  if (!out) throw Error("IO_ERROR", "write failed");
}

std::vector<SweepRow> sweep_rows_from_json(std::string_view text) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(err.what(), 1, static_cast<int>(err.byte));
  }
  if (!arr.is_array()) throw Error("BAD_VALUE", "expected a JSON array");
  std::vector<SweepRow> rows;
  for (const auto& j : arr) {
    SweepRow r;
    try {
      r.latency = j.at("latency_s").get<double>();
      r.bandwidth = j.at("bandwidth_Bps").get<double>();
    } catch (const nlohmann::json::exception& err) {
      throw Error("MISSING_FIELD", err.what());
    }
    r.estimate = step_estimate_from_json(j.dump());
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string output_basename(std::string_view label, Mode mode,
                            Sharding sharding) {
  return std::string(label) + "_" + std::string(to_string(mode)) + "_" +
         std::string(to_string(sharding));
}

}  // namespace recperf
