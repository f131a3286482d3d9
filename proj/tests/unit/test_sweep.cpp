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

#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "recperf/error.hpp"
#include "recperf/sweep.hpp"

namespace recperf {
namespace {

Scenario Ref8Small(ShardingMode sharding,
                   OverlapPolicy policy = OverlapPolicy::kPipelined) {
  return make_scenario("dlrm-rm2-small", "ref8-homogeneous", sharding,
                       Mode::kInference, policy);
}

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

SweepGrid Grid2x2(const Scenario& base) {
  SweepGrid g;
  g.base = base;
  g.latency_axis = {1e-6, 5e-6};
  g.bandwidth_axis = {200e9, 800e9};
  return g;
}

TEST_CASE("grid rows are latency-major") {
  const auto rows = run_sweep(Grid2x2(Ref8Small(ShardingMode::unsharded())));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].latency == 1e-6);
  CHECK(rows[0].bandwidth == 200e9);
  CHECK(rows[1].latency == 1e-6);
  CHECK(rows[1].bandwidth == 800e9);
  CHECK(rows[2].latency == 5e-6);
  CHECK(rows[3].bandwidth == 800e9);
}

TEST_CASE("default grid") {
  const SweepGrid g = default_grid(Ref8Small(ShardingMode::unsharded()));
  REQUIRE(g.latency_axis.size() == 20);
  REQUIRE(g.bandwidth_axis.size() == 19);
  CHECK(g.latency_axis.front() == 0.5e-6);
  CHECK(g.latency_axis.back() == 10e-6);
  CHECK(g.bandwidth_axis.front() == 100e9);
  CHECK(g.bandwidth_axis[1] == doctest::Approx(150e9));
  CHECK(g.bandwidth_axis.back() == 1000e9);
  CHECK(g.latency_axis[1] / g.latency_axis[0] ==
        doctest::Approx(g.latency_axis[19] / g.latency_axis[18]));
  CHECK_NOTHROW(validate_grid(g));
}

TEST_CASE("axis validation") {
  SweepGrid g = Grid2x2(Ref8Small(ShardingMode::unsharded()));
  g.latency_axis = {5e-6, 1e-6};
  CHECK_THROWS_AS(run_sweep(g), Error);
  g.latency_axis = {1e-6, 1e-6};
  CHECK_THROWS_AS(validate_grid(g), Error);
  g.latency_axis = {};
  CHECK_THROWS_AS(validate_grid(g), Error);
  g.latency_axis = {1e-6};
  g.bandwidth_axis = {-1};
  CHECK_THROWS_AS(validate_grid(g), Error);
  CHECK_THROWS_AS(log_axis(2, 1, 3), Error);
}

TEST_CASE("latency override can target selected op kinds") {
  SweepGrid g = Grid2x2(Ref8Small(ShardingMode::unsharded()));
  g.vary_op_kinds = {CcOpKind::kAllReduce};
  const auto rows = run_sweep(g);
  // Inference issues no all-reduce, so the latency axis has no effect.
  CHECK(rows[0].estimate.step_time == rows[2].estimate.step_time);
  const Scenario s = with_cc(g.base, 7e-6, 1e9, {CcOpKind::kAllToAll});
  CHECK(s.system.chip.cc.latency_by_op[CcOpKind::kAllToAll] == 7e-6);
  CHECK(s.system.chip.cc.latency_by_op[CcOpKind::kAllReduce] == 1e-6);
  CHECK(s.system.chip.cc.per_chip_bandwidth == 1e9);
}

TEST_CASE("latency matters at both ends of the bandwidth range") {
  SweepGrid g;
  g.base = Ref8Small(ShardingMode::unsharded());
  g.latency_axis = {0.5e-6, 10e-6};
  g.bandwidth_axis = {100e9, 1000e9};
  const auto rows = run_sweep(g);
  for (size_t b = 0; b < 2; ++b) {
    const double ratio = rows[b].estimate.qps / rows[2 + b].estimate.qps;
    CAPTURE(g.bandwidth_axis[b]);
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 6.0);
  }
}

TEST_CASE("large unsharded throughput barely depends on bandwidth") {
  SweepGrid g = default_grid(make_scenario("dlrm-rm2-large", "ref8-homogeneous",
                                           ShardingMode::unsharded(),
                                           Mode::kInference));
  g.latency_axis = {0.5e-6, 10e-6};
  const auto rows = run_sweep(g);
  const size_t nb = g.bandwidth_axis.size();
  for (size_t l = 0; l < 2; ++l) {
    double lo = rows[l * nb].estimate.qps, hi = lo;
    for (size_t b = 0; b < nb; ++b) {
      lo = std::min(lo, rows[l * nb + b].estimate.qps);
      hi = std::max(hi, rows[l * nb + b].estimate.qps);
    }
    CHECK(hi / lo - 1 < 0.15);
  }
}

TEST_CASE("sharding penalty at 10 us shrinks with bandwidth") {
  const auto penalty = [](double bw) {
    SweepGrid g;
    g.latency_axis = {10e-6};
    g.bandwidth_axis = {bw};
    g.base = Ref8Small(ShardingMode::unsharded());
    const double unsharded = run_sweep(g)[0].estimate.qps;
    g.base = Ref8Small(ShardingMode::fully_sharded());
    return unsharded / run_sweep(g)[0].estimate.qps;
  };
  CHECK(penalty(100e9) == doctest::Approx(3.1).epsilon(0.30));
  CHECK(penalty(1000e9) == doctest::Approx(1.2).epsilon(0.30));
}

TEST_CASE("qps is monotone along every grid row and column") {
  for (auto sharding : {ShardingMode::unsharded(), ShardingMode::fully_sharded()}) {
    for (Mode mode : {Mode::kInference, Mode::kTraining}) {
      SweepGrid g = default_grid(Ref8Small(sharding));
      g.base.mode = mode;
      const auto rows = run_sweep(g, 0);
      const size_t nb = g.bandwidth_axis.size();
      for (size_t i = 0; i < rows.size(); ++i) {
        if (i % nb > 0) {
          REQUIRE(rows[i].estimate.qps >= rows[i - 1].estimate.qps);
        }
        if (i >= nb) {
          REQUIRE(rows[i].estimate.qps <= rows[i - nb].estimate.qps);
        }
      }
    }
  }
}

TEST_CASE("sweep output does not depend on threading") {
  SweepGrid g = default_grid(Ref8Small(ShardingMode::fully_sharded()));
  g.base.mode = Mode::kTraining;
  std::ostringstream serial, parallel, again;
  emit(run_sweep(g, 1), OutputFormat::kCsv, serial);
  emit(run_sweep(g, 8), OutputFormat::kCsv, parallel);
  emit(run_sweep(g, 0), OutputFormat::kCsv, again);
  CHECK(serial.str() == parallel.str());
  CHECK(serial.str() == again.str());
}

TEST_CASE("errors inside workers propagate") {
  SweepGrid g = Grid2x2(Ref8Small(ShardingMode::unsharded()));
  g.base.system.chip.memory[0].effective_bw_override = 0.0;
  CHECK_THROWS_AS(run_sweep(g, 4), Error);
}

TEST_CASE("CSV shape and phase recomposition") {
  SweepGrid g = Grid2x2(
      Ref8Small(ShardingMode::unsharded(), OverlapPolicy::kSequential));
  g.base.mode = Mode::kTraining;
  std::ostringstream out;
  emit(run_sweep(g), OutputFormat::kCsv, out);
  const auto lines = Lines(out.str());
  REQUIRE(lines.size() == 5);
  const auto header = Split(lines[0]);
  const std::vector<std::string> fixed = {
      "latency_s", "bandwidth_Bps", "qps", "samples_per_sec", "step_time_s",
      "mem_util", "allreduce_fraction", "bottleneck"};
  REQUIRE(header.size() == fixed.size() + kPhaseNames.size());
  for (size_t i = 0; i < fixed.size(); ++i) CHECK(header[i] == fixed[i]);
  for (size_t i = 0; i < kPhaseNames.size(); ++i) {
    CHECK(header[fixed.size() + i] == kPhaseNames[i]);
  }
  for (size_t r = 1; r < lines.size(); ++r) {
    const auto cells = Split(lines[r]);
    REQUIRE(cells.size() == header.size());
    double sum = 0;
    for (size_t i = fixed.size(); i < cells.size(); ++i) sum += std::stod(cells[i]);
    CHECK(sum == doctest::Approx(std::stod(cells[4])).epsilon(1e-12));
  }
}

TEST_CASE("inference CSV has four phase columns") {
  std::ostringstream out;
  emit(run_sweep(Grid2x2(Ref8Small(ShardingMode::unsharded()))),
       OutputFormat::kCsv, out);
  CHECK(Split(Lines(out.str())[0]).size() == 8 + kInferencePhaseCount);
}

TEST_CASE("JSON round trip") {
  SweepGrid g = Grid2x2(Ref8Small(ShardingMode::fully_sharded()));
  g.base.mode = Mode::kTraining;
  const auto rows = run_sweep(g);
  std::ostringstream out;
  emit(rows, OutputFormat::kJson, out);
  const auto back = sweep_rows_from_json(out.str());
  REQUIRE(back.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].latency == rows[i].latency);
    CHECK(back[i].bandwidth == rows[i].bandwidth);
    CHECK(back[i].estimate.step_time == rows[i].estimate.step_time);
    CHECK(back[i].estimate.qps == rows[i].estimate.qps);
    CHECK(back[i].estimate.allreduce_fraction ==
          rows[i].estimate.allreduce_fraction);
    CHECK(back[i].estimate.breakdown == rows[i].estimate.breakdown);
  }
}

TEST_CASE("emit errors") {
  CHECK_THROWS_AS(output_format_from_string("xml"), Error);
  std::ostringstream out;
  CHECK_THROWS_AS(emit(std::vector<SweepRow>{}, OutputFormat::kCsv, out), Error);
  CHECK_THROWS_AS(emit(std::vector<ComparisonRow>{}, OutputFormat::kJson, out),
                  Error);
}

TEST_CASE("comparison against the baseline system") {
  Scenario dgx, rs;
  dgx.system = system_preset("dgx2");
  rs.system = system_preset("recspeed16");
  const auto inf = compare(dgx, rs, default_compare_configs(Mode::kInference));
  const std::vector<double> inf_want = {62, 46, 12, 14};
  REQUIRE(inf.size() == 4);
  for (size_t i = 0; i < 4; ++i) {
    CAPTURE(inf[i].config_label);
    CHECK(inf[i].speedup == doctest::Approx(inf_want[i]).epsilon(0.35));
    CHECK(inf[i].speedup == inf[i].candidate_qps / inf[i].baseline_qps);
  }
  const auto train = compare(dgx, rs, default_compare_configs(Mode::kTraining));
  const std::vector<double> train_want = {45, 39, 12, 13};
  for (size_t i = 0; i < 4; ++i) {
    CAPTURE(train[i].config_label);
    CHECK(train[i].speedup == doctest::Approx(train_want[i]).epsilon(0.35));
  }
}

TEST_CASE("self comparison and swapped arguments") {
  Scenario dgx, rs;
  dgx.system = system_preset("dgx2");
  rs.system = system_preset("recspeed16");
  for (Mode mode : {Mode::kInference, Mode::kTraining}) {
    const auto configs = default_compare_configs(mode);
    for (const auto& r : compare(rs, rs, configs)) CHECK(r.speedup == 1.0);
    const auto fwd = compare(dgx, rs, configs);
    const auto rev = compare(rs, dgx, configs);
    for (size_t i = 0; i < fwd.size(); ++i) {
      CHECK(fwd[i].speedup * rev[i].speedup == doctest::Approx(1.0));
      CHECK(fwd[i].speedup > 0);
    }
  }
}

TEST_CASE("comparison CSV") {
  Scenario dgx, rs;
  dgx.system = system_preset("dgx2");
  rs.system = system_preset("recspeed16");
  std::ostringstream out;
  emit(compare(dgx, rs, default_compare_configs(Mode::kTraining)),
       OutputFormat::kCsv, out);
  const auto lines = Lines(out.str());
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] ==
        "config,mode,candidate_qps,candidate_metric,baseline_qps,"
        "baseline_metric,metric,speedup");
  CHECK(lines[1].rfind("small/unsharded,training,", 0) == 0);
  CHECK(lines[1].find(",allreduce_fraction,") != std::string::npos);
}

TEST_CASE("output naming") {
  CHECK(output_basename("ref8-small", Mode::kTraining, Sharding::kFullySharded) ==
        "ref8-small_training_sharded");
  CHECK(output_basename("x", Mode::kInference, Sharding::kUnsharded) ==
        "x_inference_unsharded");
}

}  // namespace
}  // namespace recperf
