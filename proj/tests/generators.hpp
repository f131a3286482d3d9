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

// Seeded random inputs for the property tests.

#ifndef RECPERF_TESTS_GENERATORS_HPP_
#define RECPERF_TESTS_GENERATORS_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "recperf/scenario.hpp"

namespace recperf::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  bool coin() { return integer(0, 1) == 1; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<size_t>(integer(0, static_cast<std::int64_t>(v.size()) - 1))];
  }

  ModelConfig model() {
    ModelConfig m;
    m.num_dense_features = integer(1, 512);
    m.num_tables = integer(1, 64);
    m.lookups_per_table = integer(1, 200);
    m.embedding_dim = pick<std::int64_t>({8, 16, 32, 64, 128});
    m.element_bytes = pick<int>({2, 4});
    m.index_bytes = pick<int>({4, 8});
    m.bottom_mlp_layers.clear();
    for (auto k = integer(0, 2); k > 0; --k) {
      m.bottom_mlp_layers.push_back(integer(1, 512));
    }
    m.bottom_mlp_layers.push_back(m.embedding_dim);
    m.top_mlp_layers.clear();
    for (auto k = integer(0, 2); k > 0; --k) {
      m.top_mlp_layers.push_back(integer(1, 1024));
    }
    m.top_mlp_layers.push_back(1);
    m.batch_size = integer(1, 2048);
    return m;
  }

  MemorySystemSpec memory(MemoryRole role) {
    static const std::vector<std::string> kTimings = {
        "DDR4-3200", "GDDR6-14000", "HBM2-2300",
        "HBM2-2430", "HBM2E-2400",  "HBM2E-3000"};
    MemorySystemSpec mem;
    mem.timing = timing_preset(pick(kTimings));
    mem.kind = mem.timing.name.rfind("DDR4", 0) == 0    ? MemoryKind::kDDR4
               : mem.timing.name.rfind("GDDR6", 0) == 0 ? MemoryKind::kGDDR6
               : mem.timing.name.rfind("HBM2E", 0) == 0 ? MemoryKind::kHBM2E
                                                        : MemoryKind::kHBM2;
    mem.units = static_cast<int>(integer(1, 8));
    mem.capacity_bytes = log_uniform(1e9, 1e12);
    mem.role = role;
    if (integer(0, 3) == 0) mem.effective_bw_override = log_uniform(1e10, 5e12);
    return mem;
  }

  SystemSpec system() {
    SystemSpec s;
    s.num_chips = static_cast<int>(integer(1, 64));
    s.chip.compute_rate = log_uniform(1e12, 1e15);
    s.chip.memory = {memory(MemoryRole::kFast)};
    if (coin()) {
      s.chip.memory.push_back(memory(MemoryRole::kBulk));
      s.chip.bulk_lookup_fraction = coin() ? 0.0 : uniform(0.0, 1.0);
    }
    CcSpec& cc = s.chip.cc;
    cc.topology = pick<Topology>({Topology::kQuadraticPointToPoint,
                                  Topology::kSwitchedAllToAll, Topology::kRing});
    cc.per_chip_bandwidth = log_uniform(1e10, 1e13);
    cc.link_efficiency = uniform(0.1, 1.0);
    for (CcOpKind kind : kAllCcOpKinds) {
      cc.latency_by_op[kind] = log_uniform(1e-7, 1e-4);
    }
    cc.switch_traversal_latency = coin() ? 0.0 : log_uniform(1e-8, 1e-6);
    return s;
  }

  Scenario scenario() {
    Scenario s;
    s.model = model();
    s.system = system();
    s.sharding = coin() ? ShardingMode::unsharded(coin())
                        : ShardingMode::fully_sharded();
    s.mode = coin() ? Mode::kInference : Mode::kTraining;
    s.overlap_policy =
        coin() ? OverlapPolicy::kPipelined : OverlapPolicy::kSequential;
    return s;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace recperf::testing

#endif  // RECPERF_TESTS_GENERATORS_HPP_
