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

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "recperf/accounting.hpp"
#include "recperf/error.hpp"

namespace recperf {
namespace {

Scenario Small8(ShardingMode sharding) {
  Scenario s = make_scenario("dlrm-rm2-small", "ref8-homogeneous", sharding,
                             Mode::kInference);
  REQUIRE(s.system.num_chips == 8);
  return s;
}

Scenario Large8(ShardingMode sharding) {
  return make_scenario("dlrm-rm2-large", "ref8-homogeneous", sharding,
                       Mode::kInference);
}

TEST_CASE("dense parameters match the per-layer summation") {
  for (const char* name : {"dlrm-rm2-small", "dlrm-rm2-large"}) {
    const ModelConfig m = model_preset(name);
    const auto want = oracle::per_layer_params(m);
    const auto got = dense_param_count(m);
    CHECK(got.weights == want.weights);
    CHECK(got.biases == want.biases);
    CHECK(got.bytes_total == (want.weights + want.biases) * m.element_bytes);
  }
  // Hand-written sums for the two presets.
  CHECK(dense_param_count(model_preset("dlrm-rm2-small")).weights ==
        256 * 256 + 256 * 128 + 128 * 32 + 32 * 32 + 852 * 512 + 512 * 128 +
            128 * 1);
  CHECK(dense_param_count(model_preset("dlrm-rm2-small")).weights == 605312);
  CHECK(dense_param_count(model_preset("dlrm-rm2-large")).weights == 657536);
}

TEST_CASE("dense parameters of a minimal model") {
  ModelConfig m;
  m.num_dense_features = 1;
  m.num_tables = 0;
  m.embedding_dim = 1;
  m.bottom_mlp_layers = {1};
  m.top_mlp_layers = {1};
  const auto p = dense_param_count(m);
  CHECK(p.weights == 2);
  CHECK(p.biases == 2);
}

TEST_CASE("dense parameters agree with the oracle on random models") {
  testing::Gen gen(11);
  for (int i = 0; i < 500; ++i) {
    const ModelConfig m = gen.model();
    const auto want = oracle::per_layer_params(m);
    const auto got = dense_param_count(m);
    REQUIRE(got.weights == want.weights);
    REQUIRE(got.biases == want.biases);
  }
}

TEST_CASE("interaction size matches pair enumeration") {
  ModelConfig m;
  for (std::int64_t s = 0; s <= 64; ++s) {
    m.num_tables = s;
    REQUIRE(interactions_output_size(m) == oracle::enumerate_pairs(s));
  }
  m.num_tables = 40;
  CHECK(interactions_output_size(m) == 820);
  m.num_tables = 1;
  CHECK(interactions_output_size(m) == 1);
  m.num_tables = 0;
  CHECK(interactions_output_size(m) == 0);
}

TEST_CASE("forward FLOPs per sample") {
  const double small = flops_per_sample(model_preset("dlrm-rm2-small"));
  const double large = flops_per_sample(model_preset("dlrm-rm2-large"));
  CHECK(small == doctest::Approx(1.40e6).epsilon(0.05));
  CHECK(large == doctest::Approx(2.0e6).epsilon(0.10));
  // Term by term: 2 x MACs + 2 (s+1)^2 d + s (l-1) d.
  CHECK(small == 2.0 * 605312 + 2.0 * 41 * 41 * 32 + 40.0 * 79 * 32);
  CHECK(large == 2.0 * 657536 + 2.0 * 41 * 41 * 128 + 40.0 * 79 * 128);
}

TEST_CASE("FLOPs of the degenerate graph are counted by hand") {
  // One dense feature through a single 1->1 layer (1 MAC = 2 FLOPs), no
  // tables, d = 1: the interaction of the lone vector with itself is
  // 2 (s+1)^2 d = 2 FLOPs; no top layers, no pooling.
  ModelConfig m;
  m.num_dense_features = 1;
  m.num_tables = 0;
  m.lookups_per_table = 1;
  m.embedding_dim = 1;
  m.bottom_mlp_layers = {1};
  const auto f = flops_breakdown(m);
  CHECK(f.mlp == 2);
  CHECK(f.interaction == 2);
  CHECK(f.pooling == 0);
  CHECK(flops_per_sample(m) == 4);
}

TEST_CASE("message volumes, small model on 8 chips") {
  const auto u = message_volumes(Small8(ShardingMode::unsharded()));
  CHECK(u.idx_exchange_payload == 320000);
  CHECK(u.embed_exchange_payload == 64000);
  CHECK(u.embed_exchange_kind == CcOpKind::kAllToAll);
  CHECK(u.grad_exchange_payload == u.embed_exchange_payload);
  CHECK(u.grad_exchange_kind == CcOpKind::kAllToAll);

  const auto f = message_volumes(Small8(ShardingMode::fully_sharded()));
  CHECK(f.embed_exchange_payload == 5120000);
  CHECK(f.embed_exchange_kind == CcOpKind::kReduceScatter);
  CHECK(f.grad_exchange_kind == CcOpKind::kAllGather);
  CHECK(f.grad_exchange_payload == 25.0 * 40 * 64);
}

TEST_CASE("message volumes, large model on 8 chips") {
  const auto f = message_volumes(Large8(ShardingMode::fully_sharded()));
  CHECK(f.embed_exchange_payload == 61440000);

  const auto small = message_volumes(Small8(ShardingMode::unsharded()));
  const auto large = message_volumes(Large8(ShardingMode::unsharded()));
  CHECK(large.idx_exchange_payload / small.idx_exchange_payload == 3.0);
  CHECK(large.embed_exchange_payload / small.embed_exchange_payload == 12.0);
}

TEST_CASE("write bytes equal lookup bytes and dense payload is params") {
  testing::Gen gen(12);
  for (int i = 0; i < 300; ++i) {
    const Scenario s = gen.scenario();
    const auto v = message_volumes(s);
    REQUIRE(v.embed_write_bytes == v.lookup_bytes);
    REQUIRE(v.dense_grad_payload == dense_param_count(s.model).bytes_total);
    for (double x : {v.idx_exchange_payload, v.lookup_bytes, v.pool_flops,
                     v.embed_exchange_payload, v.fwd_dense_flops,
                     v.grad_exchange_payload, v.expand_flops,
                     v.bwd_dense_flops, v.onchip_buffer_bytes}) {
      REQUIRE(x >= 0);
    }
  }
}

TEST_CASE("backward dense FLOPs are twice forward plus expansion and loss") {
  const Scenario s = Small8(ShardingMode::unsharded());
  const auto v = message_volumes(s);
  const double b_local = 200.0 / 8;
  CHECK(v.bwd_dense_flops == doctest::Approx(2 * v.fwd_dense_flops +
                                             v.expand_flops +
                                             b_local * kLossFlopsPerSample));
  // Expansion touches every unpooled row once: b (s/n) l rows of d.
  CHECK(v.expand_flops == 200.0 * 5 * 80 * 32);
}

TEST_CASE("volumes scale linearly in batch size") {
  testing::Gen gen(13);
  for (int i = 0; i < 300; ++i) {
    Scenario s = gen.scenario();
    s.model.batch_size = gen.integer(1, 500);
    const auto a = message_volumes(s);
    const std::int64_t k = gen.integer(2, 4);
    s.model.batch_size *= k;
    const auto b = message_volumes(s);
    REQUIRE(b.idx_exchange_payload == doctest::Approx(k * a.idx_exchange_payload));
    REQUIRE(b.lookup_bytes == doctest::Approx(k * a.lookup_bytes));
    REQUIRE(b.embed_exchange_payload ==
            doctest::Approx(k * a.embed_exchange_payload));
    REQUIRE(b.grad_exchange_payload ==
            doctest::Approx(k * a.grad_exchange_payload));
    REQUIRE(b.fwd_dense_flops == doctest::Approx(k * a.fwd_dense_flops));
    REQUIRE(b.bwd_dense_flops == doctest::Approx(k * a.bwd_dense_flops));
    REQUIRE(b.dense_grad_payload == a.dense_grad_payload);
  }
}

TEST_CASE("volumes scale in lookups per table and row bytes") {
  testing::Gen gen(14);
  for (int i = 0; i < 300; ++i) {
    Scenario s = gen.scenario();
    const auto a = message_volumes(s);
    s.model.lookups_per_table *= 2;
    const auto b = message_volumes(s);
    REQUIRE(b.idx_exchange_payload == doctest::Approx(2 * a.idx_exchange_payload));
    REQUIRE(b.lookup_bytes == doctest::Approx(2 * a.lookup_bytes));
    s.model.lookups_per_table /= 2;
    s.model.element_bytes = s.model.element_bytes == 2 ? 4 : 2;
    const double ratio = s.model.element_bytes == 4 ? 2.0 : 0.5;
    const auto c = message_volumes(s);
    REQUIRE(c.lookup_bytes == doctest::Approx(ratio * a.lookup_bytes));
    if (s.sharding.kind == Sharding::kUnsharded) {
      REQUIRE(c.embed_exchange_payload ==
              doctest::Approx(ratio * a.embed_exchange_payload));
    }
  }
}

TEST_CASE("total lookup bytes do not depend on sharding when balanced") {
  testing::Gen gen(15);
  for (int i = 0; i < 300; ++i) {
    Scenario s = gen.scenario();
    s.sharding = ShardingMode::unsharded(true);
    const double unsharded = message_volumes(s).lookup_bytes;
    s.sharding = ShardingMode::fully_sharded();
    const double sharded = message_volumes(s).lookup_bytes;
    REQUIRE(sharded * s.system.num_chips ==
            doctest::Approx(unsharded * s.system.num_chips));
  }
}

TEST_CASE("imbalanced placement charges the busiest chip") {
  Scenario s = make_scenario("dlrm-rm2-small", "recspeed16",
                             ShardingMode::unsharded(false), Mode::kInference);
  const auto skewed = message_volumes(s);
  s.sharding.assume_balanced = true;
  const auto balanced = message_volumes(s);
  CHECK(skewed.lookup_bytes == doctest::Approx(1.2 * balanced.lookup_bytes));
  CHECK(skewed.embed_exchange_payload == balanced.embed_exchange_payload);
}

TEST_CASE("placement examples") {
  ModelConfig m = model_preset("dlrm-rm2-small");
  auto p = placement(m, 8);
  CHECK(p.tables_per_chip == std::vector<std::int64_t>(8, 5));
  CHECK(p.imbalance_factor == 1.0);
  CHECK_FALSE(p.idle_chips);

  p = placement(m, 16);
  CHECK(std::count(p.tables_per_chip.begin(), p.tables_per_chip.end(), 3) == 8);
  CHECK(std::count(p.tables_per_chip.begin(), p.tables_per_chip.end(), 2) == 8);
  CHECK(p.imbalance_factor == doctest::Approx(1.2));

  m.num_tables = 2;
  p = placement(m, 4);
  CHECK(std::count(p.tables_per_chip.begin(), p.tables_per_chip.end(), 1) == 2);
  CHECK(std::count(p.tables_per_chip.begin(), p.tables_per_chip.end(), 0) == 2);
  CHECK(p.idle_chips);

  CHECK_THROWS_AS(placement(m, 0), Error);
}

TEST_CASE("placement is optimally balanced (exhaustive check)") {
  ModelConfig m;
  for (int s = 1; s <= 8; ++s) {
    for (int n = 1; n <= 4; ++n) {
      m.num_tables = s;
      const auto p = placement(m, n);
      std::int64_t sum = 0;
      for (auto c : p.tables_per_chip) sum += c;
      REQUIRE(sum == s);
      const auto max = *std::max_element(p.tables_per_chip.begin(),
                                         p.tables_per_chip.end());
      REQUIRE(max == oracle::best_max_load_exhaustive(s, n));
      REQUIRE(p.imbalance_factor ==
              doctest::Approx(max / (static_cast<double>(s) / n)));
    }
  }
}

TEST_CASE("on-chip buffer check") {
  Scenario s = Small8(ShardingMode::unsharded());
  const auto v = message_volumes(s);
  CHECK(onchip_buffer_sufficient(s, v));
  s.system.chip.onchip_buffer_bytes = v.onchip_buffer_bytes;
  CHECK(onchip_buffer_sufficient(s, v));
  s.system.chip.onchip_buffer_bytes = v.onchip_buffer_bytes - 1;
  CHECK_FALSE(onchip_buffer_sufficient(s, v));
}

}  // namespace
}  // namespace recperf
