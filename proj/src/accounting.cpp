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

#include "recperf/accounting.hpp"

#include <algorithm>

#include "recperf/error.hpp"

namespace recperf {

namespace {

struct MlpCount {
  std::int64_t macs = 0;
  std::int64_t biases = 0;
};

MlpCount CountMlp(std::int64_t input, const std::vector<std::int64_t>& layers) {
  MlpCount c;
  for (std::int64_t width : layers) {
    c.macs += input * width;
    c.biases += width;
    input = width;
  }
  return c;
}

std::int64_t TopMlpInput(const ModelConfig& m) {
  return interactions_output_size(m) + m.embedding_dim;
}

}  // namespace

std::int64_t interactions_output_size(const ModelConfig& m) {
  const std::int64_t s = m.num_tables;
  return (s * s + s) / 2;
}

DenseParamCount dense_param_count(const ModelConfig& m) {
  const MlpCount bottom = CountMlp(m.num_dense_features, m.bottom_mlp_layers);
  const MlpCount top = CountMlp(TopMlpInput(m), m.top_mlp_layers);
  DenseParamCount p;
  p.weights = bottom.macs + top.macs;
  p.biases = bottom.biases + top.biases;
  p.bytes_total = static_cast<double>(p.weights + p.biases) * m.element_bytes;
  return p;
}

FlopsBreakdown flops_breakdown(const ModelConfig& m) {
  const double s = static_cast<double>(m.num_tables);
  const double d = static_cast<double>(m.embedding_dim);
  FlopsBreakdown f;
  f.mlp = 2.0 * static_cast<double>(dense_param_count(m).weights);
  f.interaction = 2.0 * (s + 1) * (s + 1) * d;
  f.pooling = s * static_cast<double>(std::max<std::int64_t>(
                      m.lookups_per_table - 1, 0)) * d;
  return f;
}

double flops_per_sample(const ModelConfig& m) {
  return flops_breakdown(m).total();
}

PlacementPlan placement(const ModelConfig& m, int num_chips) {
  if (num_chips < 1) {
    throw Error("INVALID_ARGUMENT", "placement needs at least one chip");
  }
  PlacementPlan plan;
  plan.tables_per_chip.assign(static_cast<size_t>(num_chips), 0);
  // Equal-sized tables: repeatedly give the next table to the least loaded
  // chip (lowest index on ties), which ends at floor/ceil of s/n.
  for (std::int64_t t = 0; t < m.num_tables; ++t) {
    auto it = std::min_element(plan.tables_per_chip.begin(),
                               plan.tables_per_chip.end());
    ++*it;
  }
  const double mean = static_cast<double>(m.num_tables) / num_chips;
  const auto max_tables = *std::max_element(plan.tables_per_chip.begin(),
                                            plan.tables_per_chip.end());
  plan.imbalance_factor = mean > 0 ? max_tables / mean : 1.0;
  plan.idle_chips = num_chips > m.num_tables;
  return plan;
}

PhaseVolumes message_volumes(const Scenario& sc) {
  const ModelConfig& m = sc.model;
  const double n = sc.system.num_chips;
  const double s = static_cast<double>(m.num_tables);
  const double l = static_cast<double>(m.lookups_per_table);
  const double d = static_cast<double>(m.embedding_dim);
  const double b = static_cast<double>(m.batch_size);
  const double e = m.embedding_row_bytes();
  const double b_local = b / n;

  const FlopsBreakdown per_sample = flops_breakdown(m);
  const DenseParamCount params = dense_param_count(m);

  PhaseVolumes v;
  v.idx_exchange_payload = b_local * s * l * m.index_bytes;

  double unpooled_rows = 0;
  if (sc.sharding.kind == Sharding::kUnsharded) {
    // Tables owned by the busiest chip; exactly s/n when balanced.
    double owned = s / n;
    if (!sc.sharding.assume_balanced) {
      owned *= placement(m, sc.system.num_chips).imbalance_factor;
    }
    unpooled_rows = b * owned * l;
    v.lookup_bytes = unpooled_rows * e;
    v.pool_flops = b * owned * (l - 1) * d;
    v.embed_exchange_payload = b * (s / n) * e;
    v.embed_exchange_kind = CcOpKind::kAllToAll;
    v.grad_exchange_payload = v.embed_exchange_payload;
    v.grad_exchange_kind = CcOpKind::kAllToAll;
  } else {
    // Every table is split across all chips; rows travel unpooled and the
    // requesting chip pools after the exchange.
    unpooled_rows = b * s * l / n;
    v.lookup_bytes = unpooled_rows * e;
    v.pool_flops = b_local * s * (l - 1) * d;
    v.embed_exchange_payload = v.lookup_bytes;
    v.embed_exchange_kind = CcOpKind::kReduceScatter;
    v.grad_exchange_payload = b_local * s * e;
    v.grad_exchange_kind = CcOpKind::kAllGather;
  }
  // Looked-up rows stay buffered on chip, so the update is a pure write.
  v.embed_write_bytes = v.lookup_bytes;
  v.expand_flops = unpooled_rows * d;

  v.fwd_dense_flops = b_local * (per_sample.mlp + per_sample.interaction);
  v.bwd_dense_flops =
      2.0 * v.fwd_dense_flops + v.expand_flops + b_local * kLossFlopsPerSample;
  v.dense_grad_payload = params.bytes_total;

  v.onchip_buffer_bytes = params.bytes_total + v.lookup_bytes +
                          v.idx_exchange_payload + v.embed_exchange_payload;
  return v;
}

bool onchip_buffer_sufficient(const Scenario& s, const PhaseVolumes& v) {
  const auto& declared = s.system.chip.onchip_buffer_bytes;
  return !declared || *declared >= v.onchip_buffer_bytes;
}

}  // namespace recperf
