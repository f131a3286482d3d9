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

#ifndef RECPERF_ACCOUNTING_HPP_
#define RECPERF_ACCOUNTING_HPP_

#include <cstdint>
#include <vector>

#include "recperf/collectives.hpp"
#include "recperf/scenario.hpp"

namespace recperf {

struct DenseParamCount {
  std::int64_t weights = 0;
  std::int64_t biases = 0;
  double bytes_total = 0;  // (weights + biases) x element_bytes
};

// Bottom MLP input is num_dense_features; top MLP input is the interaction
// output concatenated with the bottom-MLP output.
DenseParamCount dense_param_count(const ModelConfig& m);

// Unordered pairs among num_tables + 1 vectors, diagonal excluded:
// (s^2 + s) / 2.
std::int64_t interactions_output_size(const ModelConfig& m);

struct FlopsBreakdown {
  double mlp = 0;          // 2 x multiply-accumulates of both MLPs
  double interaction = 0;  // 2 x (s+1)^2 x d for the batched A A^T
  double pooling = 0;      // s x (l-1) x d sum-pooling adds
  double total() const { return mlp + interaction + pooling; }
};

FlopsBreakdown flops_breakdown(const ModelConfig& m);
// Forward FLOPs per sample.
double flops_per_sample(const ModelConfig& m);

struct PlacementPlan {
  std::vector<std::int64_t> tables_per_chip;
  double imbalance_factor = 1.0;  // max / mean tables per chip
  bool idle_chips = false;        // n > s: some chips own no table
};

// Whole-table greedy placement for the Unsharded mode (uniform tables).
PlacementPlan placement(const ModelConfig& m, int num_chips);

// Per-chip payloads (bytes) and FLOP counts for every costed step of one
// query. Payloads are the per-processor CC inputs, before the (n-1)/n
// wire-volume factor.
struct PhaseVolumes {
  double idx_exchange_payload = 0;
  double lookup_bytes = 0;
  double pool_flops = 0;
  double embed_exchange_payload = 0;
  CcOpKind embed_exchange_kind = CcOpKind::kAllToAll;
  double fwd_dense_flops = 0;
  double grad_exchange_payload = 0;
  CcOpKind grad_exchange_kind = CcOpKind::kAllToAll;
  double expand_flops = 0;
  double embed_write_bytes = 0;
  double dense_grad_payload = 0;
  double bwd_dense_flops = 0;
  // On-chip working set the overlap model relies on: replicated dense
  // weights, looked-up rows kept for the write-only update, and the CC
  // staging buffers.
  double onchip_buffer_bytes = 0;
};

// FLOPs charged per sample for the BCE loss and its gradient.
inline constexpr double kLossFlopsPerSample = 8.0;

PhaseVolumes message_volumes(const Scenario& s);

// True when the chip declares no buffer size (assumed sufficient) or the
// declared size covers PhaseVolumes::onchip_buffer_bytes.
bool onchip_buffer_sufficient(const Scenario& s, const PhaseVolumes& v);

}  // namespace recperf

#endif  // RECPERF_ACCOUNTING_HPP_
