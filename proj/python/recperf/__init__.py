# Copyright 2026 The recperf Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================
"""Analytical throughput bounds for distributed recommender models."""

import json

from recperf._core import (
    RecperfError,
    Scenario,
    capacity,
    cc_time,
    effective_bandwidth,
    fit_latency_bandwidth,
    flops_per_sample,
    message_volumes,
    presets,
    timing_presets,
)
from recperf import _core

__version__ = "0.1.0"

__all__ = [
    "RecperfError",
    "Scenario",
    "capacity",
    "cc_time",
    "compare",
    "effective_bandwidth",
    "estimate",
    "fit_latency_bandwidth",
    "flops_per_sample",
    "message_volumes",
    "presets",
    "sweep",
    "timing_presets",
]


def estimate(scenario):
    """Step estimate for one scenario as a dict (qps, breakdown, ...)."""
    return json.loads(_core._estimate_json(scenario))


def sweep(base, latencies, bandwidths, threads=1):
    """Latency-major list of sweep rows over the given CC axes."""
    return json.loads(
        _core._sweep_json(base, list(latencies), list(bandwidths), threads))


def compare(baseline, candidate, mode="inference"):
    """Small/large x unsharded/sharded comparison rows for one mode."""
    return json.loads(_core._compare_json(baseline, candidate, mode))
