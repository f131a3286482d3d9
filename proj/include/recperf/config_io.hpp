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

#ifndef RECPERF_CONFIG_IO_HPP_
#define RECPERF_CONFIG_IO_HPP_

#include <string>
#include <string_view>

#include "recperf/scenario.hpp"

namespace recperf {

// Scenario documents are YAML; see docs/config_format.md. The `model`,
// `system` and every `timing` mapping accept a `preset:` key whose entry is
// expanded first, then overridden by the sibling keys.
//
// Errors:
//   SYNTAX_ERROR (ParseError, 1-based line/column), UNKNOWN_PRESET,
//   MISSING_FIELD, UNKNOWN_FIELD, BAD_VALUE, UNKNOWN_ENUM.

// Resolves presets and overrides without checking invariants.
Scenario parse_scenario(std::string_view text);

// parse_scenario followed by require_valid(); throws ValidationError.
Scenario load_scenario(std::string_view text);

Scenario load_scenario_file(const std::string& path);

// Fully expanded document (no presets). load_scenario(serialize(s)) == s.
std::string serialize(const Scenario& s);

}  // namespace recperf

#endif  // RECPERF_CONFIG_IO_HPP_
