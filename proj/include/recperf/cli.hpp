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

#ifndef RECPERF_CLI_HPP_
#define RECPERF_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace recperf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `recperf` tool. Data goes to `out`, diagnostics to
// `err`; every failure writes exactly one "error: CODE: message" line.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace recperf

#endif  // RECPERF_CLI_HPP_
