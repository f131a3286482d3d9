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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "recperf/cli.hpp"

namespace recperf {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

int CountLines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

// One diagnostic line carrying a machine-readable code.
void CheckDiagnostic(const Result& r, const std::string& code) {
  CAPTURE(r.err);
  CHECK(CountLines(r.err) == 1);
  CHECK(r.err.rfind("error: " + code + ": ", 0) == 0);
  CHECK(r.out.empty());
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("recperf_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

const std::vector<std::string> kRunSmall = {
    "run",    "--preset",   "recspeed16", "--model",    "dlrm-rm2-small",
    "--mode", "inference", "--sharding", "unsharded"};

TEST_CASE("run prints a StepEstimate") {
  const Result r = Run(kRunSmall);
  REQUIRE(r.code == kExitOk);
  CHECK(r.err.empty());
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("qps").get<double>() > 0);
  CHECK(j.at("breakdown").size() == 4);
  CHECK(j.at("breakdown")[0].at("phase") == "idx_exchange");
}

TEST_CASE("identical invocations give identical bytes") {
  CHECK(Run(kRunSmall).out == Run(kRunSmall).out);
  const std::vector<std::string> sweep = {
      "sweep", "-p", "ref8-homogeneous", "-m", "dlrm-rm2-small",
      "--lat-points", "4", "--bw-points", "3", "--threads", "4"};
  const Result a = Run(sweep);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == Run(sweep).out);
  CHECK(CountLines(a.out) == 13);
}

TEST_CASE("explain goes to stderr and leaves stdout parseable") {
  auto args = kRunSmall;
  args.push_back("--explain");
  const Result r = Run(args);
  REQUIRE(r.code == kExitOk);
  CHECK(r.err.find("idx_exchange_payload") != std::string::npos);
  CHECK(r.err.find("forward = max(") != std::string::npos);
  CHECK(nlohmann::json::parse(r.out).is_object());
}

TEST_CASE("flags override the config file") {
  TempDir dir;
  const std::string cfg = dir.file("s.yaml",
                                   "model: dlrm-rm2-small\n"
                                   "system: {preset: recspeed16, num_chips: 8}\n"
                                   "sharding: unsharded\nmode: inference\n");
  const Result file_only = Run({"run", "--config", cfg});
  REQUIRE(file_only.code == kExitOk);
  const Result flag = Run({"run", "--config", cfg, "--chips", "16"});
  REQUIRE(flag.code == kExitOk);
  const Result preset = Run({"run", "-p", "recspeed16", "-m", "dlrm-rm2-small"});
  CHECK(flag.out == preset.out);
  CHECK(file_only.out != preset.out);

  const Result training = Run({"run", "--config", cfg, "--mode", "training"});
  REQUIRE(training.code == kExitOk);
  CHECK(nlohmann::json::parse(training.out).at("mode") == "training");
}

TEST_CASE("sla report") {
  auto args = kRunSmall;
  args.insert(args.end(), {"--sla-budget", "0.1"});
  const Result r = Run(args);
  REQUIRE(r.code == kExitOk);
  CHECK(r.err.find("pass") != std::string::npos);
  args.back() = "0";
  CheckDiagnostic(Run(args), "INVALID_BUDGET");
}

TEST_CASE("sweep with a reversed latency range is a usage error") {
  const Result r = Run({"sweep", "-p", "ref8-homogeneous", "-m",
                        "dlrm-rm2-small", "--lat-min", "1e-5", "--lat-max",
                        "1e-6"});
  CHECK(r.code == kExitUsage);
  CheckDiagnostic(r, "AXIS_INVALID");
  const Result list = Run({"sweep", "-p", "ref8-homogeneous", "-m",
                           "dlrm-rm2-small", "--latencies", "2e-6,1e-6"});
  CHECK(list.code == kExitUsage);
  CheckDiagnostic(list, "AXIS_INVALID");
}

TEST_CASE("sweep writes into an output directory by naming convention") {
  TempDir dir;
  const Result r = Run({"sweep", "-p", "ref8-homogeneous", "-m",
                        "dlrm-rm2-small", "--sharding", "sharded", "--mode",
                        "training", "--latencies", "1e-6", "--bandwidths",
                        "1e11,1e12", "--output-dir", dir.path().string(),
                        "--label", "ref8-small", "-f", "json"});
  REQUIRE(r.code == kExitOk);
  const fs::path expect = dir.path() / "ref8-small_training_sharded.json";
  REQUIRE(fs::exists(expect));
  std::ifstream in(expect);
  const auto j = nlohmann::json::parse(in);
  CHECK(j.size() == 2);
}

TEST_CASE("compare prints eight rows") {
  const Result r = Run({"compare"});
  REQUIRE(r.code == kExitOk);
  CHECK(CountLines(r.out) == 9);
  const Result inf = Run({"compare", "--mode", "inference", "-f", "json"});
  REQUIRE(inf.code == kExitOk);
  CHECK(nlohmann::json::parse(inf.out).size() == 4);
}

TEST_CASE("calibrate echoes the generating model") {
  TempDir dir;
  std::ostringstream csv;
  csv.precision(17);
  csv << "payload_bytes,seconds\n";
  for (double s = 1e3; s <= 1e8; s *= 10) csv << s << ',' << 5e-6 + s / 200e9 << '\n';
  const Result r = Run({"calibrate", "--samples", dir.file("fit.csv", csv.str())});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("latency_s").get<double>() == doctest::Approx(5e-6).epsilon(1e-9));
  CHECK(j.at("bandwidth_Bps").get<double>() ==
        doctest::Approx(200e9).epsilon(1e-9));

  const Result degenerate =
      Run({"calibrate", "--samples", dir.file("d.csv", "10,1\n10,2\n")});
  CHECK(degenerate.code == kExitValidation);
  CheckDiagnostic(degenerate, "DEGENERATE_SAMPLES");
}

TEST_CASE("presets listing") {
  const Result r = Run({"presets"});
  REQUIRE(r.code == kExitOk);
  for (const char* name : {"dlrm-rm2-small", "dlrm-rm2-large",
                           "ref8-homogeneous", "recspeed16", "dgx2"}) {
    CHECK(r.out.find(name) != std::string::npos);
  }
  CHECK(Run({"presets", "--timings"}).out.rfind("name,", 0) == 0);
  CHECK(Run({"presets", "--curves"}).out.rfind("preset,units,", 0) == 0);
}

TEST_CASE("every failure is one coded diagnostic with the right exit code") {
  TempDir dir;
  const std::string bad_yaml = dir.file("bad.yaml", "model: [unterminated\n");
  const std::string zero_tables =
      dir.file("zero.yaml",
               "model: {preset: dlrm-rm2-small, num_tables: 0}\n"
               "system: recspeed16\nsharding: unsharded\nmode: inference\n");
  struct Case {
    std::vector<std::string> args;
    int code;
    std::string diagnostic;
  };
  const std::vector<Case> cases = {
      {{}, kExitUsage, "USAGE"},
      {{"frobnicate"}, kExitUsage, "USAGE"},
      {{"run", "--bogus"}, kExitUsage, "USAGE"},
      {{"run", "-p", "dgx2"}, kExitUsage, "USAGE"},
      {{"run", "-p", "dgx2", "-m", "dlrm-rm2-small", "--mode", "serving"},
       kExitUsage, "USAGE"},
      {{"sweep", "-p", "dgx2", "-m", "dlrm-rm2-small", "--latencies", "1e-6",
        "--lat-min", "1e-7"},
       kExitUsage, "USAGE"},
      {{"calibrate"}, kExitUsage, "USAGE"},
      {{"presets", "--timings", "--curves"}, kExitUsage, "USAGE"},
      {{"run", "-p", "dgx2", "-m", "dlrm-rm2-small", "--link-efficiency",
        "1.3"},
       kExitValidation, "EFFICIENCY_RANGE"},
      {{"run", "-p", "dgx3", "-m", "dlrm-rm2-small"}, kExitValidation,
       "UNKNOWN_PRESET"},
      {{"run", "--config", bad_yaml}, kExitValidation, "SYNTAX_ERROR"},
      {{"run", "--config", zero_tables}, kExitValidation, "NONPOSITIVE_COUNT"},
      {{"run", "-p", "dgx2", "-m", "dlrm-rm2-small", "--mem-bw", "0"},
       kExitValidation, "OVERRIDE_RANGE"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.diagnostic);
    const Result r = Run(c.args);
    CHECK(r.code == c.code);
    CheckDiagnostic(r, c.diagnostic);
  }
}

TEST_CASE("help and version") {
  const Result help = Run({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("sweep") != std::string::npos);
  const Result version = Run({"--version"});
  CHECK(version.code == kExitOk);
  CHECK(version.out.empty());
  CHECK(version.err.rfind("recperf ", 0) == 0);
}

}  // namespace
}  // namespace recperf
