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

// Python bindings. Structured results cross the boundary as JSON text and
// are decoded by the pure-Python layer in recperf/__init__.py.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "recperf/accounting.hpp"
#include "recperf/collectives.hpp"
#include "recperf/config_io.hpp"
#include "recperf/dram.hpp"
#include "recperf/error.hpp"
#include "recperf/memory_model.hpp"
#include "recperf/scenario.hpp"
#include "recperf/step_engine.hpp"
#include "recperf/sweep.hpp"

namespace py = pybind11;

namespace recperf {
namespace {

std::vector<CcOpKind> AllOps() {
  return {kAllCcOpKinds.begin(), kAllCcOpKinds.end()};
}

ShardingMode ParseSharding(const std::string& s, bool balanced) {
  return sharding_from_string(s) == Sharding::kUnsharded
             ? ShardingMode::unsharded(balanced)
             : ShardingMode::fully_sharded();
}

py::dict VolumesDict(const PhaseVolumes& v) {
  py::dict d;
  d["idx_exchange_payload"] = v.idx_exchange_payload;
  d["lookup_bytes"] = v.lookup_bytes;
  d["pool_flops"] = v.pool_flops;
  d["embed_exchange_payload"] = v.embed_exchange_payload;
  d["embed_exchange_kind"] = std::string(to_string(v.embed_exchange_kind));
  d["fwd_dense_flops"] = v.fwd_dense_flops;
  d["grad_exchange_payload"] = v.grad_exchange_payload;
  d["grad_exchange_kind"] = std::string(to_string(v.grad_exchange_kind));
  d["expand_flops"] = v.expand_flops;
  d["embed_write_bytes"] = v.embed_write_bytes;
  d["dense_grad_payload"] = v.dense_grad_payload;
  d["bwd_dense_flops"] = v.bwd_dense_flops;
  d["onchip_buffer_bytes"] = v.onchip_buffer_bytes;
  return d;
}

}  // namespace
}  // namespace recperf

PYBIND11_MODULE(_core, m) {
  using namespace recperf;
  m.doc() = "Analytical performance model for distributed recommender systems";

  // Kept alive for the interpreter's lifetime.
  static PyObject* error_type = PyErr_NewException(
      "recperf.RecperfError", PyExc_ValueError, nullptr);
  m.attr("RecperfError") = py::handle(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(
          e.code() + ": " + e.what());
      inst.attr("code") = e.code();
      PyErr_SetObject(error_type, inst.ptr());
    }
  });

  py::class_<Scenario>(m, "Scenario")
      .def_static("from_yaml", &load_scenario, py::arg("text"))
      .def_static("from_file", &load_scenario_file, py::arg("path"))
      .def_static(
          "preset",
          [](const std::string& model, const std::string& system,
             const std::string& sharding, const std::string& mode,
             const std::string& policy) {
            return make_scenario(model, system, ParseSharding(sharding, true),
                                 mode_from_string(mode),
                                 overlap_policy_from_string(policy));
          },
          py::arg("model"), py::arg("system"),
          py::arg("sharding") = "unsharded", py::arg("mode") = "inference",
          py::arg("policy") = "pipelined")
      .def("to_yaml", [](const Scenario& s) { return serialize(s); })
      .def("copy", [](const Scenario& s) { return s; })
      .def_property(
          "mode", [](const Scenario& s) { return std::string(to_string(s.mode)); },
          [](Scenario& s, const std::string& v) { s.mode = mode_from_string(v); })
      .def_property(
          "sharding",
          [](const Scenario& s) { return std::string(to_string(s.sharding.kind)); },
          [](Scenario& s, const std::string& v) {
            s.sharding = ParseSharding(v, s.sharding.assume_balanced);
          })
      .def_property(
          "overlap_policy",
          [](const Scenario& s) {
            return std::string(to_string(s.overlap_policy));
          },
          [](Scenario& s, const std::string& v) {
            s.overlap_policy = overlap_policy_from_string(v);
          })
      .def_property(
          "num_chips", [](const Scenario& s) { return s.system.num_chips; },
          [](Scenario& s, int n) { s.system.num_chips = n; })
      .def(
          "with_cc",
          [](const Scenario& s, double latency, double bandwidth) {
            return with_cc(s, latency, bandwidth, AllOps());
          },
          py::arg("latency"), py::arg("bandwidth"))
      .def(
          "set_memory_bandwidth",
          [](Scenario& s, double bw) {
            for (auto& mem : s.system.chip.memory) {
              if (mem.role == MemoryRole::kFast) mem.effective_bw_override = bw;
            }
          },
          py::arg("bytes_per_s"),
          "Pins the effective bandwidth of the fast memory system.")
      .def("validate",
           [](const Scenario& s) {
             std::vector<std::pair<std::string, std::string>> out;
             for (const auto& i : validate(s)) out.emplace_back(i.code, i.message);
             return out;
           })
      .def("__eq__", [](const Scenario& a, const Scenario& b) { return a == b; })
      .def("__repr__", [](const Scenario& s) {
        return "<Scenario " + std::to_string(s.system.num_chips) + " chips, " +
               std::string(to_string(s.sharding.kind)) + ", " +
               std::string(to_string(s.mode)) + ">";
      });

  m.def("_estimate_json",
        [](const Scenario& s) { return step_estimate_json(estimate(s), -1); });
  m.def("message_volumes",
        [](const Scenario& s) { return VolumesDict(message_volumes(s)); });
  m.def("flops_per_sample", [](const Scenario& s) {
    return flops_per_sample(s.model);
  });
  m.def("capacity", [](const Scenario& s) {
    const CapacitySummary c = capacity_summary(s.system);
    py::dict d;
    d["total_bytes"] = c.total_bytes;
    d["fast_bytes"] = c.fast_bytes;
    d["bulk_bytes"] = c.bulk_bytes;
    d["fast_fraction"] = c.fast_fraction;
    return d;
  });
  m.def(
      "cc_time",
      [](const Scenario& s, const std::string& kind, double payload) {
        return cc_time(cc_op_kind_from_string(kind), payload,
                       s.system.num_chips, s.system.chip.cc);
      },
      py::arg("scenario"), py::arg("kind"), py::arg("payload_bytes"));
  m.def(
      "effective_bandwidth",
      [](const std::string& timing, int units, double access_bytes) {
        return effective_random_access_bandwidth(
            timing_preset(timing), units, access_bytes, AccessDirection::kRead);
      },
      py::arg("timing"), py::arg("units"), py::arg("access_bytes"));
  m.def("timing_presets", &timing_preset_names);
  m.def(
      "fit_latency_bandwidth",
      [](const std::vector<double>& payloads, const std::vector<double>& times) {
        if (payloads.size() != times.size()) {
          throw Error("INVALID_ARGUMENT", "payloads and times differ in length");
        }
        std::vector<CalibrationSample> samples;
        for (size_t i = 0; i < payloads.size(); ++i) {
          samples.push_back({payloads[i], times[i]});
        }
        const CalibrationFit fit = fit_latency_bandwidth(samples);
        py::dict d;
        d["latency_s"] = fit.latency;
        d["bandwidth_Bps"] = fit.bandwidth;
        d["residual_rms_s"] = fit.residual;
        d["latency_clamped"] = fit.latency_clamped;
        return d;
      },
      py::arg("payloads"), py::arg("times"));
  m.def(
      "_sweep_json",
      [](const Scenario& base, const std::vector<double>& latencies,
         const std::vector<double>& bandwidths, int threads) {
        SweepGrid g;
        g.base = base;
        g.latency_axis = latencies;
        g.bandwidth_axis = bandwidths;
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_sweep(g, threads);
        }
        std::ostringstream out;
        emit(rows, OutputFormat::kJson, out);
        return out.str();
      },
      py::arg("base"), py::arg("latencies"), py::arg("bandwidths"),
      py::arg("threads") = 1);
  m.def(
      "_compare_json",
      [](const Scenario& baseline, const Scenario& candidate,
         const std::string& mode) {
        std::ostringstream out;
        emit(compare(baseline, candidate,
                     default_compare_configs(mode_from_string(mode))),
             OutputFormat::kJson, out);
        return out.str();
      },
      py::arg("baseline"), py::arg("candidate"), py::arg("mode"));
  m.def("presets", [] {
    std::vector<py::dict> out;
    for (const auto& p : preset_catalog()) {
      py::dict d;
      d["name"] = p.name;
      d["kind"] = p.kind;
      d["summary"] = p.summary;
      out.push_back(d);
    }
    return out;
  });
}
