/**
 * Copyright 2026 The hflsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
// Python bindings. Configs and summaries cross the boundary as JSON text.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "hflsim/config.hpp"
#include "hflsim/metrics_io.hpp"
#include "hflsim/net_model.hpp"
#include "hflsim/orchestrator.hpp"
#include "hflsim/scenarios.hpp"

namespace py = pybind11;

namespace {

struct RunOutput {
  std::string summary_json;
  std::string rounds_csv;
  std::string positions_csv;
};

RunOutput run_text(const std::string &config_json, const std::string &out_dir) {
  hflsim::RunConfig cfg = hflsim::parse_config_text(config_json);
  hflsim::RunSummary s;
  {
    py::gil_scoped_release release;
    s = hflsim::run(cfg);
  }
  if (!out_dir.empty()) hflsim::export_metrics(s, cfg, out_dir);
  return {hflsim::summary_json(s, cfg), hflsim::rounds_csv(s), hflsim::positions_csv(s)};
}

std::vector<std::pair<std::string, RunOutput>> run_scenario_text(const std::string &name,
                                                                 const std::string &config_json,
                                                                 const std::string &out_dir,
                                                                 int dropouts) {
  hflsim::RunConfig cfg = hflsim::parse_config_text(config_json);
  std::vector<hflsim::ArmResult> arms;
  {
    py::gil_scoped_release release;
    arms = hflsim::run_scenario(name, cfg, out_dir, dropouts);
  }
  std::vector<std::pair<std::string, RunOutput>> out;
  for (const auto &a : arms) {
    out.emplace_back(a.label, RunOutput{hflsim::summary_json(a.summary, a.cfg),
                                        hflsim::rounds_csv(a.summary),
                                        hflsim::positions_csv(a.summary)});
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_hflsim, m) {
  m.doc() = "Hierarchical federated learning simulator core";

  auto config_error = py::register_exception<hflsim::ConfigError>(m, "ConfigError",
                                                                  PyExc_ValueError);
  (void)config_error;

  py::class_<RunOutput>(m, "RunOutput")
      .def_readonly("summary_json", &RunOutput::summary_json)
      .def_readonly("rounds_csv", &RunOutput::rounds_csv)
      .def_readonly("positions_csv", &RunOutput::positions_csv);

  m.def("canonical_config",
        [](const std::string &text) {
          return hflsim::canonical_dump(hflsim::parse_config_text(text));
        },
        py::arg("config_json") = "", "Full config tree with defaults filled in, as JSON.");
  m.def("config_hash",
        [](const std::string &text) {
          return hflsim::config_hash(hflsim::parse_config_text(text));
        },
        py::arg("config_json") = "");
  m.def("scenario_names", &hflsim::scenario_names);
  m.def("run", &run_text, py::arg("config_json") = "", py::arg("out_dir") = "",
        "Runs one simulation; writes the metrics files when out_dir is given.");
  m.def("run_scenario", &run_scenario_text, py::arg("name"), py::arg("config_json") = "",
        py::arg("out_dir") = "", py::arg("dropouts") = 1);
  m.def("link_rate", &hflsim::link_rate, py::arg("bandwidth"), py::arg("tx_power"),
        py::arg("dist"), py::arg("alpha"), py::arg("n0"), "Shannon rate in bit/s.");
  m.def("dbm_per_hz_to_watt", &hflsim::dbm_per_hz_to_watt, py::arg("dbm"));
}
