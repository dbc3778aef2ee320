// Copyright 2026 The tomoqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tomoqkd/errors.h"
#include "tomoqkd/json_io.h"
#include "tomoqkd/protocol_sim.h"
#include "tomoqkd/region_scan.h"
#include "tomoqkd/security.h"

namespace py = pybind11;
using namespace tomoqkd;

namespace {

// Reports cross the boundary as JSON, so Python sees the same field names as
// the command-line tool.
py::object to_python(const nlohmann::json &j) {
    return py::module_::import("json").attr("loads")(dump_json(j, -1));
}

}  // namespace

PYBIND11_MODULE(tomoqkd, m) {
    m.doc() = "Security analysis and simulation of tomographic QKD on Bell-diagonal states";
    m.attr("__version__") = std::string(kToolVersion);

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

    py::class_<BellDiagonalState>(m, "BellDiagonalState")
        .def(py::init([](double a, double b, double c, double d) {
                 return BellDiagonalState::from_probabilities(a, b, c, d);
             }),
             py::arg("p00"), py::arg("p01"), py::arg("p10"), py::arg("p11"))
        .def_static("werner", &BellDiagonalState::werner, py::arg("p00"))
        .def_static(
            "from_angles",
            [](double p00, double theta, double phi) { return from_angles({p00, theta, phi}); },
            py::arg("p00"), py::arg("theta"), py::arg("phi"))
        .def("angles",
             [](const BellDiagonalState &s) {
                 AngleParameterization a = to_angles(s);
                 return py::make_tuple(a.p00, a.theta, a.phi);
             })
        .def_property_readonly("probabilities", &BellDiagonalState::probabilities)
        .def_property_readonly("protocol_mode", &BellDiagonalState::protocol_mode)
        .def("__repr__", [](const BellDiagonalState &s) {
            auto p = s.probabilities();
            return "BellDiagonalState(" + std::to_string(p[0]) + ", " + std::to_string(p[1]) + ", " +
                   std::to_string(p[2]) + ", " + std::to_string(p[3]) + ")";
        });

    m.def(
        "classify", [](const BellDiagonalState &s) { return to_python(report_to_json(classify_state(s))); },
        py::arg("state"), "Security report as a dict.");
    m.def("mutual_info_ab", &mutual_info_ab, py::arg("state"));
    m.def(
        "mutual_info_be", [](const BellDiagonalState &s) { return mutual_info_be(s).total; }, py::arg("state"));
    m.def(
        "eve_incoherent_error",
        [](const BellDiagonalState &s, int nx, int ny, int nz, int block_case) {
            BlockErrorInputs in{BlockCounts{nx, ny, nz}, block_case == 1 ? BlockCase::I : BlockCase::II};
            return eve_incoherent_block_error_exact(in, s);
        },
        py::arg("state"), py::arg("n_x"), py::arg("n_y"), py::arg("n_z"), py::arg("block_case") = 1);
    m.def(
        "werner_threshold", [](double tol) { return find_werner_ck_threshold(tol).p00; }, py::arg("tolerance") = 1e-6);

    m.def(
        "simulate",
        [](const BellDiagonalState &s, uint64_t pairs, int block_length, uint64_t seed, bool paper_faithful,
           unsigned workers) {
            SimConfig c;
            c.state = s;
            c.n_pairs = pairs;
            c.block_length = block_length;
            c.seed = seed;
            c.paper_faithful = paper_faithful;
            c.validate();
            SimulationRun run;
            {
                py::gil_scoped_release release;
                run = run_simulation(c, false, workers);
            }
            return to_python(simulation_to_json(run));
        },
        py::arg("state"), py::arg("pairs"), py::arg("block_length"), py::arg("seed"),
        py::arg("paper_faithful") = false, py::arg("workers") = 0);

    m.def(
        "scan_fractions",
        [](double p00, int n_theta, int n_phi, bool analysis_mode) {
            GridSpec spec;
            spec.p00 = p00;
            spec.n_theta = n_theta;
            spec.n_phi = n_phi;
            spec.analysis_mode = analysis_mode;
            RegionGrid g;
            {
                py::gil_scoped_release release;
                g = scan_region(spec);
            }
            py::dict d;
            d["ck"] = g.fraction(kCellCk);
            d["ad_incoherent"] = g.fraction(kCellAdIncoherent);
            d["ad_coherent"] = g.fraction(kCellAdCoherent);
            d["distillable"] = g.fraction(kCellDistillable);
            return d;
        },
        py::arg("p00"), py::arg("n_theta") = 64, py::arg("n_phi") = 64, py::arg("analysis_mode") = false);
}
