// SPDX-License-Identifier: Apache-2.0
//
// arisac: covert beamforming for active-RIS-aided NOMA-ISAC systems
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "arisac/conic.hpp"
#include "arisac/covertness.hpp"
#include "arisac/harness.hpp"
#include "arisac/io.hpp"
#include "arisac/optimizer.hpp"
#include "arisac/random.hpp"
#include "arisac/sensing.hpp"
#include "arisac/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace arisac;
using nlohmann::json;

// Configs, solutions and reports cross the boundary as JSON text; the Python package wraps them
// in dicts.
namespace
{
    SystemConfig config_of(const std::string &text) { return config_from_json(json::parse(text)); }

    json report_json(const AuditReport &r)
    {
        json checks = json::array();
        for (const auto &c : r.checks)
            checks.push_back({{"name", c.name},
                              {"lhs", c.lhs},
                              {"rhs", c.rhs},
                              {"residual", c.residual},
                              {"checked", c.checked}});
        return {{"checks", checks},
                {"dep", r.dep},
                {"dep_bound", r.dep_bound},
                {"crb", std::isfinite(r.crb) ? json(r.crb) : json(nullptr)},
                {"max_residual", r.max_residual()},
                {"feasible", r.feasible()}};
    }

    std::string solve_json(const std::string &config_text, std::uint64_t seed)
    {
        const SystemConfig c = config_of(config_text);
        BeamformerSolution s;
        {
            py::gil_scoped_release release;
            s = alternating_optimize(c, sample_channels(c, seed));
        }
        json j = solution_to_json(s, c);
        json trace = json::array();
        for (const auto &e : s.trace)
            trace.push_back({{"iteration", e.iteration},
                             {"covert_rate", e.covert_rate},
                             {"crb", e.crb},
                             {"covert_margin", e.margin},
                             {"transmit_residual", e.transmit_residual},
                             {"reflect_residual", e.reflect_residual},
                             {"dinkelbach_iterations", e.dinkelbach_iterations}});
        j["trace"] = trace;
        return j.dump();
    }

    std::string verify_json(const std::string &solution_text)
    {
        const SolutionFile f = solution_from_json(json::parse(solution_text));
        return report_json(verify_solution(f.solution, sample_channels(f.config, f.solution.seed), f.config)).dump();
    }

    py::tuple beampattern_of(const std::string &solution_text, double step)
    {
        const SolutionFile f = solution_from_json(json::parse(solution_text));
        const BeampatternTable t = beampattern_table(f.solution.covariance(), step);
        return py::make_tuple(t.angle_deg, t.gain_db, t.local_maxima(-20.0));
    }

    py::tuple beampattern_of_covariance(const CMat &R, double step)
    {
        const BeampatternTable t = beampattern_table(R, step);
        return py::make_tuple(t.angle_deg, t.gain_db, t.local_maxima(-20.0));
    }

    std::string transmit_problem_json(const std::string &config_text, std::uint64_t seed,
                                      const std::optional<CVec> &phi)
    {
        const SystemConfig c = config_of(config_text);
        const ChannelSet ch = sample_channels(c, seed);
        const CVec p = phi ? *phi : CVec(CVec::Ones(c.N));
        std::ostringstream os;
        write_problem(os, transmit_problem(p, ch, c, SensingModel(c)));
        return os.str();
    }

    py::tuple solve_transmit_problem(const std::string &config_text, std::uint64_t seed,
                                     const std::optional<CVec> &phi)
    {
        const SystemConfig c = config_of(config_text);
        const ChannelSet ch = sample_channels(c, seed);
        const CVec p = phi ? *phi : CVec(CVec::Ones(c.N));
        const ConicProblem prob = transmit_problem(p, ch, c, SensingModel(c));
        ConicSolution s;
        {
            py::gil_scoped_release release;
            s = solve(prob);
        }
        return py::make_tuple(std::string(to_string(s.status)), s.objective);
    }

    std::string run_experiment_json(const std::string &spec_text, int workers, const std::string &output_dir)
    {
        ExperimentSpec spec = experiment_from_json(json::parse(spec_text));
        RunOptions opt;
        opt.workers = workers;
        ExperimentResult r;
        {
            py::gil_scoped_release release;
            r = run_experiment(spec, opt);
        }
        if (!output_dir.empty())
            write_results(r, output_dir);
        json rows = json::array();
        for (const PointSummary &p : r.summary)
            rows.push_back({{"value", spec.values[p.point]},
                            {"mu", r.mu[p.point]},
                            {"mode", spec.modes[p.mode].label()},
                            {"runs", p.runs},
                            {"ok", p.ok},
                            {"mean_covert_rate", p.mean_rate},
                            {"stderr_covert_rate", p.stderr_rate}});
        json runs = json::array();
        for (const RunRecord &run : r.runs)
            runs.push_back({{"value", spec.values[run.point]},
                            {"mode", spec.modes[run.mode].label()},
                            {"realization", run.realization},
                            {"seed", run.seed},
                            {"status", run.status},
                            {"covert_rate", run.ok() ? json(run.covert_rate()) : json(nullptr)}});
        return json{{"summary", rows}, {"runs", runs}, {"seeds", r.seeds}}.dump();
    }
} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Native core of the arisac package";

    m.def("desk_config", [] { return config_to_json(desk_scale_config()).dump(); });
    m.def("full_config", [] { return config_to_json(full_scale_config()).dump(); });
    m.def("normalize_config", [](const std::string &t) { return config_to_json(config_of(t)).dump(); },
          py::arg("config"));

    m.def("solve", &solve_json, py::arg("config"), py::arg("seed"));
    m.def("verify", &verify_json, py::arg("solution"));
    m.def("beampattern", &beampattern_of, py::arg("solution"), py::arg("step") = 0.5);
    m.def("beampattern_of_covariance", &beampattern_of_covariance, py::arg("R"), py::arg("step") = 0.5);
    m.def("run_experiment", &run_experiment_json, py::arg("spec"), py::arg("workers") = 0,
          py::arg("output_dir") = "");

    m.def(
        "minimum_crb",
        [](const std::string &t, std::optional<double> power)
        {
            const SystemConfig c = config_of(t);
            return minimum_crb(c, power.value_or(c.P_a_max));
        },
        py::arg("config"), py::arg("power") = py::none());
    m.def(
        "fisher_information",
        [](const std::string &t, const CMat &R)
        {
            const SystemConfig c = config_of(t);
            const auto targets = make_targets(c);
            return RMat(fisher_information(R, build_fisher_components(targets, c)));
        },
        py::arg("config"), py::arg("R"));
    m.def("sic_admissible", [](const std::string &t, std::uint64_t seed)
          { const SystemConfig c = config_of(t); return sic_admissible(c, sample_channels(c, seed)); },
          py::arg("config"), py::arg("seed"));

    m.def("transmit_problem", &transmit_problem_json, py::arg("config"), py::arg("seed"), py::arg("phi") = py::none());
    m.def("solve_transmit_problem", &solve_transmit_problem, py::arg("config"), py::arg("seed"),
          py::arg("phi") = py::none());

    m.def("kappa_from_epsilon", &kappa_from_epsilon, py::arg("epsilon"));
    m.def("kl_divergence", &kl_divergence, py::arg("sigma0_sq"), py::arg("sigma1_sq"));
    m.def("min_dep", &min_dep, py::arg("sigma0_sq"), py::arg("sigma1_sq"));
    m.def("steering_vector", &steering_vector, py::arg("theta"), py::arg("size"));
    m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("stream"));

    py::register_exception_translator(
        [](std::exception_ptr p)
        {
            try
            {
                if (p)
                    std::rethrow_exception(p);
            }
            catch (const json::exception &e)
            {
                PyErr_SetString(PyExc_ValueError, e.what());
            }
        });
}
