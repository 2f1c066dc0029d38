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


#pragma once

#include "arisac/comm.hpp"
#include "arisac/scenario.hpp"
#include "arisac/verify.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arisac
{
    enum class SweepAxis
    {
        mu,
        epsilon,
        P_a_max,
        N,
        M,
        ris_x_position,
        Q
    };

    std::string_view to_string(SweepAxis axis);
    SweepAxis sweep_axis_from_string(std::string_view s);

    /// One compared system variant. `augmented_budget` raises the BS budget to P_a + P_r.
    struct Mode
    {
        RisMode ris_mode = RisMode::active;
        Scheme scheme = Scheme::without_dss;
        bool augmented_budget = false;

        /// "<ris_mode>[-aug]/<scheme>", e.g. "passive-aug/wo-dss".
        std::string label() const;
        static Mode parse(std::string_view label);
        bool operator==(const Mode &) const = default;
    };

    struct ExperimentSpec
    {
        SystemConfig base;
        SweepAxis axis = SweepAxis::mu;
        /// P_a_max values are in dBm, ris_x_position in meters, N/M/Q are rounded to integers.
        std::vector<double> values;
        /// Interpret mu (sweep values or mu_factor) as multiples of the minimum CRB at the point.
        bool mu_relative = true;
        /// Relative mu applied at every point of a non-mu sweep; the base config's mu otherwise.
        std::optional<double> mu_factor;
        std::vector<Mode> modes;
        int realizations = 20;
        std::uint64_t seed_base = 1;
        /// Candidate seeds examined before admission gives up; 0 means 50 x realizations.
        int max_seed_scan = 0;
        std::filesystem::path output_dir = "results";
        bool save_solutions = false;

        void validate() const;
        std::size_t points() const { return values.size(); }
    };

    /// Experiment file reader (schema in docs/experiments.md). Relative paths resolve against `dir`.
    ExperimentSpec experiment_from_json(const nlohmann::json &j, const std::filesystem::path &dir = {});
    ExperimentSpec load_experiment(const std::filesystem::path &path);

    /// Config of sweep point `point` for `mode`, before mu is resolved.
    SystemConfig point_config(const ExperimentSpec &spec, std::size_t point, const Mode &mode);
    /// Absolute CRB threshold used by every mode at `point` (infinity when unconstrained).
    double point_mu(const ExperimentSpec &spec, std::size_t point);

    /**
     * The first `spec.realizations` seeds derive_seed(seed_base, k), k = 0, 1, ..., whose
     * realization satisfies the SIC order for every (point, mode). Throws when max_seed_scan
     * candidates are not enough.
     */
    std::vector<std::uint64_t> admit_seeds(const ExperimentSpec &spec, int *scanned = nullptr);

    struct RunRecord
    {
        std::size_t point = 0;
        std::size_t mode = 0;
        int realization = 0;
        std::uint64_t seed = 0;
        double mu = std::numeric_limits<double>::infinity();
        std::string status = "pending"; // converged | iteration-limit | infeasible | failed
        std::string detail;
        BeamformerSolution solution;
        double max_residual = std::numeric_limits<double>::quiet_NaN();
        double dep = std::numeric_limits<double>::quiet_NaN();
        double wall_time = 0.0;

        bool ok() const { return status == "converged" || status == "iteration-limit"; }
        double covert_rate() const;
    };

    struct PointSummary
    {
        std::size_t point = 0;
        std::size_t mode = 0;
        int runs = 0;
        int ok = 0;
        double mean_rate = std::numeric_limits<double>::quiet_NaN();
        double stderr_rate = std::numeric_limits<double>::quiet_NaN();
        double mean_crb = std::numeric_limits<double>::quiet_NaN();
        double stderr_crb = std::numeric_limits<double>::quiet_NaN();
        double mean_iterations = std::numeric_limits<double>::quiet_NaN();
    };

    struct ExperimentResult
    {
        ExperimentSpec spec;
        std::vector<std::uint64_t> seeds;
        std::vector<double> mu; // per point
        int seeds_scanned = 0;
        std::vector<RunRecord> runs; // sorted by (point, mode, realization)
        std::vector<PointSummary> summary;

        const RunRecord &at(std::size_t point, std::size_t mode, int realization) const;
        const PointSummary &summary_at(std::size_t point, std::size_t mode) const;
    };

    struct RunOptions
    {
        int workers = 0; // 0: hardware concurrency
        /// Called after each run from the worker that finished it, serialized by a mutex.
        std::function<void(const RunRecord &, std::size_t done, std::size_t total)> progress;
    };

    /// Solves every (point, mode, realization). Failures are recorded and never abort the sweep.
    ExperimentResult run_experiment(const ExperimentSpec &spec, const RunOptions &options = {});

    /// Mean and standard error of each (point, mode) over its successful runs.
    std::vector<PointSummary> summarize(const ExperimentSpec &spec, const std::vector<RunRecord> &runs);

    /**
     * Writes runs.csv, summary.csv, traces.csv and timing.csv (schemas in docs/outputs.md), plus
     * one solution file per run when spec.save_solutions is set. Apart from the first line of
     * each file and timing.csv, the output depends only on the spec.
     */
    void write_results(const ExperimentResult &result, const std::filesystem::path &dir);

    struct BeampatternTable
    {
        std::vector<double> angle_deg;
        std::vector<double> gain_db; // peak-normalized

        /// Angles of local maxima at or above `floor_db`; a flat run counts once, at its midpoint.
        std::vector<double> local_maxima(double floor_db = -std::numeric_limits<double>::infinity()) const;
    };

    /// Grid over [-90, 90] degrees, endpoints included.
    BeampatternTable beampattern_table(const CMat &R_x, double step_deg = 0.5);
    void write_beampattern(const BeampatternTable &table, const std::filesystem::path &path);

    /// First line of every emitted CSV file.
    std::string timestamp_header();
} // namespace arisac
