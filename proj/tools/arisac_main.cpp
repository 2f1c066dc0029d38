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


#include "arisac/harness.hpp"
#include "arisac/io.hpp"
#include "arisac/optimizer.hpp"
#include "arisac/verify.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace arisac;

namespace
{
    int cmd_run(const fs::path &spec_file, const std::optional<fs::path> &output, int workers,
                std::optional<std::uint64_t> seed_base, std::optional<int> realizations)
    {
        ExperimentSpec spec = load_experiment(spec_file);
        if (output)
            spec.output_dir = *output;
        if (seed_base)
            spec.seed_base = *seed_base;
        if (realizations)
            spec.realizations = *realizations;
        spec.validate();
        spdlog::info("{} sweep over {} values, {} modes, {} realizations", to_string(spec.axis), spec.points(),
                     spec.modes.size(), spec.realizations);

        RunOptions opts;
        opts.workers = workers;
        opts.progress = [&](const RunRecord &r, std::size_t done, std::size_t total)
        {
            const auto level = r.ok() ? spdlog::level::debug : spdlog::level::warn;
            spdlog::log(level, "[{}/{}] value={} {} r{}: {} rate={:.4f} ({:.2f} s){}{}", done, total,
                        spec.values[r.point], spec.modes[r.mode].label(), r.realization, r.status, r.covert_rate(),
                        r.wall_time, r.detail.empty() ? "" : " ", r.detail);
        };
        const ExperimentResult res = run_experiment(spec, opts);
        spdlog::info("admitted {} of {} candidate seeds", res.seeds.size(), res.seeds_scanned);
        write_results(res, spec.output_dir);
        for (const PointSummary &p : res.summary)
            spdlog::info("value={} {}: covert rate {:.4f} +- {:.4f} ({}/{} ok)", spec.values[p.point],
                         spec.modes[p.mode].label(), p.mean_rate, p.stderr_rate, p.ok, p.runs);
        spdlog::info("results written to {}", spec.output_dir.string());
        return 0;
    }

    int cmd_solve(const fs::path &config_file, std::uint64_t seed, const fs::path &output)
    {
        const SystemConfig config = load_config(config_file);
        const ChannelSet channels = sample_channels(config, seed);
        const BeamformerSolution sol = alternating_optimize(config, channels);
        spdlog::info("{} after {} iterations: covert rate {:.6f}, CRB {:.6g}", sol.status, sol.iterations,
                     sol.rates.R_b_sb, sol.crb);
        save_solution(output, sol, config);
        return 0;
    }

    int cmd_beampattern(const fs::path &solution_file, const std::optional<fs::path> &output, double step)
    {
        const SolutionFile f = load_solution(solution_file);
        const BeampatternTable table = beampattern_table(f.solution.covariance(), step);
        for (double a : table.local_maxima(-20.0))
            spdlog::info("local maximum at {:.1f} deg", a);
        if (output)
            write_beampattern(table, *output);
        else
        {
            std::cout << "angle_deg,gain_db\n";
            for (std::size_t i = 0; i < table.angle_deg.size(); ++i)
                std::cout << table.angle_deg[i] << ',' << table.gain_db[i] << '\n';
        }
        return 0;
    }

    int cmd_verify(const fs::path &solution_file, double tolerance)
    {
        const SolutionFile f = load_solution(solution_file);
        const ChannelSet channels = sample_channels(f.config, f.solution.seed);
        const AuditReport report = verify_solution(f.solution, channels, f.config);
        std::printf("%-16s %14s %14s %12s\n", "constraint", "lhs", "rhs", "residual");
        for (const ConstraintCheck &c : report.checks)
        {
            if (!c.checked)
                std::printf("%-16s %14s %14s %12s\n", c.name.c_str(), "-", "-", "n/a");
            else
                std::printf("%-16s %14.6g %14.6g %12.3g%s\n", c.name.c_str(), c.lhs, c.rhs, c.residual,
                            c.residual > tolerance ? "  VIOLATED" : "");
        }
        std::printf("DEP %.6f (bound %.6f), CRB %.6g\n", report.dep, report.dep_bound, report.crb);
        const bool ok = report.feasible(tolerance);
        std::printf("%s (max residual %.3g, tolerance %.3g)\n", ok ? "feasible" : "infeasible",
                    report.max_residual(), tolerance);
        return ok ? 0 : 1;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Covert beamforming for active-RIS-aided NOMA-ISAC"};
    app.require_subcommand(1);
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
        ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

    fs::path spec_file;
    std::optional<fs::path> output;
    int workers = 0;
    std::optional<std::uint64_t> seed_base;
    std::optional<int> realizations;
    auto *run = app.add_subcommand("run", "run a sweep experiment");
    run->add_option("spec", spec_file, "experiment file")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--output", output, "output directory (overrides the experiment file)");
    run->add_option("-j,--workers", workers, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
    run->add_option("--seed-base", seed_base, "base seed of the realizations");
    run->add_option("--realizations", realizations, "realizations per point")->check(CLI::PositiveNumber);

    fs::path config_file;
    std::uint64_t seed = 1;
    fs::path solution_out = "solution.json";
    auto *solve = app.add_subcommand("solve", "optimize one channel realization and write a solution file");
    solve->add_option("config", config_file, "config file")->required()->check(CLI::ExistingFile);
    solve->add_option("--seed", seed, "channel seed");
    solve->add_option("-o,--output", solution_out, "solution file to write");

    fs::path solution_file;
    double step = 0.5;
    std::optional<fs::path> table_out;
    auto *beam = app.add_subcommand("beampattern", "tabulate the transmit beampattern of a solution");
    beam->add_option("solution", solution_file, "solution file")->required()->check(CLI::ExistingFile);
    beam->add_option("-o,--output", table_out, "CSV file (stdout when omitted)");
    beam->add_option("--step", step, "grid step in degrees")->check(CLI::PositiveNumber);

    double tolerance = 1e-6;
    auto *verify = app.add_subcommand("verify", "re-check every constraint of a solution");
    verify->add_option("solution", solution_file, "solution file")->required()->check(CLI::ExistingFile);
    verify->add_option("--tolerance", tolerance, "relative residual tolerance");

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(spdlog::level::from_str(log_level));
    spdlog::set_pattern("[%H:%M:%S] [%^%l%$] %v");

    try
    {
        if (*run)
            return cmd_run(spec_file, output, workers, seed_base, realizations);
        if (*solve)
            return cmd_solve(config_file, seed, solution_out);
        if (*beam)
            return cmd_beampattern(solution_file, table_out, step);
        if (*verify)
            return cmd_verify(solution_file, tolerance);
    }
    catch (const std::exception &e)
    {
        spdlog::error("{}", e.what());
        return 2;
    }
    return 0;
}
