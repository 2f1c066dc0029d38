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
#include "arisac/random.hpp"
#include "arisac/sensing.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace arisac
{
    using nlohmann::json;

    std::string_view to_string(SweepAxis axis)
    {
        switch (axis)
        {
        case SweepAxis::mu:
            return "mu";
        case SweepAxis::epsilon:
            return "epsilon";
        case SweepAxis::P_a_max:
            return "P_a_max";
        case SweepAxis::N:
            return "N";
        case SweepAxis::M:
            return "M";
        case SweepAxis::ris_x_position:
            return "ris_x_position";
        case SweepAxis::Q:
            return "Q";
        }
        return "unknown";
    }

    SweepAxis sweep_axis_from_string(std::string_view s)
    {
        for (auto a : {SweepAxis::mu, SweepAxis::epsilon, SweepAxis::P_a_max, SweepAxis::N, SweepAxis::M,
                       SweepAxis::ris_x_position, SweepAxis::Q})
            if (s == to_string(a))
                return a;
        throw std::invalid_argument("unknown sweep axis '" + std::string(s) +
                                    "' (expected mu, epsilon, P_a_max, N, M, ris_x_position or Q)");
    }

    std::string Mode::label() const
    {
        std::string s(to_string(ris_mode));
        if (augmented_budget && ris_mode != RisMode::none)
            s += "-aug";
        return s + "/" + std::string(to_string(scheme));
    }

    Mode Mode::parse(std::string_view label)
    {
        const auto slash = label.find('/');
        if (slash == std::string_view::npos)
            throw std::invalid_argument("mode '" + std::string(label) + "' must look like <ris_mode>[-aug]/<scheme>");
        std::string_view ris = label.substr(0, slash);
        Mode m;
        if (ris.ends_with("-aug"))
        {
            m.augmented_budget = true;
            ris.remove_suffix(4);
        }
        m.ris_mode = ris_mode_from_string(ris);
        m.scheme = scheme_from_string(label.substr(slash + 1));
        if (m.ris_mode == RisMode::none)
            m.augmented_budget = true;
        return m;
    }

    void ExperimentSpec::validate() const
    {
        auto require = [](bool ok, const std::string &what)
        {
            if (!ok)
                throw std::invalid_argument("invalid experiment: " + what);
        };
        base.validate();
        require(!values.empty(), "the sweep value list is empty");
        require(!modes.empty(), "the mode list is empty");
        require(realizations >= 1, "realizations must be at least 1");
        require(max_seed_scan >= 0, "max_seed_scan must be non-negative");
        for (double v : values)
            require(std::isfinite(v) || (axis == SweepAxis::mu && std::isinf(v) && v > 0), "sweep values must be finite");
        for (const Mode &m : modes)
            require(m.ris_mode != RisMode::none || m.augmented_budget, "the none mode always uses the augmented budget");
        for (std::size_t i = 0; i < modes.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                require(!(modes[i] == modes[j]), "duplicate mode " + modes[i].label());
        if (mu_factor)
            require(*mu_factor > 0.0, "mu_factor must be positive");
        switch (axis)
        {
        case SweepAxis::mu:
            for (double v : values)
                require(v > 0.0, "mu values must be positive");
            break;
        case SweepAxis::epsilon:
            for (double v : values)
                require(v > 0.0 && v < 1.0, "epsilon values must lie in (0, 1)");
            break;
        case SweepAxis::N:
        case SweepAxis::M:
            for (double v : values)
                require(std::lround(v) >= 1, "array sizes must be positive");
            break;
        case SweepAxis::Q:
            for (double v : values)
                require(std::lround(v) >= 1 && std::lround(v) <= static_cast<long>(base.targets.size()),
                        "Q values must lie in [1, number of base targets]");
            break;
        default:
            break;
        }
    }

    namespace
    {
        void check_keys(const json &j, const std::string &where, std::initializer_list<const char *> allowed)
        {
            if (!j.is_object())
                throw std::invalid_argument(where + ": expected an object");
            for (const auto &[key, value] : j.items())
                if (std::none_of(allowed.begin(), allowed.end(), [&](const char *a) { return key == a; }))
                    throw std::invalid_argument(where + ": unknown key '" + key + "'");
        }

        json read_file(const std::filesystem::path &path)
        {
            std::ifstream in(path);
            if (!in)
                throw std::runtime_error("cannot open " + path.string());
            try
            {
                return json::parse(in, nullptr, true, true);
            }
            catch (const json::parse_error &e)
            {
                throw std::runtime_error(path.string() + ": " + e.what());
            }
        }
    } // namespace

    ExperimentSpec experiment_from_json(const json &j, const std::filesystem::path &dir)
    {
        check_keys(j, "experiment",
                   {"config", "config_file", "sweep", "mu_factor", "modes", "realizations", "seed_base",
                    "max_seed_scan", "output_dir", "save_solutions"});
        ExperimentSpec s;
        if (j.contains("config") && j.contains("config_file"))
            throw std::invalid_argument("experiment: give either config or config_file, not both");
        if (auto it = j.find("config_file"); it != j.end())
            s.base = load_config(dir / it->get<std::string>());
        else
            s.base = config_from_json(j.value("config", json::object()));

        const json &sweep = j.at("sweep");
        check_keys(sweep, "sweep", {"axis", "values", "mu_relative"});
        s.axis = sweep_axis_from_string(sweep.at("axis").get<std::string>());
        for (const auto &v : sweep.at("values"))
            s.values.push_back(v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>());
        s.mu_relative = sweep.value("mu_relative", true);

        if (auto it = j.find("mu_factor"); it != j.end() && !it->is_null())
            s.mu_factor = it->get<double>();
        if (auto it = j.find("modes"); it != j.end())
            for (const auto &m : *it)
                s.modes.push_back(Mode::parse(m.get<std::string>()));
        else
            for (const char *m : {"active/wo-dss", "active/w-dss", "passive-aug/wo-dss", "passive-aug/w-dss",
                                  "none/wo-dss", "none/w-dss"})
                s.modes.push_back(Mode::parse(m));
        s.realizations = j.value("realizations", s.realizations);
        s.seed_base = j.value("seed_base", s.seed_base);
        s.max_seed_scan = j.value("max_seed_scan", s.max_seed_scan);
        if (auto it = j.find("output_dir"); it != j.end())
            s.output_dir = dir / it->get<std::string>();
        s.save_solutions = j.value("save_solutions", false);
        s.validate();
        return s;
    }

    ExperimentSpec load_experiment(const std::filesystem::path &path)
    {
        return experiment_from_json(read_file(path), path.parent_path());
    }

    SystemConfig point_config(const ExperimentSpec &spec, std::size_t point, const Mode &mode)
    {
        SystemConfig c = spec.base;
        const double v = spec.values.at(point);
        switch (spec.axis)
        {
        case SweepAxis::mu:
            break; // resolved by point_mu
        case SweepAxis::epsilon:
            c.epsilon = v;
            break;
        case SweepAxis::P_a_max:
            c.P_a_max = dbm_to_watt(v);
            break;
        case SweepAxis::N:
            c.N = static_cast<int>(std::lround(v));
            if (!c.eta.empty())
                c.eta.resize(static_cast<std::size_t>(c.N), c.eta_default);
            break;
        case SweepAxis::M:
            c.M = static_cast<int>(std::lround(v));
            break;
        case SweepAxis::ris_x_position:
            c.positions.ris[0] = v;
            break;
        case SweepAxis::Q:
            c.targets.resize(static_cast<std::size_t>(std::lround(v)));
            break;
        }
        c.ris_mode = mode.ris_mode;
        c.scheme = mode.scheme;
        if (mode.augmented_budget)
            c.P_a_max += c.P_r_max;
        return c;
    }

    double point_mu(const ExperimentSpec &spec, std::size_t point)
    {
        std::optional<double> factor;
        if (spec.axis == SweepAxis::mu)
        {
            const double v = spec.values.at(point);
            if (!spec.mu_relative || std::isinf(v))
                return v;
            factor = v;
        }
        else
            factor = spec.mu_factor;
        if (!factor)
            return spec.base.mu;
        // reference: the non-augmented BS budget, shared by every mode at this point
        const SystemConfig ref = point_config(spec, point, Mode{});
        return *factor * minimum_crb(ref, ref.P_a_max);
    }

    std::vector<std::uint64_t> admit_seeds(const ExperimentSpec &spec, int *scanned)
    {
        const int limit = spec.max_seed_scan > 0 ? spec.max_seed_scan : 50 * spec.realizations;
        std::vector<SystemConfig> configs;
        for (std::size_t p = 0; p < spec.points(); ++p)
            for (const Mode &m : spec.modes)
                configs.push_back(point_config(spec, p, m));

        std::vector<std::uint64_t> seeds;
        int k = 0;
        for (; k < limit && static_cast<int>(seeds.size()) < spec.realizations; ++k)
        {
            const std::uint64_t seed = derive_seed(spec.seed_base, static_cast<std::uint64_t>(k));
            const bool ok = std::all_of(configs.begin(), configs.end(), [&](const SystemConfig &c)
                                        { return sic_admissible(c, sample_channels(c, seed)); });
            if (ok)
                seeds.push_back(seed);
        }
        if (scanned)
            *scanned = k;
        if (static_cast<int>(seeds.size()) < spec.realizations)
            throw std::runtime_error("only " + std::to_string(seeds.size()) + " of " +
                                     std::to_string(spec.realizations) + " realizations satisfy the SIC order after " +
                                     std::to_string(k) + " candidate seeds; raise max_seed_scan or move the users");
        return seeds;
    }

    double RunRecord::covert_rate() const
    {
        return ok() ? solution.rates.R_b_sb : std::numeric_limits<double>::quiet_NaN();
    }

    const RunRecord &ExperimentResult::at(std::size_t point, std::size_t mode, int realization) const
    {
        const std::size_t idx = (point * spec.modes.size() + mode) * static_cast<std::size_t>(spec.realizations) +
                                static_cast<std::size_t>(realization);
        return runs.at(idx);
    }

    const PointSummary &ExperimentResult::summary_at(std::size_t point, std::size_t mode) const
    {
        return summary.at(point * spec.modes.size() + mode);
    }

    namespace
    {
        void solve_one(const ExperimentSpec &spec, RunRecord &r)
        {
            const auto t0 = std::chrono::steady_clock::now();
            try
            {
                SystemConfig c = point_config(spec, r.point, spec.modes[r.mode]);
                c.mu = r.mu;
                const ChannelSet ch = sample_channels(c, r.seed);
                r.solution = alternating_optimize(c, ch);
                const AuditReport audit = verify_solution(r.solution, ch, c);
                r.max_residual = audit.max_residual();
                r.dep = audit.dep;
                r.status = r.solution.converged ? "converged" : "iteration-limit";
                if (!audit.feasible())
                {
                    r.status = "failed";
                    r.detail = "solution fails verification (max residual " + std::to_string(r.max_residual) + ")";
                }
            }
            catch (const std::runtime_error &e)
            {
                r.status = "infeasible";
                r.detail = e.what();
            }
            catch (const std::exception &e)
            {
                r.status = "failed";
                r.detail = e.what();
            }
            r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }

        struct Stats
        {
            double mean = std::numeric_limits<double>::quiet_NaN();
            double stderr_ = std::numeric_limits<double>::quiet_NaN();
        };

        Stats stats(const std::vector<double> &x)
        {
            Stats s;
            if (x.empty())
                return s;
            const double n = static_cast<double>(x.size());
            double sum = 0.0;
            for (double v : x)
                sum += v;
            s.mean = sum / n;
            if (x.size() < 2)
                return s;
            double ss = 0.0;
            for (double v : x)
                ss += (v - s.mean) * (v - s.mean);
            s.stderr_ = std::sqrt(ss / (n - 1.0) / n);
            return s;
        }
    } // namespace

    std::vector<PointSummary> summarize(const ExperimentSpec &spec, const std::vector<RunRecord> &runs)
    {
        std::vector<PointSummary> out;
        for (std::size_t p = 0; p < spec.points(); ++p)
            for (std::size_t m = 0; m < spec.modes.size(); ++m)
            {
                PointSummary s;
                s.point = p;
                s.mode = m;
                std::vector<double> rate, crb, its;
                for (const RunRecord &r : runs)
                {
                    if (r.point != p || r.mode != m)
                        continue;
                    ++s.runs;
                    if (!r.ok())
                        continue;
                    ++s.ok;
                    rate.push_back(r.solution.rates.R_b_sb);
                    crb.push_back(r.solution.crb);
                    its.push_back(r.solution.iterations);
                }
                const Stats sr = stats(rate), sc = stats(crb), si = stats(its);
                s.mean_rate = sr.mean;
                s.stderr_rate = sr.stderr_;
                s.mean_crb = sc.mean;
                s.stderr_crb = sc.stderr_;
                s.mean_iterations = si.mean;
                out.push_back(s);
            }
        return out;
    }

    ExperimentResult run_experiment(const ExperimentSpec &spec, const RunOptions &options)
    {
        spec.validate();
        ExperimentResult res;
        res.spec = spec;
        res.seeds = admit_seeds(spec, &res.seeds_scanned);
        for (std::size_t p = 0; p < spec.points(); ++p)
            res.mu.push_back(point_mu(spec, p));

        for (std::size_t p = 0; p < spec.points(); ++p)
            for (std::size_t m = 0; m < spec.modes.size(); ++m)
                for (int k = 0; k < spec.realizations; ++k)
                {
                    RunRecord r;
                    r.point = p;
                    r.mode = m;
                    r.realization = k;
                    r.seed = res.seeds[static_cast<std::size_t>(k)];
                    r.mu = res.mu[p];
                    res.runs.push_back(std::move(r));
                }

        const std::size_t total = res.runs.size();
        unsigned workers = options.workers > 0 ? static_cast<unsigned>(options.workers)
                                               : std::max(1u, std::thread::hardware_concurrency());
        workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
        std::atomic<std::size_t> next{0};
        std::size_t done = 0;
        std::mutex progress_mutex;
        {
            // each run owns its record; nothing else is shared
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back(
                    [&]
                    {
                        for (std::size_t i = next++; i < total; i = next++)
                        {
                            solve_one(spec, res.runs[i]);
                            if (options.progress)
                            {
                                std::lock_guard lock(progress_mutex);
                                options.progress(res.runs[i], ++done, total);
                            }
                        }
                    });
        }
        res.summary = summarize(spec, res.runs);
        return res;
    }

    // ---- output -----------------------------------------------------------------------------------

    std::string timestamp_header()
    {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm utc{};
        gmtime_r(&now, &utc);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
        return std::string("# arisac generated ") + buf;
    }

    namespace
    {
        // shortest round-trip representation; NaN is written as an empty field
        std::string num(double v)
        {
            if (std::isnan(v))
                return "";
            if (std::isinf(v))
                return v > 0 ? "inf" : "-inf";
            char buf[32];
            const auto r = std::to_chars(buf, buf + sizeof buf, v);
            return std::string(buf, r.ptr);
        }

        std::string quoted(const std::string &s)
        {
            std::string out = "\"";
            for (char c : s)
            {
                if (c == '"')
                    out += '"';
                out += c == '\n' ? ' ' : c;
            }
            return out + '"';
        }

        std::ofstream open_csv(const std::filesystem::path &path, const char *columns)
        {
            std::ofstream out(path);
            if (!out)
                throw std::runtime_error("cannot write " + path.string());
            out << timestamp_header() << '\n' << columns << '\n';
            return out;
        }
    } // namespace

    void write_results(const ExperimentResult &res, const std::filesystem::path &dir)
    {
        std::filesystem::create_directories(dir);
        const auto &spec = res.spec;
        const std::string axis(to_string(spec.axis));

        auto runs = open_csv(dir / "runs.csv",
                             "axis,value,mu,mode,realization,seed,status,covert_rate,lifted_rate,crb,covert_margin,"
                             "dep,iterations,max_residual,detail");
        auto traces = open_csv(dir / "traces.csv",
                               "axis,value,mode,realization,iteration,covert_rate,crb,covert_margin,"
                               "transmit_residual,reflect_residual,dinkelbach_iterations");
        auto timing = open_csv(dir / "timing.csv", "axis,value,mode,realization,iteration,wall_time_s");
        for (const RunRecord &r : res.runs)
        {
            const std::string key = axis + "," + num(spec.values[r.point]);
            const std::string mode = spec.modes[r.mode].label();
            const auto &s = r.solution;
            const bool ok = r.ok();
            runs << key << ',' << num(r.mu) << ',' << mode << ',' << r.realization << ',' << r.seed << ',' << r.status
                 << ',' << (ok ? num(s.rates.R_b_sb) : "") << ',' << (ok ? num(s.lifted_rate) : "") << ','
                 << (ok ? num(s.crb) : "") << ',' << (ok ? num(s.covert_margin) : "") << ',' << num(r.dep) << ','
                 << s.iterations << ',' << num(r.max_residual) << ',' << quoted(r.detail) << '\n';
            for (const TraceEntry &e : s.trace)
            {
                traces << key << ',' << mode << ',' << r.realization << ',' << e.iteration << ','
                       << num(e.covert_rate) << ',' << num(e.crb) << ',' << num(e.margin) << ','
                       << num(e.transmit_residual) << ',' << num(e.reflect_residual) << ',' << e.dinkelbach_iterations
                       << '\n';
                timing << key << ',' << mode << ',' << r.realization << ',' << e.iteration << ','
                       << num(e.wall_time) << '\n';
            }
            timing << key << ',' << mode << ',' << r.realization << ",total," << num(r.wall_time) << '\n';
        }

        auto summary = open_csv(dir / "summary.csv",
                                "axis,value,mu,mode,runs,ok,mean_covert_rate,stderr_covert_rate,mean_crb,stderr_crb,"
                                "mean_iterations");
        for (const PointSummary &p : res.summary)
            summary << axis << ',' << num(spec.values[p.point]) << ',' << num(res.mu[p.point]) << ','
                    << spec.modes[p.mode].label() << ',' << p.runs << ',' << p.ok << ',' << num(p.mean_rate) << ','
                    << num(p.stderr_rate) << ',' << num(p.mean_crb) << ',' << num(p.stderr_crb) << ','
                    << num(p.mean_iterations) << '\n';

        if (spec.save_solutions)
        {
            const auto sol_dir = dir / "solutions";
            std::filesystem::create_directories(sol_dir);
            for (const RunRecord &r : res.runs)
            {
                if (!r.ok())
                    continue;
                SystemConfig c = point_config(spec, r.point, spec.modes[r.mode]);
                c.mu = r.mu;
                std::string mode = spec.modes[r.mode].label();
                std::replace(mode.begin(), mode.end(), '/', '_');
                const std::string name = "p" + std::to_string(r.point) + "_" + mode + "_r" +
                                         std::to_string(r.realization) + ".json";
                save_solution(sol_dir / name, r.solution, c);
            }
        }
    }

    std::vector<double> BeampatternTable::local_maxima(double floor_db) const
    {
        constexpr double tie = 1e-9; // dB; rounding ripple on flat stretches
        std::vector<double> out;
        const std::size_t n = gain_db.size();
        std::size_t i = 0;
        while (i < n)
        {
            // a flat run counts once, at its midpoint; a completely flat pattern has no maxima
            std::size_t j = i;
            while (j + 1 < n && std::abs(gain_db[j + 1] - gain_db[i]) <= tie)
                ++j;
            const double g = gain_db[i];
            const bool above_left = i == 0 || g > gain_db[i - 1] + tie;
            const bool above_right = j + 1 == n || g > gain_db[j + 1] + tie;
            if (g >= floor_db && above_left && above_right && !(i == 0 && j + 1 == n))
                out.push_back(angle_deg[(i + j) / 2]);
            i = j + 1;
        }
        return out;
    }

    BeampatternTable beampattern_table(const CMat &R_x, double step_deg)
    {
        if (!(step_deg > 0.0))
            throw std::invalid_argument("beampattern step must be positive");
        BeampatternTable t;
        const auto count = static_cast<int>(std::floor(180.0 / step_deg + 1e-9)) + 1;
        std::vector<double> rad;
        for (int i = 0; i < count; ++i)
        {
            t.angle_deg.push_back(-90.0 + i * step_deg);
            rad.push_back(t.angle_deg.back() * pi / 180.0);
        }
        t.gain_db = beampattern(R_x, rad, true);
        return t;
    }

    void write_beampattern(const BeampatternTable &table, const std::filesystem::path &path)
    {
        auto out = open_csv(path, "angle_deg,gain_db");
        for (std::size_t i = 0; i < table.angle_deg.size(); ++i)
            out << num(table.angle_deg[i]) << ',' << num(table.gain_db[i]) << '\n';
    }
} // namespace arisac
