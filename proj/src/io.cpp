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


#include "arisac/io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>

namespace arisac
{
    using nlohmann::json;

    namespace
    {
        double deg(double d) { return d * pi / 180.0; }
        double to_deg(double r) { return r * 180.0 / pi; }

        void require_object(const json &j, const std::string &where, std::initializer_list<const char *> allowed)
        {
            if (!j.is_object())
                throw std::invalid_argument(where + ": expected an object");
            for (const auto &[key, value] : j.items())
            {
                bool known = false;
                for (const char *a : allowed)
                    known = known || key == a;
                if (!known)
                    throw std::invalid_argument(where + ": unknown key '" + key + "'");
            }
        }

        template <typename T>
        void read(const json &j, const char *key, T &out)
        {
            if (auto it = j.find(key); it != j.end())
            {
                try
                {
                    out = it->get<T>();
                }
                catch (const json::exception &e)
                {
                    throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
                }
            }
        }

        template <typename F>
        void read_with(const json &j, const char *key, double &out, F convert)
        {
            double raw = 0.0;
            if (j.contains(key))
            {
                read(j, key, raw);
                out = convert(raw);
            }
        }

        Point2 read_point(const json &j, const std::string &name)
        {
            if (!j.is_array() || j.size() != 2)
                throw std::invalid_argument("positions_m." + name + ": expected [x, y]");
            return {j[0].get<double>(), j[1].get<double>()};
        }
    } // namespace

    SystemConfig config_from_json(const json &j)
    {
        require_object(j, "config",
                       {"preset", "M", "N", "L", "scheme", "ris_mode", "target_seed", "max_ao_iterations",
                        "P_a_max_dBm", "P_r_max_dBm", "sigma_b2_dBm", "sigma_g2_dBm", "sigma_w2_dBm", "sigma_r2_dBm",
                        "sigma_a2_dBm", "R_g_min_bps", "epsilon", "mu", "eta2_dB", "f_c_Hz", "T_s", "L0_dB",
                        "path_loss_exponents", "rician_factors", "positions_m", "targets", "tolerances", "penalty",
                        "dinkelbach"});

        std::string preset = "desk";
        read(j, "preset", preset);
        SystemConfig c;
        if (preset == "desk")
            c = desk_scale_config();
        else if (preset == "full")
            c = full_scale_config();
        else
            throw std::invalid_argument("config: unknown preset '" + preset + "' (expected desk or full)");

        read(j, "M", c.M);
        read(j, "N", c.N);
        read(j, "L", c.L);
        if (j.contains("scheme"))
            c.scheme = scheme_from_string(j["scheme"].get<std::string>());
        if (j.contains("ris_mode"))
            c.ris_mode = ris_mode_from_string(j["ris_mode"].get<std::string>());
        read(j, "target_seed", c.target_seed);
        read(j, "max_ao_iterations", c.max_ao_iterations);

        read_with(j, "P_a_max_dBm", c.P_a_max, dbm_to_watt);
        read_with(j, "P_r_max_dBm", c.P_r_max, dbm_to_watt);
        read_with(j, "sigma_b2_dBm", c.sigma_b2, dbm_to_watt);
        read_with(j, "sigma_g2_dBm", c.sigma_g2, dbm_to_watt);
        read_with(j, "sigma_w2_dBm", c.sigma_w2, dbm_to_watt);
        read_with(j, "sigma_r2_dBm", c.sigma_r2, dbm_to_watt);
        read_with(j, "sigma_a2_dBm", c.sigma_a2, dbm_to_watt);
        read(j, "R_g_min_bps", c.R_g_min);
        read(j, "epsilon", c.epsilon);
        if (auto it = j.find("mu"); it != j.end())
            c.mu = it->is_null() ? std::numeric_limits<double>::infinity() : it->get<double>();

        if (auto it = j.find("eta2_dB"); it != j.end())
        {
            auto amp = [](double db) { return std::sqrt(db_to_linear(db)); };
            if (it->is_array())
            {
                c.eta.clear();
                for (const auto &e : *it)
                    c.eta.push_back(amp(e.get<double>()));
            }
            else
            {
                c.eta.clear();
                c.eta_default = amp(it->get<double>());
            }
        }
        read(j, "f_c_Hz", c.f_c);
        read(j, "T_s", c.T);
        read_with(j, "L0_dB", c.L0, db_to_linear);

        if (auto it = j.find("path_loss_exponents"); it != j.end())
        {
            require_object(*it, "path_loss_exponents", {"bs_user", "bs_target", "ris"});
            read(*it, "bs_user", c.chi.bs_user);
            read(*it, "bs_target", c.chi.bs_target);
            read(*it, "ris", c.chi.ris);
        }
        if (auto it = j.find("rician_factors"); it != j.end())
        {
            require_object(*it, "rician_factors", {"bs_user", "ris"});
            read(*it, "bs_user", c.beta.bs_user);
            read(*it, "ris", c.beta.ris);
        }
        if (auto it = j.find("positions_m"); it != j.end())
        {
            require_object(*it, "positions_m", {"bs", "ris", "bob", "grace", "willie"});
            auto &p = c.positions;
            for (auto [name, dst] : {std::pair{"bs", &p.bs}, std::pair{"ris", &p.ris}, std::pair{"bob", &p.bob},
                                     std::pair{"grace", &p.grace}, std::pair{"willie", &p.willie}})
                if (it->contains(name))
                    *dst = read_point((*it)[name], name);
        }
        if (auto it = j.find("targets"); it != j.end())
        {
            if (!it->is_array())
                throw std::invalid_argument("targets: expected an array");
            c.targets.clear();
            for (const auto &t : *it)
            {
                require_object(t, "targets[]", {"angle_deg", "distance_m", "velocity_mps", "rcs_var"});
                TargetSpec s;
                double angle = 0.0;
                read(t, "angle_deg", angle);
                s.angle = deg(angle);
                read(t, "distance_m", s.distance);
                read(t, "velocity_mps", s.velocity);
                read(t, "rcs_var", s.rcs_var);
                c.targets.push_back(s);
            }
        }
        if (auto it = j.find("tolerances"); it != j.end())
        {
            require_object(*it, "tolerances", {"xi1", "xi2", "xi3", "solver"});
            read(*it, "xi1", c.tolerances.xi1);
            read(*it, "xi2", c.tolerances.xi2);
            read(*it, "xi3", c.tolerances.xi3);
            read(*it, "solver", c.tolerances.solver);
        }
        if (auto it = j.find("penalty"); it != j.end())
        {
            require_object(*it, "penalty", {"iota", "c1", "c2", "max_iterations"});
            read(*it, "iota", c.penalty.iota);
            read(*it, "c1", c.penalty.c1);
            read(*it, "c2", c.penalty.c2);
            read(*it, "max_iterations", c.penalty.max_iterations);
        }
        if (auto it = j.find("dinkelbach"); it != j.end())
        {
            require_object(*it, "dinkelbach", {"u_init", "max_iterations"});
            read(*it, "u_init", c.dinkelbach.u_init);
            read(*it, "max_iterations", c.dinkelbach.max_iterations);
        }
        c.validate();
        return c;
    }

    json config_to_json(const SystemConfig &c)
    {
        json j;
        j["M"] = c.M;
        j["N"] = c.N;
        j["L"] = c.L;
        j["scheme"] = std::string(to_string(c.scheme));
        j["ris_mode"] = std::string(to_string(c.ris_mode));
        j["target_seed"] = c.target_seed;
        j["max_ao_iterations"] = c.max_ao_iterations;
        j["P_a_max_dBm"] = watt_to_dbm(c.P_a_max);
        j["P_r_max_dBm"] = watt_to_dbm(c.P_r_max);
        j["sigma_b2_dBm"] = watt_to_dbm(c.sigma_b2);
        j["sigma_g2_dBm"] = watt_to_dbm(c.sigma_g2);
        j["sigma_w2_dBm"] = watt_to_dbm(c.sigma_w2);
        j["sigma_r2_dBm"] = watt_to_dbm(c.sigma_r2);
        j["sigma_a2_dBm"] = watt_to_dbm(c.sigma_a2);
        j["R_g_min_bps"] = c.R_g_min;
        j["epsilon"] = c.epsilon;
        j["mu"] = std::isfinite(c.mu) ? json(c.mu) : json(nullptr);
        if (c.eta.empty())
            j["eta2_dB"] = linear_to_db(c.eta_default * c.eta_default);
        else
        {
            json list = json::array();
            for (double e : c.eta)
                list.push_back(linear_to_db(e * e));
            j["eta2_dB"] = list;
        }
        j["f_c_Hz"] = c.f_c;
        j["T_s"] = c.T;
        j["L0_dB"] = linear_to_db(c.L0);
        j["path_loss_exponents"] = {{"bs_user", c.chi.bs_user}, {"bs_target", c.chi.bs_target}, {"ris", c.chi.ris}};
        j["rician_factors"] = {{"bs_user", c.beta.bs_user}, {"ris", c.beta.ris}};
        const auto &p = c.positions;
        j["positions_m"] = {{"bs", p.bs}, {"ris", p.ris}, {"bob", p.bob}, {"grace", p.grace}, {"willie", p.willie}};
        json targets = json::array();
        for (const auto &t : c.targets)
            targets.push_back({{"angle_deg", to_deg(t.angle)},
                               {"distance_m", t.distance},
                               {"velocity_mps", t.velocity},
                               {"rcs_var", t.rcs_var}});
        j["targets"] = targets;
        j["tolerances"] = {{"xi1", c.tolerances.xi1},
                           {"xi2", c.tolerances.xi2},
                           {"xi3", c.tolerances.xi3},
                           {"solver", c.tolerances.solver}};
        j["penalty"] = {{"iota", c.penalty.iota},
                        {"c1", c.penalty.c1},
                        {"c2", c.penalty.c2},
                        {"max_iterations", c.penalty.max_iterations}};
        j["dinkelbach"] = {{"u_init", c.dinkelbach.u_init}, {"max_iterations", c.dinkelbach.max_iterations}};
        return j;
    }

    namespace
    {
        json read_json_file(const std::filesystem::path &path)
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

        json pair(cplx z) { return json::array({z.real(), z.imag()}); }

        cplx complex_from(const json &j)
        {
            if (!j.is_array() || j.size() != 2)
                throw std::invalid_argument("complex entry must be [re, im]");
            return {j[0].get<double>(), j[1].get<double>()};
        }
    } // namespace

    SystemConfig load_config(const std::filesystem::path &path) { return config_from_json(read_json_file(path)); }

    json complex_to_json(const CVec &v)
    {
        json out = json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i)
            out.push_back(pair(v(i)));
        return out;
    }

    json complex_to_json(const CMat &m)
    {
        json out = json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r)
        {
            json row = json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                row.push_back(pair(m(r, c)));
            out.push_back(row);
        }
        return out;
    }

    CVec complex_vector_from_json(const json &j)
    {
        if (!j.is_array())
            throw std::invalid_argument("expected an array of [re, im] pairs");
        CVec v(static_cast<Eigen::Index>(j.size()));
        for (std::size_t i = 0; i < j.size(); ++i)
            v(static_cast<Eigen::Index>(i)) = complex_from(j[i]);
        return v;
    }

    CMat complex_matrix_from_json(const json &j)
    {
        if (!j.is_array())
            throw std::invalid_argument("expected an array of rows");
        const auto rows = static_cast<Eigen::Index>(j.size());
        const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
        CMat m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
        {
            const auto &row = j[static_cast<std::size_t>(r)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
                throw std::invalid_argument("ragged complex matrix");
            for (Eigen::Index c = 0; c < cols; ++c)
                m(r, c) = complex_from(row[static_cast<std::size_t>(c)]);
        }
        return m;
    }

    json solution_to_json(const BeamformerSolution &s, const SystemConfig &config)
    {
        json j;
        j["format"] = "arisac-solution-1";
        j["config"] = config_to_json(config);
        j["seed"] = s.seed;
        j["scheme"] = std::string(to_string(s.scheme));
        j["ris_mode"] = std::string(to_string(s.ris_mode));
        j["status"] = s.status;
        j["iterations"] = s.iterations;
        j["converged"] = s.converged;
        j["w_g"] = complex_to_json(s.w_g);
        j["w_b"] = complex_to_json(s.w_b);
        j["W_s"] = complex_to_json(s.W_s);
        j["phi"] = complex_to_json(s.phi);
        j["rates"] = {{"R_b_sg", s.rates.R_b_sg}, {"R_b_sb", s.rates.R_b_sb}, {"R_g_sg", s.rates.R_g_sg}};
        j["crb"] = std::isfinite(s.crb) ? json(s.crb) : json(nullptr);
        j["covert_margin"] = s.covert_margin;
        j["lifted_rate"] = std::isfinite(s.lifted_rate) ? json(s.lifted_rate) : json(nullptr);
        return j;
    }

    SolutionFile solution_from_json(const json &j)
    {
        if (j.value("format", std::string{}) != "arisac-solution-1")
            throw std::invalid_argument("not an arisac solution file (format tag missing)");
        SolutionFile f;
        f.config = config_from_json(j.at("config"));
        auto &s = f.solution;
        s.seed = j.at("seed").get<std::uint64_t>();
        s.scheme = scheme_from_string(j.at("scheme").get<std::string>());
        s.ris_mode = ris_mode_from_string(j.at("ris_mode").get<std::string>());
        s.status = j.value("status", std::string("unknown"));
        s.iterations = j.value("iterations", 0);
        s.converged = j.value("converged", false);
        s.w_g = complex_vector_from_json(j.at("w_g"));
        s.w_b = complex_vector_from_json(j.at("w_b"));
        s.W_s = complex_matrix_from_json(j.at("W_s"));
        s.phi = complex_vector_from_json(j.at("phi"));
        if (auto it = j.find("rates"); it != j.end())
        {
            s.rates.R_b_sg = it->value("R_b_sg", 0.0);
            s.rates.R_b_sb = it->value("R_b_sb", 0.0);
            s.rates.R_g_sg = it->value("R_g_sg", 0.0);
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        s.crb = j.contains("crb") && !j["crb"].is_null() ? j["crb"].get<double>() : nan;
        s.covert_margin = j.value("covert_margin", 0.0);
        s.lifted_rate = j.contains("lifted_rate") && !j["lifted_rate"].is_null() ? j["lifted_rate"].get<double>() : nan;
        if (s.scheme != f.config.scheme || s.ris_mode != f.config.ris_mode)
            throw std::invalid_argument("solution scheme/mode disagrees with its embedded config");
        return f;
    }

    void save_solution(const std::filesystem::path &path, const BeamformerSolution &solution,
                       const SystemConfig &config)
    {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write " + path.string());
        out << solution_to_json(solution, config).dump(2) << '\n';
    }

    SolutionFile load_solution(const std::filesystem::path &path)
    {
        return solution_from_json(read_json_file(path));
    }
} // namespace arisac
