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

#include "arisac/scenario.hpp"
#include "arisac/random.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace arisac
{
    std::string_view to_string(Scheme s)
    {
        return s == Scheme::with_dss ? "w-dss" : "wo-dss";
    }

    std::string_view to_string(RisMode m)
    {
        switch (m)
        {
        case RisMode::active:
            return "active";
        case RisMode::passive:
            return "passive";
        case RisMode::none:
            return "none";
        }
        return "unknown";
    }

    std::string_view to_string(Node n)
    {
        switch (n)
        {
        case Node::grace:
            return "grace";
        case Node::bob:
            return "bob";
        case Node::willie:
            return "willie";
        }
        return "unknown";
    }

    Scheme scheme_from_string(std::string_view s)
    {
        if (s == "w-dss" || s == "w_dss" || s == "with_dss")
            return Scheme::with_dss;
        if (s == "wo-dss" || s == "w/o-dss" || s == "wo_dss" || s == "without_dss")
            return Scheme::without_dss;
        throw std::invalid_argument("unknown scheme '" + std::string(s) + "' (expected w-dss or wo-dss)");
    }

    RisMode ris_mode_from_string(std::string_view s)
    {
        if (s == "active")
            return RisMode::active;
        if (s == "passive")
            return RisMode::passive;
        if (s == "none")
            return RisMode::none;
        throw std::invalid_argument("unknown ris_mode '" + std::string(s) + "' (expected active, passive or none)");
    }

    double SystemConfig::eta_n(int n) const
    {
        if (ris_mode == RisMode::passive)
            return 1.0;
        if (eta.empty())
            return eta_default;
        return eta.at(static_cast<std::size_t>(n));
    }

    double SystemConfig::sigma_r2_effective() const
    {
        return ris_mode == RisMode::active ? sigma_r2 : 0.0;
    }

    void SystemConfig::validate() const
    {
        auto require = [](bool ok, const char *what)
        {
            if (!ok)
                throw std::invalid_argument(std::string("invalid SystemConfig: ") + what);
        };
        require(M >= 1, "M must be positive");
        require(N >= 1, "N must be positive");
        require(L >= 1, "L must be positive");
        require(!targets.empty(), "at least one target is required");
        require(P_a_max > 0.0 && P_r_max > 0.0, "power budgets must be positive");
        require(sigma_b2 > 0.0 && sigma_g2 > 0.0 && sigma_w2 > 0.0 && sigma_r2 > 0.0 && sigma_a2 > 0.0,
                "noise variances must be positive");
        require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
        require(mu > 0.0, "mu must be positive");
        require(R_g_min >= 0.0, "R_g_min must be non-negative");
        require(eta.empty() || static_cast<int>(eta.size()) == N, "eta must be empty or have N entries");
        require(eta_default > 0.0, "eta must be positive");
        for (double e : eta)
            require(e > 0.0, "eta must be positive");
        require(f_c > 0.0 && T > 0.0 && L0 > 0.0, "f_c, T and L0 must be positive");
        require(beta.bs_user >= 0.0 && beta.ris >= 0.0, "Rician factors must be non-negative");
        for (const auto &t : targets)
            require(t.distance > 0.0 && t.rcs_var > 0.0, "targets need positive distance and RCS variance");
        require(tolerances.xi1 > 0.0 && tolerances.xi2 > 0.0 && tolerances.xi3 > 0.0 && tolerances.solver > 0.0,
                "tolerances must be positive");
        require(penalty.c1 > 0.0 && penalty.c1 < 1.0 && penalty.c2 > 0.0 && penalty.c2 < 1.0,
                "penalty shrink factors must lie in (0, 1)");
        for (double i : penalty.iota)
            require(i > 0.0, "penalty factors must be positive");
        require(dinkelbach.u_init > 0.0, "Dinkelbach u_init must be positive");
        require(dinkelbach.max_iterations >= 1 && max_ao_iterations >= 1 && penalty.max_iterations >= 1,
                "iteration limits must be positive");
    }

    namespace
    {
        double deg(double d) { return d * pi / 180.0; }
    } // namespace

    SystemConfig full_scale_config()
    {
        SystemConfig c;
        c.M = 8;
        c.N = 16;
        c.L = 1024;
        c.targets = {{deg(-35.0), 40.0, 6.0, 1.0}, {deg(0.0), 50.0, 14.0, 1.0}, {deg(35.0), 35.0, 10.0, 1.0}};
        c.eta_default = 100.0; // eta^2 = 40 dB
        return c;
    }

    SystemConfig desk_scale_config()
    {
        SystemConfig c;
        c.M = 4;
        c.N = 8;
        c.L = 16;
        c.targets = {{deg(-35.0), 40.0, 6.0, 1.0}, {deg(0.0), 50.0, 14.0, 1.0}};
        c.eta_default = 100.0;
        return c;
    }

    CVec steering_vector(double theta, int size)
    {
        if (size < 1)
            throw std::invalid_argument("steering_vector: size must be positive");
        const double step = pi * std::sin(theta);
        CVec a(size);
        for (int m = 0; m < size; ++m)
            a(m) = std::polar(1.0, step * m);
        return a;
    }

    CVec steering_vector_derivative(double theta, int size)
    {
        CVec a = steering_vector(theta, size);
        const double dstep = pi * std::cos(theta);
        for (int m = 0; m < size; ++m)
            a(m) *= imag_unit * (dstep * m);
        return a;
    }

    double path_loss(double d, double chi, double L0)
    {
        if (!(d > 0.0))
            throw std::invalid_argument("path_loss: distance must be positive");
        return L0 * std::pow(d, -chi);
    }

    double doppler_frequency(double velocity, double f_c)
    {
        return 2.0 * velocity * f_c / speed_of_light;
    }

    double azimuth(const Point2 &from, const Point2 &to)
    {
        return std::atan2(to[1] - from[1], to[0] - from[0]);
    }

    double distance(const Point2 &a, const Point2 &b)
    {
        return std::hypot(b[0] - a[0], b[1] - a[1]);
    }

    std::vector<Target> make_targets(const SystemConfig &config)
    {
        Rng rng(config.target_seed);
        std::vector<Target> out;
        out.reserve(config.targets.size());
        for (const auto &spec : config.targets)
        {
            Target t;
            t.theta = spec.angle;
            t.distance = spec.distance;
            t.velocity = spec.velocity;
            t.rcs_var = spec.rcs_var;
            t.alpha = rng.complex_normal(spec.rcs_var);
            t.doppler = doppler_frequency(spec.velocity, config.f_c);
            out.push_back(t);
        }
        return out;
    }

    namespace
    {
        double checked_distance(const Point2 &a, const Point2 &b, const char *link)
        {
            const double d = distance(a, b);
            if (!(d > 0.0))
                throw std::invalid_argument(std::string("degenerate geometry: zero distance on link ") + link);
            return d;
        }

        // sqrt(gain) * (sqrt(beta/(1+beta)) * LoS + sqrt(1/(1+beta)) * NLoS)
        CMat rician(const CMat &los, double gain, double beta, Rng &rng)
        {
            const CMat nlos = rng.complex_normal_matrix(static_cast<int>(los.rows()), static_cast<int>(los.cols()));
            const double w_los = std::sqrt(beta / (1.0 + beta));
            const double w_nlos = std::sqrt(1.0 / (1.0 + beta));
            return std::sqrt(gain) * (w_los * los + w_nlos * nlos);
        }
    } // namespace

    ChannelSet sample_channels(const SystemConfig &config, std::uint64_t seed)
    {
        config.validate();
        const auto &pos = config.positions;
        const int M = config.M;
        const int N = config.N;

        ChannelSet ch;
        ch.seed = seed;
        Rng rng(seed);

        // Draw order is fixed so that every RIS mode sees identical direct channels for a seed.
        const double d_ar = checked_distance(pos.bs, pos.ris, "BS-RIS");
        const CMat g_los = steering_vector(azimuth(pos.ris, pos.bs), N) *
                           steering_vector(azimuth(pos.bs, pos.ris), M).adjoint();
        ch.G = rician(g_los, path_loss(d_ar, config.chi.ris, config.L0), config.beta.ris, rng);

        const std::array<Point2, 3> nodes{pos.grace, pos.bob, pos.willie};
        for (int k = 0; k < 3; ++k)
        {
            const double d_ak = checked_distance(pos.bs, nodes[k], "BS-user");
            const CMat los_a = steering_vector(azimuth(pos.bs, nodes[k]), M);
            ch.h_a[k] = rician(los_a, path_loss(d_ak, config.chi.bs_user, config.L0), config.beta.bs_user, rng);

            const double d_rk = checked_distance(pos.ris, nodes[k], "RIS-user");
            const CMat los_r = steering_vector(azimuth(pos.ris, nodes[k]), N);
            ch.h_r[k] = rician(los_r, path_loss(d_rk, config.chi.ris, config.L0), config.beta.ris, rng);
        }

        if (config.ris_mode == RisMode::none)
        {
            ch.G.setZero();
            for (auto &h : ch.h_r)
                h.setZero();
        }

        for (const auto &t : config.targets)
        {
            if (!(t.distance > 0.0))
                throw std::invalid_argument("degenerate geometry: zero target distance");
            const double amp = std::sqrt(path_loss(t.distance, config.chi.bs_target, config.L0));
            ch.h_t.push_back(amp * steering_vector(t.angle, M));
        }
        return ch;
    }
} // namespace arisac
