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


#include "arisac/verify.hpp"
#include "arisac/covertness.hpp"
#include "arisac/optimizer.hpp"
#include "arisac/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace arisac
{
    double AuditReport::max_residual() const
    {
        double m = 0.0;
        for (const auto &c : checks)
            if (c.checked)
                m = std::max(m, std::isnan(c.residual) ? std::numeric_limits<double>::infinity() : c.residual);
        return m;
    }

    const ConstraintCheck &AuditReport::at(const std::string &name) const
    {
        for (const auto &c : checks)
            if (c.name == name)
                return c;
        throw std::out_of_range("no constraint named " + name);
    }

    namespace
    {
        // lhs <= rhs, violation relative to the larger magnitude
        ConstraintCheck upper(std::string name, double lhs, double rhs)
        {
            const double scale = std::max({std::abs(lhs), std::abs(rhs), std::numeric_limits<double>::min()});
            return {std::move(name), lhs, rhs, std::max(0.0, lhs - rhs) / scale, true};
        }

        ConstraintCheck lower(std::string name, double lhs, double rhs)
        {
            ConstraintCheck c = upper(std::move(name), rhs, lhs);
            std::swap(c.lhs, c.rhs);
            return c;
        }
    } // namespace

    AuditReport verify_solution(const BeamformerSolution &sol, const ChannelSet &channels,
                                const SystemConfig &config)
    {
        const int M = config.M;
        const int N = config.N;
        if (sol.w_g.size() != M || sol.w_b.size() != M || sol.phi.size() != N)
            throw std::invalid_argument("verify_solution: beamformer or reflection vector has the wrong size");
        if (sol.has_dss() && sol.W_s.rows() != M)
            throw std::invalid_argument("verify_solution: sensing beamformer has the wrong size");

        AuditReport r;
        const double sr2 = config.sigma_r2_effective();

        r.checks.push_back(upper("transmit_power", sol.transmit_power(), config.P_a_max));
        r.checks.push_back(lower("power_order", sol.w_g.squaredNorm(), sol.w_b.squaredNorm()));

        const double gb = composite_channel(sol.phi, channels, Node::bob).squaredNorm();
        const double gg = composite_channel(sol.phi, channels, Node::grace).squaredNorm();
        r.checks.push_back(lower("sic_order", gb, gg));

        const CVec g_g = composite_channel(sol.phi, channels, Node::grace);
        const double sig = std::norm(g_g.dot(sol.w_g));
        const double intf = std::norm(g_g.dot(sol.w_b)) + sr2 * ris_noise_gain(sol.phi, channels, Node::grace) +
                            config.sigma_g2;
        r.checks.push_back(lower("grace_qos", sig / intf, config.gamma_th()));

        // informational: with multi-antenna beamformers the rate order does not follow from the gain order
        const Rates rates = achievable_rates(sol, channels, config);
        ConstraintCheck order = lower("rate_order", rates.R_b_sg, rates.R_g_sg);
        order.checked = false;
        r.checks.push_back(order);

        const SensingModel sensing(config);
        r.crb = sensing.crb(sol.covariance());
        ConstraintCheck crb = upper("crb", std::isnan(r.crb) ? std::numeric_limits<double>::infinity() : r.crb,
                                    config.mu);
        crb.checked = std::isfinite(config.mu);
        r.checks.push_back(crb);

        ConstraintCheck ris = upper("ris_power", ris_output_power(sol, channels, config), config.P_r_max);
        ris.checked = config.ris_mode == RisMode::active;
        r.checks.push_back(ris);

        ConstraintCheck amp{"amplitude", 0.0, 0.0, 0.0, true};
        for (int n = 0; n < N; ++n)
        {
            const double a = std::abs(sol.phi(n));
            double v = 0.0;
            switch (config.ris_mode)
            {
            case RisMode::active:
                v = std::max(0.0, a - config.eta_n(n)) / config.eta_n(n);
                break;
            case RisMode::passive:
                v = std::abs(a - 1.0);
                break;
            case RisMode::none:
                v = a;
                break;
            }
            if (v >= amp.residual)
            {
                amp.residual = v;
                amp.lhs = a;
                amp.rhs = config.ris_mode == RisMode::none ? 0.0 : config.eta_n(n);
            }
        }
        r.checks.push_back(amp);

        const WillieVariances v = willie_variances(sol, channels, config);
        const double kappa = kappa_from_epsilon(config.epsilon);
        r.checks.push_back(upper("covertness", v.sigma1_sq, kappa * v.sigma0_sq));
        r.dep = min_dep(v.sigma0_sq, v.sigma1_sq);
        r.dep_bound = 1.0 - std::sqrt(kl_divergence(v.sigma0_sq, v.sigma1_sq) / 2.0);
        return r;
    }
} // namespace arisac
