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


#include "arisac/comm.hpp"

#include <cmath>
#include <stdexcept>

namespace arisac
{
    CMat BeamformerSolution::covariance() const
    {
        CMat R = w_g * w_g.adjoint() + w_b * w_b.adjoint();
        if (has_dss())
            R += W_s * W_s.adjoint();
        return R;
    }

    double BeamformerSolution::transmit_power() const
    {
        double p = w_g.squaredNorm() + w_b.squaredNorm();
        if (has_dss())
            p += W_s.squaredNorm();
        return p;
    }

    CVec composite_channel(const CVec &phi, const ChannelSet &channels, Node k)
    {
        const CVec &h_a = channels.direct(k);
        const CVec &h_r = channels.reflected(k);
        if (phi.size() != h_r.size() || channels.G.rows() != phi.size() || channels.G.cols() != h_a.size())
            throw std::invalid_argument("composite_channel: dimension mismatch");
        // g = h_a + G^H diag(conj(phi)) h_r
        const CVec t = phi.conjugate().cwiseProduct(h_r);
        return h_a + channels.G.adjoint() * t;
    }

    double ris_noise_gain(const CVec &phi, const ChannelSet &channels, Node k)
    {
        const CVec &h_r = channels.reflected(k);
        if (phi.size() != h_r.size())
            throw std::invalid_argument("ris_noise_gain: dimension mismatch");
        return phi.cwiseAbs2().dot(h_r.cwiseAbs2());
    }

    Rates achievable_rates(const CVec &w_g, const CVec &w_b, const CVec &phi, const ChannelSet &channels,
                           const SystemConfig &config)
    {
        const double sr2 = config.sigma_r2_effective();
        const CVec g_b = composite_channel(phi, channels, Node::bob);
        const CVec g_g = composite_channel(phi, channels, Node::grace);
        const double bb = std::norm(g_b.dot(w_b)); // dot() conjugates the first argument
        const double bg = std::norm(g_b.dot(w_g));
        const double gg = std::norm(g_g.dot(w_g));
        const double gb = std::norm(g_g.dot(w_b));
        const double nb = sr2 * ris_noise_gain(phi, channels, Node::bob) + config.sigma_b2;
        const double ng = sr2 * ris_noise_gain(phi, channels, Node::grace) + config.sigma_g2;

        Rates r;
        r.R_b_sg = std::log2(1.0 + bg / (bb + nb));
        r.R_b_sb = std::log2(1.0 + bb / nb);
        r.R_g_sg = std::log2(1.0 + gg / (gb + ng));
        return r;
    }

    Rates achievable_rates(const BeamformerSolution &sol, const ChannelSet &channels, const SystemConfig &config)
    {
        return achievable_rates(sol.w_g, sol.w_b, sol.phi, channels, config);
    }

    bool sic_feasible(const CVec &phi, const ChannelSet &channels, double tol)
    {
        const double b = composite_channel(phi, channels, Node::bob).squaredNorm();
        const double g = composite_channel(phi, channels, Node::grace).squaredNorm();
        return b >= g * (1.0 - tol);
    }

    CMat stacked_beamformers(const BeamformerSolution &sol)
    {
        const Eigen::Index extra = sol.has_dss() ? sol.W_s.cols() : 0;
        CMat W(sol.w_g.size(), 2 + extra);
        W.col(0) = sol.w_g;
        W.col(1) = sol.w_b;
        if (extra > 0)
            W.rightCols(extra) = sol.W_s;
        return W;
    }

    double ris_output_power(const CMat &W, const CVec &phi, const ChannelSet &channels, const SystemConfig &config)
    {
        if (W.rows() != channels.G.cols() || phi.size() != channels.G.rows())
            throw std::invalid_argument("ris_output_power: dimension mismatch");
        const CMat PGW = phi.asDiagonal() * (channels.G * W);
        return PGW.squaredNorm() + phi.squaredNorm() * config.sigma_r2_effective();
    }

    double ris_output_power(const BeamformerSolution &sol, const ChannelSet &channels, const SystemConfig &config)
    {
        return ris_output_power(stacked_beamformers(sol), sol.phi, channels, config);
    }
} // namespace arisac
