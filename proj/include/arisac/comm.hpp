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

#include "arisac/scenario.hpp"

#include <limits>
#include <string>
#include <vector>

namespace arisac
{
    struct Rates
    {
        double R_b_sg = 0.0; // Bob decoding Grace's signal (SIC stage)
        double R_b_sb = 0.0; // covert rate
        double R_g_sg = 0.0;
    };

    /// One row of the AO trace.
    struct TraceEntry
    {
        int iteration = 0;
        double covert_rate = 0.0;
        double crb = std::numeric_limits<double>::quiet_NaN();
        double margin = 0.0;
        double transmit_residual = 0.0;
        double reflect_residual = 0.0;
        int dinkelbach_iterations = 0;
        double wall_time = 0.0; // seconds since the run started
    };

    struct BeamformerSolution
    {
        Scheme scheme = Scheme::without_dss;
        RisMode ris_mode = RisMode::active;
        CVec w_g;
        CVec w_b;
        CMat W_s; // M x M sensing beamformer, empty without DSS
        CVec phi; // diagonal of the reflection matrix
        Rates rates;
        double crb = std::numeric_limits<double>::quiet_NaN();
        double covert_margin = 0.0;
        std::vector<TraceEntry> trace;
        std::string status = "unsolved";
        int iterations = 0;
        bool converged = false;
        /// Covert rate implied by the lifted (matrix) solution of the last transmit subproblem.
        double lifted_rate = std::numeric_limits<double>::quiet_NaN();
        std::uint64_t seed = 0;

        /// W_c W_c^H (+ W_s W_s^H): the transmit covariance seen by the targets.
        CMat covariance() const;
        double transmit_power() const;
        bool has_dss() const { return W_s.size() > 0; }
    };

    /// g_k with g_k^H = h_ak^H + h_rk^H diag(phi) G.
    CVec composite_channel(const CVec &phi, const ChannelSet &channels, Node k);

    /// ||h_rk^H diag(phi)||^2
    double ris_noise_gain(const CVec &phi, const ChannelSet &channels, Node k);

    Rates achievable_rates(const BeamformerSolution &sol, const ChannelSet &channels, const SystemConfig &config);
    Rates achievable_rates(const CVec &w_g, const CVec &w_b, const CVec &phi, const ChannelSet &channels,
                           const SystemConfig &config);

    /// ||g_b||^2 >= ||g_g||^2 (relative slack `tol`).
    bool sic_feasible(const CVec &phi, const ChannelSet &channels, double tol = 0.0);

    /// ||diag(phi) G W||_F^2 + ||phi||^2 sigma_r^2 with the mode-effective RIS noise.
    double ris_output_power(const BeamformerSolution &sol, const ChannelSet &channels, const SystemConfig &config);
    double ris_output_power(const CMat &W, const CVec &phi, const ChannelSet &channels, const SystemConfig &config);

    /// [w_g, w_b, W_s] as one M x (2 + cols(W_s)) matrix.
    CMat stacked_beamformers(const BeamformerSolution &sol);
} // namespace arisac
