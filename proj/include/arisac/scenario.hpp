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

#include "arisac/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace arisac
{
    using Point2 = std::array<double, 2>;

    /// Geometry and kinematics of one sensing target. The reflection factor is sampled separately.
    struct TargetSpec
    {
        double angle = 0.0;    // azimuth seen from the BS, radians
        double distance = 1.0; // meters
        double velocity = 0.0; // radial velocity, m/s
        double rcs_var = 1.0;  // variance of the complex reflection factor
    };

    struct Target
    {
        double theta = 0.0;
        double distance = 1.0;
        double velocity = 0.0;
        double rcs_var = 1.0;
        cplx alpha{1.0, 0.0};
        double doppler = 0.0; // Hz
    };

    struct PathLossExponents
    {
        double bs_user = 3.5;
        double bs_target = 2.3;
        double ris = 2.2;
    };

    /// Rician factors, linear. A factor of zero is pure Rayleigh fading.
    struct RicianFactors
    {
        double bs_user = 0.0;
        double ris = 1.9952623149688795; // 3 dB
    };

    struct Positions
    {
        Point2 bs{0.0, 0.0};
        Point2 ris{75.0, 30.0};
        Point2 bob{80.0, 10.0};
        Point2 grace{90.0, 0.0};
        Point2 willie{70.0, 5.0};
    };

    struct Tolerances
    {
        double xi1 = 1e-2; // AO stop on covert-rate increment, bits/s/Hz
        double xi2 = 1e-4; // transmit rank-residual stop (relative)
        double xi3 = 1e-4; // reflection rank-residual stop (relative)
        double solver = 1e-8;
    };

    struct PenaltySettings
    {
        std::array<double, 4> iota{1e2, 1e2, 1e2, 1e2};
        double c1 = 1e-2;
        double c2 = 1e-2;
        int max_iterations = 8;
    };

    struct DinkelbachSettings
    {
        double u_init = 1e-3;
        int max_iterations = 30;
    };

    /**
     * All scenario scalars. Powers and variances are stored in watts, angles in radians and
     * reflection amplitudes as linear amplitudes. `load_config` converts from the dBm/degree
     * file representation.
     */
    struct SystemConfig
    {
        int M = 4;
        int N = 8;
        int L = 16;
        std::vector<TargetSpec> targets;

        double P_a_max = 1.0;
        double P_r_max = 0.31622776601683794;
        double sigma_b2 = 1e-12;
        double sigma_g2 = 1e-12;
        double sigma_w2 = 1e-12;
        double sigma_r2 = 1e-12;
        double sigma_a2 = 1e-12;

        double R_g_min = 1.0;
        double epsilon = 0.1;
        double mu = 1e10;
        std::vector<double> eta; // per-element amplitude caps; empty means eta_default for all

        double eta_default = 100.0;
        double f_c = 3e9;
        double T = 1e-6;
        double L0 = 1e-3;
        PathLossExponents chi;
        RicianFactors beta;
        Positions positions;
        Tolerances tolerances;
        PenaltySettings penalty;
        DinkelbachSettings dinkelbach;
        int max_ao_iterations = 20;

        Scheme scheme = Scheme::without_dss;
        RisMode ris_mode = RisMode::active;
        std::uint64_t target_seed = 7;

        int Q() const { return static_cast<int>(targets.size()); }

        /// Reflection cap of element n after the RIS mode is applied (1 for passive).
        double eta_n(int n) const;
        /// RIS thermal noise as seen by every formula (zero unless the RIS is active).
        double sigma_r2_effective() const;
        double gamma_th() const { return std::pow(2.0, R_g_min) - 1.0; }
        bool has_ris() const { return ris_mode != RisMode::none; }

        /// Throws std::invalid_argument naming the first violated invariant.
        void validate() const;
    };

    /// Defaults of the full-size scenario (M=8, N=16, L=1024, three targets).
    SystemConfig full_scale_config();
    /// Reduced scenario used by tests and the acceptance suite (M=4, N=8, L=16, two targets).
    SystemConfig desk_scale_config();

    /// One realization of every channel. Node-indexed arrays follow `Node` order.
    struct ChannelSet
    {
        std::array<CVec, 3> h_a; // BS -> node, length M
        std::array<CVec, 3> h_r; // RIS -> node, length N
        CMat G;                  // BS -> RIS, N x M
        std::vector<CVec> h_t;   // BS -> target q (LoS), length M
        std::uint64_t seed = 0;

        const CVec &direct(Node k) const { return h_a[static_cast<int>(k)]; }
        const CVec &reflected(Node k) const { return h_r[static_cast<int>(k)]; }
    };

    /// Half-wavelength ULA response; element m is exp(j*pi*m*sin(theta)).
    CVec steering_vector(double theta, int size);
    /// Derivative of `steering_vector` with respect to theta.
    CVec steering_vector_derivative(double theta, int size);

    double path_loss(double distance, double chi, double L0 = 1e-3);
    double doppler_frequency(double velocity, double f_c);

    /// Azimuth of `to` seen from `from`, measured from the x-axis.
    double azimuth(const Point2 &from, const Point2 &to);
    double distance(const Point2 &a, const Point2 &b);

    /// Samples reflection factors from `config.target_seed`; Doppler derived from velocity.
    std::vector<Target> make_targets(const SystemConfig &config);

    /// Pure function of (config, seed).
    ChannelSet sample_channels(const SystemConfig &config, std::uint64_t seed);
} // namespace arisac
