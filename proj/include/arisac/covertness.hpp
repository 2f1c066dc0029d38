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

#include <cstdint>

namespace arisac
{
    struct BeamformerSolution;

    struct WillieVariances
    {
        double sigma0_sq = 0.0; // H0: no covert signal
        double sigma1_sq = 0.0; // H1: covert signal present
    };

    struct WillieStats
    {
        double sigma0_sq = 0.0;
        double sigma1_sq = 0.0;
        double kappa = 1.0;
        double tau_star = 0.0;
    };

    /// Received-power variances at Willie. The sensing beamformer W_s only contributes in w-DSS.
    WillieVariances willie_variances(const CVec &w_g, const CVec &w_b, const CMat &W_s, const CVec &phi,
                                     const ChannelSet &channels, const SystemConfig &config);
    WillieVariances willie_variances(const BeamformerSolution &sol, const ChannelSet &channels,
                                     const SystemConfig &config);

    /// Root of ln x + 1/x - 1 = 2 eps^2 on [1, inf).
    double kappa_from_epsilon(double epsilon);

    /// D(p0 || p1) in nats for zero-mean complex Gaussians.
    double kl_divergence(double sigma0_sq, double sigma1_sq);

    /// Optimal radiometer threshold; requires sigma1_sq > sigma0_sq.
    double optimal_threshold(double sigma0_sq, double sigma1_sq);

    /// Minimum detection error probability of the optimal single-observation test.
    double min_dep(double sigma0_sq, double sigma1_sq);

    WillieStats make_willie_stats(double sigma0_sq, double sigma1_sq, double epsilon);

    struct DepEstimate
    {
        double dep = 1.0;
        double std_error = 0.0;
        long long trials = 0;
    };

    /**
     * Monte-Carlo estimate of Willie's detection error probability (false alarm + miss) with the
     * threshold tau*. `observations` > 1 averages that many samples per test (exploration only).
     * Trials are split into fixed shards, each with its own derived seed, so the result does not
     * depend on `workers`.
     */
    DepEstimate simulate_willie_detector(const WillieStats &stats, long long trials, std::uint64_t seed,
                                         int observations = 1, int workers = 1);

    /// sigma1^2 - kappa sigma0^2; non-positive means the covertness constraint holds.
    double covertness_margin(const WillieVariances &v, double kappa);
    double covertness_margin(const BeamformerSolution &sol, const ChannelSet &channels, const SystemConfig &config,
                             double kappa);
} // namespace arisac
