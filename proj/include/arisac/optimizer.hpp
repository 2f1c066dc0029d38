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
#include "arisac/conic.hpp"
#include "arisac/sensing.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace arisac
{
    /**
     * Lifted quantities of the transmit and reflection subproblems. Columns of the beamforming
     * matrix W are ordered [w_g, w_b, W_s...], so column 1 is Bob's covert beamformer.
     */
    struct LiftedParameters
    {
        std::array<CMat, 3> Upsilon; // g_k g_k^H
        std::array<CMat, 3> H_r;     // h_rk h_rk^H
        CMat Psi;                    // Phi Phi^H
        CMat Gamma;                  // (Phi G)^H (Phi G)

        std::array<std::vector<CMat>, 3> Lambda; // Lambda[k][j], |g_k^H w_j|^2 = tr(Lambda U)
        std::array<CMat, 3> Omega;               // ||h_rk^H Phi||^2 = tr(Omega U)
        CMat Pi;                                 // ||Phi||_F^2 = tr(Pi U)
        std::vector<CMat> S;                     // ||Phi G w_j||^2 = tr(S_j U)
        std::array<CMat, 3> C;                   // ||g_k||^2 = tr(C_k U)
    };

    /// Lifts for reflection vector `phi` and beamformer columns `W` (W may have zero columns).
    LiftedParameters build_lifted(const ChannelSet &channels, const CVec &phi, const CMat &W);

    /// u = [conj(phi); 1], so that U = u u^H.
    CVec lift_reflection(const CVec &phi);
    /// Inverse of `lift_reflection` after normalizing the last entry to one.
    CVec reflection_from_lift(const CVec &u);

    /// Tangent-plane majorizer of -||X||_2 at X_prev: -||X_prev||_2 - tr(q q^H (X - X_prev)).
    struct SpectralBound
    {
        double norm = 0.0;
        CVec q;
        CMat anchor;

        double value(const CMat &X) const;
        /// ||X||_* + value(X) for PSD X, i.e. tr((I - q q^H) X): the linear rank penalty.
        double penalty(const CMat &X) const;
    };

    SpectralBound spectral_linearization(const CMat &X_prev);

    struct PenaltyState
    {
        double iota = 1e2;
        double shrink = 1e-2;
        std::vector<SpectralBound> anchors;
        double residual = 0.0; // largest relative rank residual of the last solve
        int iterations = 0;
    };

    struct DinkelbachState
    {
        double u = 1e-3;
        double f_num = 0.0;
        double f_den = 1.0;
        double surrogate = 0.0;
        int iterations = 0;
    };

    struct RankOneFactor
    {
        CVec vector;
        double residual = 0.0; // ||X - lambda_1 q_1 q_1^H||_F / ||X||_F
    };

    /// sqrt(lambda_1) q_1 with the first significant entry real nonnegative.
    RankOneFactor extract_rank_one(const CMat &X);

    /// Draws xi = V Lambda^{1/2} r with r ~ CN(0, I) from the column space of the PSD matrix X.
    std::vector<CVec> gaussian_candidates(const CMat &X, int count, std::uint64_t seed);

    /// Sensing model of one scenario: FIM map plus the diagonal scaling used inside the SDPs.
    class SensingModel
    {
    public:
        explicit SensingModel(const SystemConfig &config);

        const FisherComponents &components() const { return comps_; }
        const FimAffineMap &map() const { return map_; }
        /// d_i = sqrt(F_ii) at the isotropic full-power covariance.
        const RVec &scale() const { return scale_; }
        /// tr(F(R)^{-1}), NaN when the FIM is singular.
        double crb(const CMat &R) const;

    private:
        FisherComponents comps_;
        FimAffineMap map_;
        RVec scale_;
    };

    /// Smallest tr(F^{-1}) reachable with total transmit power `power` and no other constraint.
    double minimum_crb(const SystemConfig &config, double power);

    /// The conic program behind minimum_crb, with the covariance normalized by `power`.
    ConicProblem minimum_crb_problem(const SensingModel &sensing, int M, double power);

    /// The unpenalized transmit relaxation at a fixed reflection vector (covariances normalized by P_a).
    ConicProblem transmit_problem(const CVec &phi, const ChannelSet &channels, const SystemConfig &config,
                                  const SensingModel &sensing);

    struct TransmitResult
    {
        SolveStatus status = SolveStatus::inaccurate;
        std::string message;
        CMat W_g, W_b, W_s; // lifted blocks, watts
        double lifted_snr = 0.0;
        double residual = 0.0;
        int penalty_iterations = 0;
        bool ok() const { return status == SolveStatus::optimal; }
    };

    /// (P3.1) / (P5.1): penalized transmit SDP for a fixed reflection vector. `anchor` supplies
    /// the linearization points of the first penalty iteration.
    TransmitResult solve_transmit(const CVec &phi, const ChannelSet &channels, const SystemConfig &config,
                                  const SensingModel &sensing, const BeamformerSolution &anchor,
                                  PenaltyState &penalty);

    struct ReflectResult
    {
        SolveStatus status = SolveStatus::inaccurate;
        std::string message;
        CMat U;
        CVec phi;
        double lifted_snr = 0.0;
        double residual = 0.0;
        int penalty_iterations = 0;
        int dinkelbach_iterations = 0;
        bool ok() const { return status == SolveStatus::optimal; }
    };

    /// (P4.1) / (P6.1): penalized Dinkelbach reflection SDP for fixed beamformers.
    ReflectResult solve_reflect(const BeamformerSolution &current, const ChannelSet &channels,
                                const SystemConfig &config, PenaltyState &penalty, DinkelbachState &dinkelbach);

    /**
     * Re-optimizes beamformer powers (and the full sensing covariance in w-DSS) for fixed
     * directions and reflection vector. Used to project extracted vectors back onto the
     * feasible set; returns nothing when that set is empty.
     */
    std::optional<BeamformerSolution> polish_transmit(const CVec &phi, const CVec &dir_g, const CVec &dir_b,
                                                      const ChannelSet &channels, const SystemConfig &config,
                                                      const SensingModel &sensing);

    /// True when the starting reflection keeps Bob's composite channel at least as strong as Grace's,
    /// the precondition checked by initialize before anything else.
    bool sic_admissible(const SystemConfig &config, const ChannelSet &channels);

    /// Feasible starting point (W0, Phi0); throws std::runtime_error when none can be found.
    BeamformerSolution initialize(const SystemConfig &config, const ChannelSet &channels,
                                  const SensingModel &sensing);

    /**
     * Alternating optimization of transmit and reflection beamforming for `config.scheme` and
     * `config.ris_mode`. Throws std::runtime_error when the realization violates the SIC order.
     */
    BeamformerSolution alternating_optimize(const SystemConfig &config, const ChannelSet &channels);
} // namespace arisac
