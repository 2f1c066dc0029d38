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

#include <span>
#include <vector>

namespace arisac
{
    /// Target-side matrices from which the FIM is a linear function of the transmit covariance.
    struct FisherComponents
    {
        CMat A;     // M x Q, columns h_aq
        CMat A_dot; // M x Q, d h_aq / d theta_q
        CMat V;     // Q x Q, diag(alpha)
        CMat Z;     // M x M, sigma_a^2 I
        CMat Sigma1;
        CMat Sigma2;
        CMat Sigma3;
        int L = 0;
        double T = 0.0;

        int M() const { return static_cast<int>(A.rows()); }
        int Q() const { return static_cast<int>(A.cols()); }
        /// FIM dimension, 4Q. Parameter order is [theta_1..Q, Re alpha_1..Q, Im alpha_1..Q, F_D1..Q].
        int dim() const { return 4 * Q(); }
    };

    FisherComponents build_fisher_components(std::span<const Target> targets, const SystemConfig &config);

    /// Real symmetric 4Q x 4Q FIM for the Hermitian transmit covariance R_x.
    RMat fisher_information(const CMat &R_x, const FisherComponents &comps);

    /// F(E_k) for every Hermitian coordinate k of the M x M covariance space (see linalg.hpp).
    class FimAffineMap
    {
    public:
        explicit FimAffineMap(const FisherComponents &comps);

        int covariance_dim() const { return M_; }
        int dim() const { return dim_; }
        const std::vector<RMat> &images() const { return images_; }
        RMat evaluate(const CMat &R_x) const;
        RMat evaluate_coords(const Eigen::Ref<const RVec> &coords) const;

    private:
        int M_ = 0;
        int dim_ = 0;
        std::vector<RMat> images_;
    };

    FimAffineMap fim_affine_map(const FisherComponents &comps);

    struct CrbReport
    {
        double trace = 0.0;
        double condition = 0.0; // ratio of extreme eigenvalues of F
    };

    /// tr(F^{-1}); throws std::domain_error("CRB undefined ...") for singular or indefinite F.
    double crb_trace(const RMat &F);
    CrbReport crb_report(const RMat &F);

    /// a(theta)^H R_x a(theta) over the grid; with `normalize`, returned in dB relative to the peak.
    std::vector<double> beampattern(const CMat &R_x, std::span<const double> angles, bool normalize = false);
} // namespace arisac
