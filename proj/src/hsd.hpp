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

// Homogeneous self-dual interior-point method for
//   minimize c'x  subject to  G x + s = h,  s in K,
// where K is a product of real symmetric PSD cones (order-1 blocks are LP rows) and vectors
// live in svec coordinates (lower triangle, column-major, off-diagonals scaled by sqrt 2).

#include "arisac/conic.hpp"

#include <vector>

namespace arisac::detail
{
    struct ConeProgram
    {
        RMat G;
        RVec h;
        RVec c;
        std::vector<int> sizes;
    };

    struct HsdSettings
    {
        double tolerance = 1e-8;
        int max_iterations = 80;
        // Map scaled residuals back to the caller's units: rz entries are multiplied by
        // primal_weight, rx entries by dual_weight and objective values by objective_scale.
        RVec primal_weight;
        RVec dual_weight;
        double objective_scale = 1.0;
    };

    struct HsdResult
    {
        SolveStatus status = SolveStatus::inaccurate;
        RVec x;
        RVec s;
        RVec z;
        KktResiduals residuals;
        int iterations = 0;
    };

    HsdResult hsd_solve(const ConeProgram &cp, const HsdSettings &settings);

    int svec_size(int n);
    RMat smat(const Eigen::Ref<const RVec> &v, int n);
    void svec_into(const RMat &X, Eigen::Ref<RVec> out);
    RVec svec(const RMat &X);
} // namespace arisac::detail
