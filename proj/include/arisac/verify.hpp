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

#include <string>
#include <vector>

namespace arisac
{
    struct ConstraintCheck
    {
        std::string name;
        double lhs = 0.0;
        double rhs = 0.0;
        double residual = 0.0; // scale-relative violation, zero when satisfied
        bool checked = true;   // false when the constraint does not apply to this mode
    };

    struct AuditReport
    {
        std::vector<ConstraintCheck> checks;
        double dep = 1.0;       // closed-form minimum detection error probability
        double dep_bound = 1.0; // 1 - sqrt(D/2)
        double crb = 0.0;
        double max_residual() const;
        bool feasible(double tolerance = 1e-6) const { return max_residual() <= tolerance; }
        const ConstraintCheck &at(const std::string &name) const;
    };

    /**
     * Re-evaluates every constraint of the covert-rate problem from the raw beamformers and
     * reflection vector (never from lifted matrices).
     */
    AuditReport verify_solution(const BeamformerSolution &sol, const ChannelSet &channels,
                                const SystemConfig &config);
} // namespace arisac
