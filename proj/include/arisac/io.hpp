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
#include "arisac/scenario.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace arisac
{
    /**
     * Reads a configuration object (schema in docs/config.md). Powers are given in dBm, angles in
     * degrees and reflection caps as eta2_dB. Keys left out keep the value of the preset named by
     * "preset" ("desk" or "full"; desk when absent). Unknown keys are rejected.
     */
    SystemConfig config_from_json(const nlohmann::json &j);
    /// Inverse of config_from_json; every field is written explicitly.
    nlohmann::json config_to_json(const SystemConfig &config);
    SystemConfig load_config(const std::filesystem::path &path);

    nlohmann::json complex_to_json(const CVec &v);
    nlohmann::json complex_to_json(const CMat &m);
    CVec complex_vector_from_json(const nlohmann::json &j);
    CMat complex_matrix_from_json(const nlohmann::json &j);

    /// A solution together with everything needed to rebuild its channels.
    struct SolutionFile
    {
        SystemConfig config;
        BeamformerSolution solution;
    };

    nlohmann::json solution_to_json(const BeamformerSolution &solution, const SystemConfig &config);
    SolutionFile solution_from_json(const nlohmann::json &j);
    void save_solution(const std::filesystem::path &path, const BeamformerSolution &solution,
                       const SystemConfig &config);
    SolutionFile load_solution(const std::filesystem::path &path);
} // namespace arisac
