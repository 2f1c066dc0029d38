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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <string_view>

namespace arisac
{
    using cplx = std::complex<double>;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;
    using RVec = Eigen::VectorXd;
    using RMat = Eigen::MatrixXd;

    inline constexpr double pi = std::numbers::pi;
    inline constexpr double speed_of_light = 299792458.0;
    inline constexpr cplx imag_unit{0.0, 1.0};

    /// Superposition scheme: NOMA signal only, or NOMA plus a dedicated sensing signal.
    enum class Scheme
    {
        without_dss,
        with_dss
    };

    enum class RisMode
    {
        active,
        passive,
        none
    };

    /// Single-antenna communication nodes. Index order matches ChannelSet storage.
    enum class Node
    {
        grace = 0,
        bob = 1,
        willie = 2
    };

    std::string_view to_string(Scheme s);
    std::string_view to_string(RisMode m);
    std::string_view to_string(Node n);
    Scheme scheme_from_string(std::string_view s);
    RisMode ris_mode_from_string(std::string_view s);

    inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
} // namespace arisac
