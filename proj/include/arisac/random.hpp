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

#include <cstdint>
#include <random>

namespace arisac
{
    /// Seeded generator for circularly-symmetric complex Gaussian draws.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        /// CN(0, variance)
        cplx complex_normal(double variance = 1.0)
        {
            const double s = std::sqrt(0.5 * variance);
            return {s * normal_(engine_), s * normal_(engine_)};
        }

        CVec complex_normal_vector(int n, double variance = 1.0)
        {
            CVec v(n);
            for (int i = 0; i < n; ++i)
                v(i) = complex_normal(variance);
            return v;
        }

        CMat complex_normal_matrix(int rows, int cols, double variance = 1.0)
        {
            CMat m(rows, cols);
            for (int j = 0; j < cols; ++j)
                for (int i = 0; i < rows; ++i)
                    m(i, j) = complex_normal(variance);
            return m;
        }

        double uniform() { return uniform_(engine_); }
        double normal() { return normal_(engine_); }

        std::mt19937_64 &engine() { return engine_; }

    private:
        std::mt19937_64 engine_;
        std::normal_distribution<double> normal_{0.0, 1.0};
        std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    };

    /// Derives an independent stream seed from a base seed and a stream index (splitmix64).
    inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream)
    {
        std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
} // namespace arisac
