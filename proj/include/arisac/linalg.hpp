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

namespace arisac
{
    /**
     * Real coordinates of an n x n Hermitian matrix: the n diagonal entries first, then for every
     * pair i < j in row-major order the real part followed by the imaginary part of H(i, j).
     */
    inline int hermitian_dim(int n) { return n * n; }

    RVec hermitian_to_coords(const CMat &H);
    CMat hermitian_from_coords(const Eigen::Ref<const RVec> &x, int n);
    /// Basis matrix E_k, so that H = sum_k x_k E_k.
    CMat hermitian_basis(int n, int k);
    /// Coefficients c with Re tr(C H) = c . coords(H) for every Hermitian H.
    RVec hermitian_functional(const CMat &C);

    /// [[Re H, -Im H], [Im H, Re H]]
    RMat real_embedding(const CMat &H);
    /// Inverse of `real_embedding` (averages the redundant copies).
    CMat from_real_embedding(const RMat &E);

    RMat symmetrize(const RMat &A);
    CMat hermitianize(const CMat &A);

    /// Largest eigenpair of a Hermitian matrix.
    struct Eigenpair
    {
        double value = 0.0;
        CVec vector;
    };
    Eigenpair top_eigenpair(const CMat &H);

    /// Sum of |eigenvalues| and largest |eigenvalue| of a Hermitian matrix.
    double nuclear_norm(const CMat &H);
    double spectral_norm(const CMat &H);
    /// (||H||_* - ||H||_2) / ||H||_2, zero for the zero matrix.
    double rank_one_residual(const CMat &H);

    /// Rotates v so its first entry with magnitude above `tiny` is real and nonnegative.
    CVec normalize_phase(const CVec &v, double tiny = 0.0);
} // namespace arisac
