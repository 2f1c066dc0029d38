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


#include "arisac/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace arisac
{
    namespace
    {
        void require_square(const auto &A, const char *what)
        {
            if (A.rows() != A.cols())
                throw std::invalid_argument(std::string(what) + ": matrix must be square");
        }
    } // namespace

    RVec hermitian_to_coords(const CMat &H)
    {
        require_square(H, "hermitian_to_coords");
        const int n = static_cast<int>(H.rows());
        RVec x(hermitian_dim(n));
        for (int i = 0; i < n; ++i)
            x(i) = H(i, i).real();
        int k = n;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
            {
                // average with the mirrored entry so slightly non-Hermitian input is projected
                const cplx v = 0.5 * (H(i, j) + std::conj(H(j, i)));
                x(k++) = v.real();
                x(k++) = v.imag();
            }
        return x;
    }

    CMat hermitian_from_coords(const Eigen::Ref<const RVec> &x, int n)
    {
        if (x.size() != hermitian_dim(n))
            throw std::invalid_argument("hermitian_from_coords: coordinate count does not match n*n");
        CMat H(n, n);
        for (int i = 0; i < n; ++i)
            H(i, i) = x(i);
        int k = n;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
            {
                const cplx v(x(k), x(k + 1));
                k += 2;
                H(i, j) = v;
                H(j, i) = std::conj(v);
            }
        return H;
    }

    CMat hermitian_basis(int n, int k)
    {
        if (k < 0 || k >= hermitian_dim(n))
            throw std::out_of_range("hermitian_basis: index out of range");
        RVec x = RVec::Zero(hermitian_dim(n));
        x(k) = 1.0;
        return hermitian_from_coords(x, n);
    }

    RVec hermitian_functional(const CMat &C)
    {
        require_square(C, "hermitian_functional");
        const int n = static_cast<int>(C.rows());
        RVec c(hermitian_dim(n));
        for (int i = 0; i < n; ++i)
            c(i) = C(i, i).real();
        int k = n;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
            {
                c(k++) = (C(j, i) + C(i, j)).real();
                c(k++) = C(i, j).imag() - C(j, i).imag();
            }
        return c;
    }

    RMat real_embedding(const CMat &H)
    {
        require_square(H, "real_embedding");
        const Eigen::Index n = H.rows();
        RMat E(2 * n, 2 * n);
        E.topLeftCorner(n, n) = H.real();
        E.topRightCorner(n, n) = -H.imag();
        E.bottomLeftCorner(n, n) = H.imag();
        E.bottomRightCorner(n, n) = H.real();
        return E;
    }

    CMat from_real_embedding(const RMat &E)
    {
        if (E.rows() != E.cols() || E.rows() % 2 != 0)
            throw std::invalid_argument("from_real_embedding: expected a 2n x 2n matrix");
        const Eigen::Index n = E.rows() / 2;
        const RMat re = 0.5 * (E.topLeftCorner(n, n) + E.bottomRightCorner(n, n));
        const RMat im = 0.5 * (E.bottomLeftCorner(n, n) - E.topRightCorner(n, n));
        CMat H(n, n);
        H.real() = re;
        H.imag() = im;
        return hermitianize(H);
    }

    RMat symmetrize(const RMat &A) { return 0.5 * (A + A.transpose()); }

    CMat hermitianize(const CMat &A) { return 0.5 * (A + A.adjoint()); }

    Eigenpair top_eigenpair(const CMat &H)
    {
        require_square(H, "top_eigenpair");
        Eigen::SelfAdjointEigenSolver<CMat> es(hermitianize(H));
        const Eigen::Index n = H.rows();
        return {es.eigenvalues()(n - 1), es.eigenvectors().col(n - 1)};
    }

    double nuclear_norm(const CMat &H)
    {
        Eigen::SelfAdjointEigenSolver<CMat> es(hermitianize(H), Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().sum();
    }

    double spectral_norm(const CMat &H)
    {
        Eigen::SelfAdjointEigenSolver<CMat> es(hermitianize(H), Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }

    double rank_one_residual(const CMat &H)
    {
        Eigen::SelfAdjointEigenSolver<CMat> es(hermitianize(H), Eigen::EigenvaluesOnly);
        const RVec ev = es.eigenvalues().cwiseAbs();
        const double top = ev.maxCoeff();
        if (top <= 0.0)
            return 0.0;
        return (ev.sum() - top) / top;
    }

    CVec normalize_phase(const CVec &v, double tiny)
    {
        for (Eigen::Index i = 0; i < v.size(); ++i)
        {
            if (std::abs(v(i)) > tiny)
                return v * std::polar(1.0, -std::arg(v(i)));
        }
        return v;
    }
} // namespace arisac
