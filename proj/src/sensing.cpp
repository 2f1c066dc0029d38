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


#include "arisac/sensing.hpp"
#include "arisac/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace arisac
{
    FisherComponents build_fisher_components(std::span<const Target> targets, const SystemConfig &config)
    {
        const int Q = static_cast<int>(targets.size());
        if (Q < 1)
            throw std::invalid_argument("build_fisher_components: at least one target is required");
        if (config.L < 1)
            throw std::invalid_argument("build_fisher_components: L must be positive");
        const int M = config.M;

        FisherComponents c;
        c.L = config.L;
        c.T = config.T;
        c.A.resize(M, Q);
        c.A_dot.resize(M, Q);
        c.V = CMat::Zero(Q, Q);
        for (int q = 0; q < Q; ++q)
        {
            const auto &t = targets[q];
            const double amp = std::sqrt(path_loss(t.distance, config.chi.bs_target, config.L0));
            c.A.col(q) = amp * steering_vector(t.theta, M);
            c.A_dot.col(q) = amp * steering_vector_derivative(t.theta, M);
            c.V(q, q) = t.alpha;
        }
        c.Z = config.sigma_a2 * CMat::Identity(M, M);

        c.Sigma1 = CMat::Zero(Q, Q);
        c.Sigma2 = CMat::Zero(Q, Q);
        c.Sigma3 = CMat::Zero(Q, Q);
        for (int i = 0; i < Q; ++i)
            for (int j = 0; j < Q; ++j)
            {
                const double df = targets[j].doppler - targets[i].doppler;
                for (int l = 1; l <= config.L; ++l)
                {
                    const double w = 2.0 * pi * l * config.T;
                    const cplx e = std::polar(1.0, 2.0 * pi * df * l * config.T);
                    c.Sigma1(i, j) += e;
                    c.Sigma2(i, j) += w * e;
                    c.Sigma3(i, j) += w * w * e;
                }
            }
        return c;
    }

    RMat fisher_information(const CMat &R_x, const FisherComponents &c)
    {
        const int M = c.M();
        const int Q = c.Q();
        if (R_x.rows() != M || R_x.cols() != M)
            throw std::invalid_argument("fisher_information: R_x must be M x M");

        const CMat Zi = c.Z.inverse();
        const CMat Rc = R_x.conjugate();
        const CMat &A = c.A;
        const CMat &Ad = c.A_dot;
        const CMat Vc = c.V.conjugate();
        const CMat &V = c.V;

        const CMat AdZAd = Ad.adjoint() * Zi * Ad;
        const CMat AdZA = Ad.adjoint() * Zi * A;
        const CMat AZAd = A.adjoint() * Zi * Ad;
        const CMat AZA = A.adjoint() * Zi * A;

        const CMat ARA = A.adjoint() * Rc * A;
        const CMat ARAd = A.adjoint() * Rc * Ad;
        const CMat AdRA = Ad.adjoint() * Rc * A;
        const CMat AdRAd = Ad.adjoint() * Rc * Ad;

        const CMat F11 = (AdZAd.cwiseProduct(Vc * ARA * V) + AdZA.cwiseProduct(Vc * ARAd * V) +
                          AZAd.cwiseProduct(Vc * AdRA * V) + AZA.cwiseProduct(Vc * AdRAd * V))
                             .cwiseProduct(c.Sigma1);
        // No trailing V: the Re(alpha) derivative carries no reflection factor.
        const CMat F12 = (AdZA.cwiseProduct(Vc * ARA) + AZA.cwiseProduct(Vc * AdRA)).cwiseProduct(c.Sigma1);
        const CMat F14 = (AdZA.cwiseProduct(Vc * ARA * V) + AZA.cwiseProduct(Vc * AdRA * V)).cwiseProduct(c.Sigma2);
        const CMat F22 = AZA.cwiseProduct(ARA).cwiseProduct(c.Sigma1);
        const CMat F24 = AZA.cwiseProduct(ARA * V).cwiseProduct(c.Sigma2);
        const CMat F44 = AZA.cwiseProduct(Vc * ARA * V).cwiseProduct(c.Sigma3);

        RMat F(4 * Q, 4 * Q);
        auto blk = [&](int r, int col) { return F.block(r * Q, col * Q, Q, Q); };
        blk(0, 0) = F11.real();
        blk(0, 1) = F12.real();
        blk(0, 2) = -F12.imag();
        blk(0, 3) = -F14.imag();
        blk(1, 0) = F12.real().transpose();
        blk(1, 1) = F22.real();
        blk(1, 2) = -F22.imag();
        blk(1, 3) = -F24.imag();
        blk(2, 0) = -F12.imag().transpose();
        blk(2, 1) = -F22.imag().transpose();
        blk(2, 2) = F22.real();
        blk(2, 3) = F24.real();
        blk(3, 0) = -F14.imag().transpose();
        blk(3, 1) = -F24.imag().transpose();
        blk(3, 2) = F24.real().transpose();
        blk(3, 3) = F44.real();
        return symmetrize(2.0 * F);
    }

    FimAffineMap::FimAffineMap(const FisherComponents &comps) : M_(comps.M()), dim_(comps.dim())
    {
        const int n = hermitian_dim(M_);
        images_.reserve(n);
        for (int k = 0; k < n; ++k)
            images_.push_back(fisher_information(hermitian_basis(M_, k), comps));
    }

    RMat FimAffineMap::evaluate_coords(const Eigen::Ref<const RVec> &coords) const
    {
        if (coords.size() != static_cast<Eigen::Index>(images_.size()))
            throw std::invalid_argument("FimAffineMap: coordinate count mismatch");
        RMat F = RMat::Zero(dim_, dim_);
        for (std::size_t k = 0; k < images_.size(); ++k)
            F += coords(static_cast<Eigen::Index>(k)) * images_[k];
        return F;
    }

    RMat FimAffineMap::evaluate(const CMat &R_x) const
    {
        if (R_x.rows() != M_ || R_x.cols() != M_)
            throw std::invalid_argument("FimAffineMap: R_x must be M x M");
        return evaluate_coords(hermitian_to_coords(R_x));
    }

    FimAffineMap fim_affine_map(const FisherComponents &comps) { return FimAffineMap(comps); }

    CrbReport crb_report(const RMat &F)
    {
        if (F.rows() != F.cols() || F.rows() == 0)
            throw std::invalid_argument("crb_trace: F must be square and non-empty");
        const RMat S = symmetrize(F);
        Eigen::SelfAdjointEigenSolver<RMat> es(S, Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        const double eps = std::numeric_limits<double>::epsilon();
        if (!(hi > 0.0) || lo <= hi * eps * static_cast<double>(F.rows()))
            throw std::domain_error("CRB undefined: FIM is singular or indefinite (min eigenvalue " +
                                    std::to_string(lo) + ", max " + std::to_string(hi) + ")");
        Eigen::LDLT<RMat> ldlt(S);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
            throw std::domain_error("CRB undefined: FIM factorization failed");
        const RMat inv = ldlt.solve(RMat::Identity(F.rows(), F.cols()));
        return {inv.trace(), hi / lo};
    }

    double crb_trace(const RMat &F) { return crb_report(F).trace; }

    std::vector<double> beampattern(const CMat &R_x, std::span<const double> angles, bool normalize)
    {
        if (R_x.rows() != R_x.cols())
            throw std::invalid_argument("beampattern: R_x must be square");
        const int M = static_cast<int>(R_x.rows());
        std::vector<double> p;
        p.reserve(angles.size());
        for (double th : angles)
        {
            const CVec a = steering_vector(th, M);
            p.push_back(std::max(0.0, (a.adjoint() * R_x * a)(0, 0).real()));
        }
        if (normalize && !p.empty())
        {
            const double peak = *std::max_element(p.begin(), p.end());
            for (double &v : p)
                v = (peak > 0.0 && v > 0.0) ? 10.0 * std::log10(v / peak) : (peak > 0.0 ? -300.0 : 0.0);
        }
        return p;
    }
} // namespace arisac
