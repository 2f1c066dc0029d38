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


#include "hsd.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace arisac::detail
{
    namespace
    {
        constexpr double sqrt2 = 1.4142135623730950488;

        struct Cone
        {
            std::vector<int> sizes;
            std::vector<int> offsets;
            int total = 0;
            int degree = 0;

            explicit Cone(const std::vector<int> &s) : sizes(s)
            {
                for (int n : sizes)
                {
                    offsets.push_back(total);
                    total += svec_size(n);
                    degree += n;
                }
            }
            int count() const { return static_cast<int>(sizes.size()); }
            auto seg(RVec &v, int k) const { return v.segment(offsets[k], svec_size(sizes[k])); }
            auto seg(const RVec &v, int k) const { return v.segment(offsets[k], svec_size(sizes[k])); }
            RMat mat(const RVec &v, int k) const { return smat(seg(v, k), sizes[k]); }
        };

        struct Scaling
        {
            RMat R;    // NT scaling: R^{-1} S R^{-T} = R^T Z R = diag(lambda)
            RMat Rinv;
            RVec lambda;
        };

        /// Lower factor L with X = L L^T; falls back to an eigenvalue square root.
        RMat psd_factor(const RMat &X)
        {
            Eigen::LLT<RMat> llt(X);
            if (llt.info() == Eigen::Success)
                return llt.matrixL();
            Eigen::SelfAdjointEigenSolver<RMat> es(X);
            const double floor = std::max(1e-300, 1e-16 * es.eigenvalues().cwiseAbs().maxCoeff());
            RVec e = es.eigenvalues().cwiseMax(floor).cwiseSqrt();
            return es.eigenvectors() * e.asDiagonal();
        }

        Scaling nt_scaling(const RMat &S, const RMat &Z)
        {
            const RMat Ls = psd_factor(S);
            const RMat Lz = psd_factor(Z);
            Eigen::JacobiSVD<RMat> svd(Lz.transpose() * Ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
            Scaling sc;
            sc.lambda = svd.singularValues().cwiseMax(std::numeric_limits<double>::min());
            const RVec dm = sc.lambda.cwiseSqrt().cwiseInverse();
            sc.R = Ls * svd.matrixV() * dm.asDiagonal();
            // R^{-1} = D^{1/2} V^T Ls^{-1}; Ls may not be triangular after the eigen fallback
            sc.Rinv = sc.R.inverse();
            return sc;
        }

        /// Largest alpha with lambda + alpha * D >= 0 (infinity if unbounded).
        double max_step(const RVec &lambda, const RMat &D)
        {
            const Eigen::Index n = lambda.size();
            if (n == 1)
            {
                const double r = D(0, 0) / lambda(0);
                return r < 0.0 ? -1.0 / r : std::numeric_limits<double>::infinity();
            }
            const RVec isq = lambda.cwiseSqrt().cwiseInverse();
            const RMat M = isq.asDiagonal() * D * isq.asDiagonal();
            Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
            const double m = es.eigenvalues()(0);
            return m < 0.0 ? -1.0 / m : std::numeric_limits<double>::infinity();
        }

        /// Y with lambda o Y = B for diagonal lambda (Jordan product).
        RMat jordan_solve(const RVec &lambda, const RMat &B)
        {
            RMat Y(B.rows(), B.cols());
            for (Eigen::Index j = 0; j < B.cols(); ++j)
                for (Eigen::Index i = 0; i < B.rows(); ++i)
                    Y(i, j) = 2.0 * B(i, j) / (lambda(i) + lambda(j));
            return Y;
        }

        RMat jordan(const RMat &A, const RMat &B) { return 0.5 * (A * B + B * A); }

        struct Direction
        {
            RVec dx;
            std::vector<RMat> ds_hat;
            std::vector<RMat> dz_hat;
            double dtau = 0.0;
            double dkappa = 0.0;
        };
    } // namespace

    int svec_size(int n) { return n * (n + 1) / 2; }

    RMat smat(const Eigen::Ref<const RVec> &v, int n)
    {
        RMat X(n, n);
        int k = 0;
        for (int j = 0; j < n; ++j)
        {
            X(j, j) = v(k++);
            for (int i = j + 1; i < n; ++i)
            {
                const double e = v(k++) / sqrt2;
                X(i, j) = e;
                X(j, i) = e;
            }
        }
        return X;
    }

    void svec_into(const RMat &X, Eigen::Ref<RVec> out)
    {
        const int n = static_cast<int>(X.rows());
        int k = 0;
        for (int j = 0; j < n; ++j)
        {
            out(k++) = X(j, j);
            for (int i = j + 1; i < n; ++i)
                out(k++) = sqrt2 * 0.5 * (X(i, j) + X(j, i));
        }
    }

    RVec svec(const RMat &X)
    {
        RVec v(svec_size(static_cast<int>(X.rows())));
        svec_into(X, v);
        return v;
    }

    HsdResult hsd_solve(const ConeProgram &cp, const HsdSettings &st)
    {
        const Cone cone(cp.sizes);
        const Eigen::Index m = cp.G.rows();
        const Eigen::Index n = cp.G.cols();
        const RMat &G = cp.G;
        const RVec &h = cp.h;
        const RVec &c = cp.c;

        // columns touching each cone block, so scaled columns skip untouched blocks
        std::vector<std::vector<int>> touched(cone.count());
        for (int k = 0; k < cone.count(); ++k)
            for (Eigen::Index j = 0; j < n; ++j)
                if (cone.seg(RVec(G.col(j)), k).cwiseAbs().maxCoeff() > 0.0)
                    touched[k].push_back(static_cast<int>(j));

        RVec x = RVec::Zero(n);
        RVec s(m), z(m);
        for (int k = 0; k < cone.count(); ++k)
        {
            svec_into(RMat::Identity(cp.sizes[k], cp.sizes[k]), cone.seg(s, k));
            svec_into(RMat::Identity(cp.sizes[k], cp.sizes[k]), cone.seg(z, k));
        }
        double tau = 1.0;
        double kappa = 1.0;

        const RVec wp = st.primal_weight.size() == m ? st.primal_weight : RVec::Ones(m);
        const RVec wd = st.dual_weight.size() == n ? st.dual_weight : RVec::Ones(n);
        const double resx0 = std::max(1.0, wd.cwiseProduct(c).norm());
        const double resz0 = std::max(1.0, wp.cwiseProduct(h).norm());
        const double tol = st.tolerance;

        HsdResult out;
        out.status = SolveStatus::inaccurate;
        std::vector<Scaling> sc(cone.count());
        RMat Ghat(m, n);
        RVec hhat(m), rzhat(m);

        for (int it = 0;; ++it)
        {
            const RVec rx = G.transpose() * z + c * tau;
            const RVec rz = G * x + s - h * tau;
            const double rt = kappa + c.dot(x) + h.dot(z);
            const double gap = s.dot(z);
            const double mu = (gap + tau * kappa) / (cone.degree + 1);

            const double pcost = st.objective_scale * c.dot(x) / tau;
            const double dcost = -st.objective_scale * h.dot(z) / tau;
            const double pres = wp.cwiseProduct(rz).norm() / tau / resz0;
            const double dres = wd.cwiseProduct(rx).norm() / tau / resx0;
            const double abs_gap = st.objective_scale * gap / (tau * tau);
            const double rel_gap = abs_gap / std::max(1.0, std::min(std::abs(pcost), std::abs(dcost)));

            out.residuals = {pres, dres, std::min(abs_gap, rel_gap)};
            out.iterations = it;
            if (pres <= tol && dres <= tol && (abs_gap <= tol || rel_gap <= tol))
            {
                out.status = SolveStatus::optimal;
                break;
            }
            const double hz = h.dot(z);
            const double cx = c.dot(x);
            if (hz < 0.0)
            {
                const double pinf = (G.transpose() * z).norm() / resx0 / (-hz);
                if (pinf <= tol)
                {
                    out.status = SolveStatus::infeasible;
                    break;
                }
            }
            if (cx < 0.0)
            {
                const double dinf = (G * x + s).norm() / resz0 / (-cx);
                if (dinf <= tol)
                {
                    out.status = SolveStatus::unbounded;
                    break;
                }
            }
            if (it >= st.max_iterations)
                break;

            // scaling and scaled data
            for (int k = 0; k < cone.count(); ++k)
                sc[k] = nt_scaling(cone.mat(s, k), cone.mat(z, k));
            Ghat.setZero();
            for (int k = 0; k < cone.count(); ++k)
            {
                const int nk = cp.sizes[k];
                const RMat &Ri = sc[k].Rinv;
                for (int j : touched[k])
                {
                    const RMat Gj = smat(cone.seg(RVec(G.col(j)), k), nk);
                    svec_into(Ri * Gj * Ri.transpose(), Ghat.col(j).segment(cone.offsets[k], svec_size(nk)));
                }
                svec_into(Ri * cone.mat(h, k) * Ri.transpose(), cone.seg(hhat, k));
                svec_into(Ri * cone.mat(rz, k) * Ri.transpose(), cone.seg(rzhat, k));
            }
            RMat Hm = Ghat.transpose() * Ghat;
            Eigen::LLT<RMat> llt(Hm);
            double reg = 0.0;
            while (llt.info() != Eigen::Success)
            {
                reg = reg == 0.0 ? 1e-14 * std::max(1.0, Hm.diagonal().maxCoeff()) : reg * 100.0;
                llt.compute(Hm + reg * RMat::Identity(n, n));
                if (reg > 1e-2 * std::max(1.0, Hm.diagonal().maxCoeff()))
                    break;
            }
            if (llt.info() != Eigen::Success)
                break;
            auto hsolve = [&](const RVec &rhs)
            {
                RVec v = llt.solve(rhs);
                v += llt.solve(rhs - Hm * v); // one refinement step
                return v;
            };

            const RVec q = hsolve(Ghat.transpose() * hhat - c);
            const RVec zq = Ghat * q - hhat;
            const double denom = c.dot(q) + hhat.dot(zq) - kappa / tau;

            auto direction = [&](double eta, const std::vector<RMat> &Y, double rtk)
            {
                RVec y(m);
                for (int k = 0; k < cone.count(); ++k)
                    svec_into(Y[k], cone.seg(y, k));
                const RVec base = eta * rzhat + y;
                const RVec p = hsolve(-eta * rx - Ghat.transpose() * base);
                const RVec zp = Ghat * p + base;
                Direction d;
                d.dtau = (-eta * rt - rtk / tau - c.dot(p) - hhat.dot(zp)) / denom;
                d.dx = p + q * d.dtau;
                const RVec zh = zp + zq * d.dtau;
                d.dkappa = (rtk - kappa * d.dtau) / tau;
                d.ds_hat.resize(cone.count());
                d.dz_hat.resize(cone.count());
                for (int k = 0; k < cone.count(); ++k)
                {
                    d.dz_hat[k] = smat(cone.seg(zh, k), cp.sizes[k]);
                    d.ds_hat[k] = Y[k] - d.dz_hat[k];
                }
                return d;
            };
            auto step_limit = [&](const Direction &d)
            {
                double a = std::numeric_limits<double>::infinity();
                for (int k = 0; k < cone.count(); ++k)
                {
                    a = std::min(a, max_step(sc[k].lambda, d.ds_hat[k]));
                    a = std::min(a, max_step(sc[k].lambda, d.dz_hat[k]));
                }
                if (d.dtau < 0.0)
                    a = std::min(a, -tau / d.dtau);
                if (d.dkappa < 0.0)
                    a = std::min(a, -kappa / d.dkappa);
                return a;
            };

            // predictor
            std::vector<RMat> Y(cone.count());
            for (int k = 0; k < cone.count(); ++k)
                Y[k] = -RMat(sc[k].lambda.asDiagonal());
            const Direction aff = direction(1.0, Y, -tau * kappa);
            const double a_aff = std::min(1.0, step_limit(aff));
            const double sigma = std::pow(std::clamp(1.0 - a_aff, 0.0, 1.0), 3);

            // corrector
            for (int k = 0; k < cone.count(); ++k)
            {
                const RVec &l = sc[k].lambda;
                RMat B = -jordan(aff.ds_hat[k], aff.dz_hat[k]);
                B.diagonal() += (sigma * mu) * RVec::Ones(l.size()) - l.cwiseProduct(l);
                Y[k] = jordan_solve(l, B);
            }
            const Direction d =
                direction(1.0 - sigma, Y, sigma * mu - tau * kappa - aff.dtau * aff.dkappa);
            const double alpha = std::min(1.0, 0.99 * step_limit(d));
            if (!(alpha > 1e-12))
                break;

            x += alpha * d.dx;
            for (int k = 0; k < cone.count(); ++k)
            {
                const Scaling &g = sc[k];
                const RMat dS = g.R * d.ds_hat[k] * g.R.transpose();
                const RMat dZ = g.Rinv.transpose() * d.dz_hat[k] * g.Rinv;
                cone.seg(s, k) += alpha * svec(dS);
                cone.seg(z, k) += alpha * svec(dZ);
            }
            tau += alpha * d.dtau;
            kappa += alpha * d.dkappa;
        }

        if (out.status == SolveStatus::infeasible)
        {
            out.x = RVec::Zero(n);
            out.s = RVec::Zero(m);
            out.z = z / -h.dot(z);
        }
        else if (out.status == SolveStatus::unbounded)
        {
            out.x = x / -c.dot(x);
            out.s = s / -c.dot(x);
            out.z = RVec::Zero(m);
        }
        else
        {
            out.x = x / tau;
            out.s = s / tau;
            out.z = z / tau;
        }
        return out;
    }
} // namespace arisac::detail
