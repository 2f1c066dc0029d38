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


#include "arisac/conic.hpp"
#include "arisac/linalg.hpp"
#include "hsd.hpp"

#include "json.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace arisac
{
    using detail::smat;
    using detail::svec;
    using detail::svec_into;
    using detail::svec_size;

    std::string_view to_string(SolveStatus s)
    {
        switch (s)
        {
        case SolveStatus::optimal:
            return "optimal";
        case SolveStatus::infeasible:
            return "infeasible";
        case SolveStatus::unbounded:
            return "unbounded";
        case SolveStatus::near_optimal:
            return "near-optimal";
        case SolveStatus::inaccurate:
            return "inaccurate";
        }
        return "unknown";
    }

    int symmetric_coords(int n) { return n * (n + 1) / 2; }

    RVec symmetric_to_coords(const RMat &X)
    {
        const int n = static_cast<int>(X.rows());
        RVec x(symmetric_coords(n));
        for (int i = 0; i < n; ++i)
            x(i) = X(i, i);
        int k = n;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                x(k++) = 0.5 * (X(i, j) + X(j, i));
        return x;
    }

    RMat symmetric_from_coords(const Eigen::Ref<const RVec> &x, int n)
    {
        if (x.size() != symmetric_coords(n))
            throw std::invalid_argument("symmetric_from_coords: coordinate count mismatch");
        RMat X(n, n);
        for (int i = 0; i < n; ++i)
            X(i, i) = x(i);
        int k = n;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
            {
                X(i, j) = x(k);
                X(j, i) = x(k);
                ++k;
            }
        return X;
    }

    int VariableBlock::coords() const
    {
        switch (kind)
        {
        case BlockKind::hermitian_psd:
            return hermitian_dim(dim);
        case BlockKind::symmetric_psd:
            return symmetric_coords(dim);
        case BlockKind::free:
            return dim;
        }
        return 0;
    }

    // ---- LinearExpr -----------------------------------------------------------------------------

    LinearExpr &LinearExpr::add_trace(BlockId b, const CMat &C) { return add_coeffs(b, hermitian_functional(C)); }

    LinearExpr &LinearExpr::add_trace(BlockId b, const RMat &C)
    {
        const int n = static_cast<int>(C.rows());
        RVec c(symmetric_coords(n));
        for (int i = 0; i < n; ++i)
            c(i) = C(i, i);
        int k = n;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                c(k++) = C(i, j) + C(j, i);
        return add_coeffs(b, c);
    }

    LinearExpr &LinearExpr::add_coeffs(BlockId b, const RVec &coeffs)
    {
        for (auto &t : terms_)
            if (t.block == b.index && t.coeffs.size() == coeffs.size())
            {
                t.coeffs += coeffs;
                return *this;
            }
        terms_.push_back({b.index, coeffs});
        return *this;
    }

    LinearExpr &LinearExpr::add_constant(double v)
    {
        constant_ += v;
        return *this;
    }

    LinearExpr &LinearExpr::scale(double s)
    {
        for (auto &t : terms_)
            t.coeffs *= s;
        constant_ *= s;
        return *this;
    }

    // ---- ConicProblem ---------------------------------------------------------------------------

    BlockId ConicProblem::add_block(std::string name, int dim, BlockKind kind)
    {
        if (dim < 1)
            throw std::invalid_argument("add_block: dimension must be positive");
        blocks_.push_back({std::move(name), dim, kind});
        return {static_cast<int>(blocks_.size()) - 1};
    }

    void ConicProblem::add_constraint(std::string name, LinearExpr expr, Sense sense, double rhs)
    {
        constraints_.push_back({std::move(name), std::move(expr), sense, rhs});
    }

    void ConicProblem::add_lmi(LmiConstraint lmi)
    {
        if (lmi.constant.size() == 0)
            lmi.constant = RMat::Zero(lmi.dim, lmi.dim);
        lmis_.push_back(std::move(lmi));
    }

    void ConicProblem::maximize(LinearExpr objective)
    {
        objective_ = std::move(objective);
        maximize_ = true;
    }

    void ConicProblem::minimize(LinearExpr objective)
    {
        objective_ = std::move(objective);
        maximize_ = false;
    }

    const VariableBlock &ConicProblem::block(BlockId b) const
    {
        if (b.index < 0 || b.index >= static_cast<int>(blocks_.size()))
            throw std::out_of_range("ConicProblem: unknown block");
        return blocks_[b.index];
    }

    std::vector<RMat> ConicProblem::placement_images(BlockId b, int dim, int offset, double scale) const
    {
        const auto &blk = block(b);
        if (blk.kind != BlockKind::symmetric_psd)
            throw std::invalid_argument("placement_images: only symmetric blocks can be placed");
        if (offset < 0 || offset + blk.dim > dim)
            throw std::invalid_argument("placement_images: block does not fit");
        std::vector<RMat> out;
        const int n = blk.dim;
        for (int k = 0; k < symmetric_coords(n); ++k)
        {
            RVec e = RVec::Zero(symmetric_coords(n));
            e(k) = scale;
            RMat I = RMat::Zero(dim, dim);
            I.block(offset, offset, n, n) = symmetric_from_coords(e, n);
            out.push_back(std::move(I));
        }
        return out;
    }

    void ConicProblem::validate() const
    {
        auto check_expr = [&](const LinearExpr &e, const std::string &where)
        {
            for (const auto &t : e.terms())
            {
                if (t.block < 0 || t.block >= static_cast<int>(blocks_.size()))
                    throw std::invalid_argument(where + ": unknown block");
                if (t.coeffs.size() != blocks_[t.block].coords())
                    throw std::invalid_argument(where + ": coefficient count does not match block '" +
                                                blocks_[t.block].name + "'");
            }
        };
        for (const auto &c : constraints_)
            check_expr(c.expr, "constraint '" + c.name + "'");
        check_expr(objective_, "objective");
        for (const auto &l : lmis_)
        {
            if (l.dim < 1 || l.constant.rows() != l.dim || l.constant.cols() != l.dim)
                throw std::invalid_argument("LMI '" + l.name + "': bad dimension");
            for (const auto &t : l.terms)
            {
                if (t.block < 0 || t.block >= static_cast<int>(blocks_.size()))
                    throw std::invalid_argument("LMI '" + l.name + "': unknown block");
                if (static_cast<int>(t.images.size()) != blocks_[t.block].coords())
                    throw std::invalid_argument("LMI '" + l.name + "': image count mismatch");
                for (const auto &im : t.images)
                    if (im.rows() != l.dim || im.cols() != l.dim)
                        throw std::invalid_argument("LMI '" + l.name + "': image dimension mismatch");
            }
        }
    }

    // ---- evaluation -----------------------------------------------------------------------------

    double evaluate(const LinearExpr &e, const std::vector<RVec> &values)
    {
        double v = e.constant();
        for (const auto &t : e.terms())
            v += t.coeffs.dot(values.at(t.block));
        return v;
    }

    RMat evaluate(const LmiConstraint &lmi, const std::vector<RVec> &values)
    {
        RMat M = lmi.constant;
        for (const auto &t : lmi.terms)
        {
            const RVec &x = values.at(t.block);
            for (std::size_t k = 0; k < t.images.size(); ++k)
                if (x(static_cast<Eigen::Index>(k)) != 0.0)
                    M += x(static_cast<Eigen::Index>(k)) * t.images[k];
        }
        return symmetrize(M);
    }

    CMat ConicSolution::hermitian(BlockId b, const ConicProblem &p) const
    {
        const auto &blk = p.block(b);
        if (blk.kind != BlockKind::hermitian_psd)
            throw std::invalid_argument("ConicSolution::hermitian: block is not Hermitian");
        return hermitian_from_coords(values.at(b.index), blk.dim);
    }

    RMat ConicSolution::symmetric(BlockId b, const ConicProblem &p) const
    {
        const auto &blk = p.block(b);
        if (blk.kind != BlockKind::symmetric_psd)
            throw std::invalid_argument("ConicSolution::symmetric: block is not symmetric");
        return symmetric_from_coords(values.at(b.index), blk.dim);
    }

    RMat complex_psd_to_real(const CMat &H) { return real_embedding(H); }

    BlockId add_trace_inverse_constraint(ConicProblem &problem, BlockId J, double mu, const std::optional<RVec> &weights)
    {
        const VariableBlock jb = problem.block(J); // copy: add_block below may reallocate
        if (jb.kind != BlockKind::symmetric_psd)
            throw std::invalid_argument("add_trace_inverse_constraint: J must be a symmetric block");
        const int d = jb.dim;
        if (weights && weights->size() != d)
            throw std::invalid_argument("add_trace_inverse_constraint: weight count must equal dim(J)");
        const BlockId T = problem.add_block(jb.name + "_aux", d, BlockKind::symmetric_psd);

        LmiConstraint lmi;
        lmi.name = "schur(" + jb.name + ")";
        lmi.dim = 2 * d;
        lmi.constant = RMat::Zero(2 * d, 2 * d);
        lmi.constant.block(0, d, d, d) = RMat::Identity(d, d);
        lmi.constant.block(d, 0, d, d) = RMat::Identity(d, d);
        lmi.terms.push_back({J.index, problem.placement_images(J, 2 * d, 0)});
        lmi.terms.push_back({T.index, problem.placement_images(T, 2 * d, d)});
        problem.add_lmi(std::move(lmi));

        RVec c = RVec::Zero(symmetric_coords(d));
        c.head(d) = weights ? *weights : RVec::Ones(d);
        LinearExpr tr;
        tr.add_coeffs(T, c);
        problem.add_constraint("trace_inverse(" + jb.name + ")", std::move(tr), Sense::less_equal, mu);
        return T;
    }

    // ---- assembly and solve ---------------------------------------------------------------------

    namespace
    {
        struct Assembled
        {
            detail::ConeProgram cp; // over the full variable vector
            RMat A;                 // equalities A x = b
            RVec b;
            double obj_const = 0.0;
            std::vector<int> offsets; // per variable block
            int nvar = 0;
        };

        Assembled assemble(const ConicProblem &p)
        {
            Assembled a;
            for (const auto &blk : p.blocks())
            {
                a.offsets.push_back(a.nvar);
                a.nvar += blk.coords();
            }
            const int n = a.nvar;

            // cone layout
            std::vector<int> sizes;
            for (const auto &blk : p.blocks())
            {
                if (blk.kind == BlockKind::hermitian_psd)
                    sizes.push_back(2 * blk.dim);
                else if (blk.kind == BlockKind::symmetric_psd)
                    sizes.push_back(blk.dim);
            }
            int n_eq = 0;
            for (const auto &c : p.constraints())
            {
                if (c.sense == Sense::equal)
                    ++n_eq;
                else
                    sizes.push_back(1);
            }
            for (const auto &l : p.lmis())
                sizes.push_back(l.dim);

            int m = 0;
            for (int s : sizes)
                m += svec_size(s);
            a.cp.sizes = sizes;
            a.cp.G = RMat::Zero(m, n);
            a.cp.h = RVec::Zero(m);
            a.A = RMat::Zero(n_eq, n);
            a.b = RVec::Zero(n_eq);

            int row = 0;
            for (std::size_t bi = 0; bi < p.blocks().size(); ++bi)
            {
                const auto &blk = p.blocks()[bi];
                if (blk.kind == BlockKind::free)
                    continue;
                const int len = svec_size(blk.kind == BlockKind::hermitian_psd ? 2 * blk.dim : blk.dim);
                for (int k = 0; k < blk.coords(); ++k)
                {
                    RVec e = RVec::Zero(blk.coords());
                    e(k) = 1.0;
                    const RMat img = blk.kind == BlockKind::hermitian_psd
                                         ? real_embedding(hermitian_from_coords(e, blk.dim))
                                         : symmetric_from_coords(e, blk.dim);
                    a.cp.G.col(a.offsets[bi] + k).segment(row, len) = -svec(img);
                }
                row += len;
            }

            int eq = 0;
            for (const auto &c : p.constraints())
            {
                RVec coeff = RVec::Zero(n);
                for (const auto &t : c.expr.terms())
                    coeff.segment(a.offsets[t.block], t.coeffs.size()) += t.coeffs;
                const double k0 = c.expr.constant();
                switch (c.sense)
                {
                case Sense::equal:
                    a.A.row(eq) = coeff.transpose();
                    a.b(eq) = c.rhs - k0;
                    ++eq;
                    break;
                case Sense::less_equal: // s = rhs - k0 - a.x
                    a.cp.G.row(row) = coeff.transpose();
                    a.cp.h(row) = c.rhs - k0;
                    ++row;
                    break;
                case Sense::greater_equal: // s = k0 - rhs + a.x
                    a.cp.G.row(row) = -coeff.transpose();
                    a.cp.h(row) = k0 - c.rhs;
                    ++row;
                    break;
                }
            }

            for (const auto &l : p.lmis())
            {
                const int len = svec_size(l.dim);
                a.cp.h.segment(row, len) = svec(l.constant);
                for (const auto &t : l.terms)
                    for (std::size_t k = 0; k < t.images.size(); ++k)
                        a.cp.G.col(a.offsets[t.block] + static_cast<int>(k)).segment(row, len) -= svec(t.images[k]);
                row += len;
            }

            a.cp.c = RVec::Zero(n);
            for (const auto &t : p.objective().terms())
                a.cp.c.segment(a.offsets[t.block], t.coeffs.size()) += t.coeffs;
            a.obj_const = p.objective().constant();
            if (p.is_maximize())
                a.cp.c = -a.cp.c;
            return a;
        }

        struct Reduction
        {
            RVec x0;
            RMat N; // x = x0 + N y
            bool consistent = true;
        };

        Reduction eliminate_equalities(const RMat &A, const RVec &b, int n)
        {
            Reduction r;
            if (A.rows() == 0)
            {
                r.x0 = RVec::Zero(n);
                r.N = RMat::Identity(n, n);
                return r;
            }
            Eigen::CompleteOrthogonalDecomposition<RMat> cod(A);
            cod.setThreshold(1e-12);
            r.x0 = cod.solve(b);
            const double res = (A * r.x0 - b).norm();
            r.consistent = res <= 1e-9 * (1.0 + b.norm());

            Eigen::ColPivHouseholderQR<RMat> qr(A.transpose());
            qr.setThreshold(1e-12);
            const Eigen::Index rank = qr.rank();
            const RMat Qm = qr.householderQ() * RMat::Identity(n, n);
            r.N = Qm.rightCols(n - rank);
            return r;
        }

        struct Equilibration
        {
            RVec col;                          // x = col .* x_scaled
            std::vector<RVec> congruence;      // per cone block
            RVec row;                          // 1 / (d_i d_j) per svec entry: scaled-to-original slack factor
            double h_scale = 1.0;
            double c_scale = 1.0;
        };

        /// Ruiz-style scaling: diagonal congruence per cone block and column scaling of G.
        Equilibration equilibrate(detail::ConeProgram &cp)
        {
            const Eigen::Index n = cp.G.cols();
            Equilibration eq;
            eq.col = RVec::Ones(n);
            for (int s : cp.sizes)
                eq.congruence.push_back(RVec::Ones(s));

            auto clampf = [](double v) { return std::clamp(v, 1e-4, 1e4); };
            for (int pass = 0; pass < 12; ++pass)
            {
                // block rows
                int off = 0;
                for (std::size_t k = 0; k < cp.sizes.size(); ++k)
                {
                    const int s = cp.sizes[k];
                    RVec rho = RVec::Zero(s);
                    int r = off;
                    for (int j = 0; j < s; ++j)
                        for (int i = j; i < s; ++i, ++r)
                        {
                            const double v = cp.G.row(r).cwiseAbs().maxCoeff();
                            rho(i) = std::max(rho(i), v);
                            rho(j) = std::max(rho(j), v);
                        }
                    RVec d(s);
                    for (int i = 0; i < s; ++i)
                        d(i) = rho(i) > 0.0 ? clampf(1.0 / std::sqrt(rho(i))) : 1.0;
                    r = off;
                    for (int j = 0; j < s; ++j)
                        for (int i = j; i < s; ++i, ++r)
                        {
                            cp.G.row(r) *= d(i) * d(j);
                            cp.h(r) *= d(i) * d(j);
                        }
                    eq.congruence[k] = eq.congruence[k].cwiseProduct(d);
                    off = r;
                }
                // columns
                for (Eigen::Index j = 0; j < n; ++j)
                {
                    const double v = cp.G.col(j).cwiseAbs().maxCoeff();
                    const double e = v > 0.0 ? clampf(1.0 / std::sqrt(v)) : 1.0;
                    cp.G.col(j) *= e;
                    cp.c(j) *= e;
                    eq.col(j) *= e;
                }
            }
            eq.row.resize(cp.G.rows());
            {
                int r = 0;
                for (std::size_t k = 0; k < cp.sizes.size(); ++k)
                {
                    const RVec &d = eq.congruence[k];
                    for (int j = 0; j < cp.sizes[k]; ++j)
                        for (int i = j; i < cp.sizes[k]; ++i, ++r)
                            eq.row(r) = 1.0 / (d(i) * d(j));
                }
            }
            eq.h_scale = std::max(1e-8, cp.h.cwiseAbs().maxCoeff());
            eq.c_scale = std::max(1e-8, cp.c.cwiseAbs().maxCoeff());
            if (eq.h_scale == 1e-8)
                eq.h_scale = 1.0;
            if (eq.c_scale == 1e-8)
                eq.c_scale = 1.0;
            cp.h /= eq.h_scale;
            cp.c /= eq.c_scale;
            return eq;
        }

        ConicSolution solve_once(const ConicProblem &p, const ConicSettings &settings)
        {
            p.validate();
            Assembled a = assemble(p);
            ConicSolution sol;

            const Reduction red = eliminate_equalities(a.A, a.b, a.nvar);
            if (!red.consistent)
            {
                sol.status = SolveStatus::infeasible;
                return sol;
            }

            detail::ConeProgram cp;
            cp.sizes = a.cp.sizes;
            cp.G = a.cp.G * red.N;
            cp.h = a.cp.h - a.cp.G * red.x0;
            cp.c = red.N.transpose() * a.cp.c;

            Equilibration eq;
            eq.col = RVec::Ones(cp.G.cols());
            if (settings.equilibrate)
                eq = equilibrate(cp);

            detail::HsdSettings hs;
            hs.tolerance = settings.tolerance;
            hs.max_iterations = settings.max_iterations;
            if (settings.equilibrate)
            {
                hs.primal_weight = eq.row * eq.h_scale;
                hs.dual_weight = eq.col.cwiseInverse() * eq.c_scale;
                hs.objective_scale = eq.h_scale * eq.c_scale;
            }
            RVec y;
            if (cp.G.cols() == 0)
            {
                // nothing to optimize: feasibility of the fixed point only
                const bool ok = [&]
                {
                    int off = 0;
                    for (int s : cp.sizes)
                    {
                        const RMat S = smat(cp.h.segment(off, svec_size(s)), s);
                        off += svec_size(s);
                        Eigen::SelfAdjointEigenSolver<RMat> es(S, Eigen::EigenvaluesOnly);
                        if (es.eigenvalues()(0) < -settings.tolerance * std::max(1.0, S.norm()))
                            return false;
                    }
                    return true;
                }();
                sol.status = ok ? SolveStatus::optimal : SolveStatus::infeasible;
                y = RVec::Zero(0);
            }
            else
            {
                const detail::HsdResult r = detail::hsd_solve(cp, hs);
                sol.status = r.status;
                sol.residuals = r.residuals;
                sol.iterations = r.iterations;
                y = eq.col.cwiseProduct(r.x) * eq.h_scale;
            }

            const RVec x = red.x0 + red.N * y;
            sol.values.clear();
            for (std::size_t bi = 0; bi < p.blocks().size(); ++bi)
                sol.values.push_back(x.segment(a.offsets[bi], p.blocks()[bi].coords()));
            sol.objective = evaluate(p.objective(), sol.values);
            return sol;
        }
    } // namespace

    ConicSolution solve(const ConicProblem &problem, const ConicSettings &settings)
    {
        ConicSolution sol = solve_once(problem, settings);
        if (sol.status == SolveStatus::inaccurate && settings.retry_inaccurate)
        {
            ConicSettings again = settings;
            again.max_iterations *= 10;
            again.retry_inaccurate = false;
            sol = solve_once(problem, again);
        }
        const auto &r = sol.residuals;
        const double loose = std::max(settings.reduced_tolerance, settings.tolerance);
        if (sol.status == SolveStatus::inaccurate && r.primal <= loose && r.dual <= loose && r.gap <= loose)
            sol.status = SolveStatus::near_optimal;
        return sol;
    }

    // ---- audit ----------------------------------------------------------------------------------

    std::vector<AuditEntry> audit(const ConicProblem &problem, const ConicSolution &solution)
    {
        std::vector<AuditEntry> out;
        const auto &vals = solution.values;
        if (vals.size() != problem.blocks().size())
            throw std::invalid_argument("audit: solution does not match the problem");

        for (const auto &c : problem.constraints())
        {
            const double v = evaluate(c.expr, vals);
            double scale = std::abs(c.rhs) + std::abs(c.expr.constant());
            for (const auto &t : c.expr.terms())
                scale += t.coeffs.cwiseProduct(vals[t.block]).cwiseAbs().sum();
            double viol = 0.0;
            switch (c.sense)
            {
            case Sense::less_equal:
                viol = std::max(0.0, v - c.rhs);
                break;
            case Sense::greater_equal:
                viol = std::max(0.0, c.rhs - v);
                break;
            case Sense::equal:
                viol = std::abs(v - c.rhs);
                break;
            }
            out.push_back({c.name, scale > 0.0 ? viol / scale : viol});
        }
        for (const auto &l : problem.lmis())
        {
            const RMat M = evaluate(l, vals);
            double scale = l.constant.norm();
            for (const auto &t : l.terms)
                for (std::size_t k = 0; k < t.images.size(); ++k)
                    scale += std::abs(vals[t.block](static_cast<Eigen::Index>(k))) * t.images[k].norm();
            Eigen::SelfAdjointEigenSolver<RMat> es(M, Eigen::EigenvaluesOnly);
            const double viol = std::max(0.0, -es.eigenvalues()(0));
            out.push_back({l.name, scale > 0.0 ? viol / scale : viol});
        }
        for (std::size_t bi = 0; bi < problem.blocks().size(); ++bi)
        {
            const auto &blk = problem.blocks()[bi];
            if (blk.kind == BlockKind::free)
                continue;
            const RMat X = blk.kind == BlockKind::hermitian_psd
                               ? real_embedding(hermitian_from_coords(vals[bi], blk.dim))
                               : symmetric_from_coords(vals[bi], blk.dim);
            Eigen::SelfAdjointEigenSolver<RMat> es(X, Eigen::EigenvaluesOnly);
            const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
            const double viol = std::max(0.0, -es.eigenvalues()(0));
            out.push_back({"psd(" + blk.name + ")", scale > 0.0 ? viol / scale : viol});
        }
        return out;
    }

    double max_violation(const std::vector<AuditEntry> &entries)
    {
        double m = 0.0;
        for (const auto &e : entries)
            m = std::max(m, e.residual);
        return m;
    }

    // ---- dump -----------------------------------------------------------------------------------

    namespace
    {
        nlohmann::json matrix_json(const RMat &M)
        {
            nlohmann::json rows = nlohmann::json::array();
            for (Eigen::Index i = 0; i < M.rows(); ++i)
            {
                nlohmann::json r = nlohmann::json::array();
                for (Eigen::Index j = 0; j < M.cols(); ++j)
                    r.push_back(M(i, j));
                rows.push_back(std::move(r));
            }
            return rows;
        }

        nlohmann::json expr_json(const LinearExpr &e)
        {
            nlohmann::json terms = nlohmann::json::array();
            for (const auto &t : e.terms())
                terms.push_back({{"block", t.block}, {"coeffs", std::vector<double>(t.coeffs.begin(), t.coeffs.end())}});
            return {{"constant", e.constant()}, {"terms", terms}};
        }

        std::string_view kind_name(BlockKind k)
        {
            switch (k)
            {
            case BlockKind::hermitian_psd:
                return "hermitian_psd";
            case BlockKind::symmetric_psd:
                return "symmetric_psd";
            case BlockKind::free:
                return "free";
            }
            return "unknown";
        }

        std::string_view sense_name(Sense s)
        {
            switch (s)
            {
            case Sense::less_equal:
                return "<=";
            case Sense::equal:
                return "==";
            case Sense::greater_equal:
                return ">=";
            }
            return "?";
        }
    } // namespace

    void write_problem(std::ostream &os, const ConicProblem &problem)
    {
        nlohmann::json j;
        j["format"] = "arisac-conic-1";
        j["coordinates"] = {
            {"hermitian_psd", "diagonal, then Re/Im of X(i,j) for i<j in row-major order"},
            {"symmetric_psd", "diagonal, then X(i,j) for i<j in row-major order"},
            {"free", "entries in order"}};
        for (const auto &b : problem.blocks())
            j["blocks"].push_back({{"name", b.name}, {"dim", b.dim}, {"kind", kind_name(b.kind)}});
        j["constraints"] = nlohmann::json::array();
        for (const auto &c : problem.constraints())
            j["constraints"].push_back(
                {{"name", c.name}, {"sense", sense_name(c.sense)}, {"rhs", c.rhs}, {"expr", expr_json(c.expr)}});
        j["lmis"] = nlohmann::json::array();
        for (const auto &l : problem.lmis())
        {
            nlohmann::json terms = nlohmann::json::array();
            for (const auto &t : l.terms)
            {
                nlohmann::json imgs = nlohmann::json::array();
                for (const auto &im : t.images)
                    imgs.push_back(matrix_json(im));
                terms.push_back({{"block", t.block}, {"images", imgs}});
            }
            j["lmis"].push_back({{"name", l.name}, {"dim", l.dim}, {"constant", matrix_json(l.constant)}, {"terms", terms}});
        }
        j["objective"] = expr_json(problem.objective());
        j["objective"]["sense"] = problem.is_maximize() ? "maximize" : "minimize";
        os << j.dump(1) << '\n';
    }
} // namespace arisac
