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
#include "arisac/random.hpp"

#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include <sstream>

using namespace arisac;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    RMat random_spd(Rng &rng, int n, double floor = 0.1)
    {
        RMat B(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                B(i, j) = rng.normal();
        return B * B.transpose() / n + floor * RMat::Identity(n, n);
    }
} // namespace

TEST_CASE("real embedding of identity and a Pauli-like matrix")
{
    CHECK(complex_psd_to_real(CMat::Identity(3, 3)).isApprox(RMat::Identity(6, 6)));

    CMat H(2, 2);
    H << 0.0, imag_unit, -imag_unit, 0.0;
    Eigen::SelfAdjointEigenSolver<RMat> es(complex_psd_to_real(H));
    const RVec ev = es.eigenvalues();
    CHECK_THAT(ev(0), WithinAbs(-1.0, 1e-12));
    CHECK_THAT(ev(1), WithinAbs(-1.0, 1e-12));
    CHECK_THAT(ev(2), WithinAbs(1.0, 1e-12));
    CHECK_THAT(ev(3), WithinAbs(1.0, 1e-12));
}

TEST_CASE("real embedding doubles every eigenvalue of a random Hermitian matrix")
{
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial)
    {
        const CMat B = rng.complex_normal_matrix(5, 5);
        const CMat H = hermitianize(B);
        Eigen::SelfAdjointEigenSolver<CMat> ec(H, Eigen::EigenvaluesOnly);
        Eigen::SelfAdjointEigenSolver<RMat> er(complex_psd_to_real(H), Eigen::EigenvaluesOnly);
        for (int i = 0; i < 5; ++i)
        {
            CHECK_THAT(er.eigenvalues()(2 * i), WithinAbs(ec.eigenvalues()(i), 1e-10));
            CHECK_THAT(er.eigenvalues()(2 * i + 1), WithinAbs(ec.eigenvalues()(i), 1e-10));
        }
        // round trip
        CHECK((from_real_embedding(complex_psd_to_real(H)) - H).norm() <= 1e-12 * H.norm());
    }
}

TEST_CASE("maximize tr X subject to tr X <= 1")
{
    for (auto kind : {BlockKind::symmetric_psd, BlockKind::hermitian_psd})
    {
        ConicProblem p;
        const BlockId X = p.add_block("X", 2, kind);
        LinearExpr tr;
        if (kind == BlockKind::symmetric_psd)
            tr.add_trace(X, RMat(RMat::Identity(2, 2)));
        else
            tr.add_trace(X, CMat(CMat::Identity(2, 2)));
        p.add_constraint("budget", tr, Sense::less_equal, 1.0);
        p.maximize(tr);
        const ConicSolution s = solve(p);
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK_THAT(s.objective, WithinAbs(1.0, 1e-7));
        CHECK(max_violation(audit(p, s)) <= 1e-7);
    }
}

TEST_CASE("negative trace bound is infeasible")
{
    ConicProblem p;
    const BlockId X = p.add_block("X", 2, BlockKind::symmetric_psd);
    LinearExpr tr;
    tr.add_trace(X, RMat(RMat::Identity(2, 2)));
    p.add_constraint("budget", tr, Sense::less_equal, -1.0);
    p.maximize(tr);
    CHECK(solve(p).status == SolveStatus::infeasible);
}

TEST_CASE("unbounded objective is reported")
{
    ConicProblem p;
    const BlockId X = p.add_block("X", 2, BlockKind::symmetric_psd);
    LinearExpr tr;
    tr.add_trace(X, RMat(RMat::Identity(2, 2)));
    p.maximize(tr);
    CHECK(solve(p).status == SolveStatus::unbounded);
}

TEST_CASE("largest eigenvalue through a Hermitian SDP")
{
    // max Re tr(C X) s.t. tr X = 1, X >= 0 equals lambda_max(C)
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial)
    {
        const CMat C = hermitianize(rng.complex_normal_matrix(4, 4));
        ConicProblem p;
        const BlockId X = p.add_block("X", 4, BlockKind::hermitian_psd);
        LinearExpr tr;
        tr.add_trace(X, CMat(CMat::Identity(4, 4)));
        p.add_constraint("unit", tr, Sense::equal, 1.0);
        LinearExpr obj;
        obj.add_trace(X, C);
        p.maximize(obj);
        const ConicSolution s = solve(p);
        REQUIRE(s.status == SolveStatus::optimal);
        Eigen::SelfAdjointEigenSolver<CMat> es(C, Eigen::EigenvaluesOnly);
        CHECK_THAT(s.objective, WithinAbs(es.eigenvalues()(3), 1e-7));
        CHECK(rank_one_residual(s.hermitian(X, p)) < 1e-5);
    }
}

TEST_CASE("badly scaled data still yields an accurate unscaled solution")
{
    // max 2 Re X12 s.t. X11 <= a, X22 <= 1/a, X >= 0 has optimum 2 with X rank one
    for (double a : {1e-6, 1.0, 1e6})
    {
        ConicProblem p;
        const BlockId X = p.add_block("X", 2, BlockKind::hermitian_psd);
        CMat E11 = CMat::Zero(2, 2);
        E11(0, 0) = 1.0;
        CMat E22 = CMat::Zero(2, 2);
        E22(1, 1) = 1.0;
        CMat off = CMat::Zero(2, 2);
        off(0, 1) = off(1, 0) = 1.0;
        p.add_constraint("a", LinearExpr().add_trace(X, E11), Sense::less_equal, a);
        p.add_constraint("b", LinearExpr().add_trace(X, E22), Sense::less_equal, 1.0 / a);
        p.maximize(LinearExpr().add_trace(X, off));
        const ConicSolution sol = solve(p);
        REQUIRE(sol.ok());
        CHECK_THAT(sol.objective, WithinRel(2.0, 1e-7));
        CHECK(max_violation(audit(p, sol)) <= 1e-8);
        CHECK(rank_one_residual(sol.hermitian(X, p)) <= 1e-6);
    }
}

TEST_CASE("trace-inverse encoding at the boundary")
{
    for (double mu : {8.0, 7.9})
    {
        ConicProblem p;
        const BlockId J = p.add_block("J", 8, BlockKind::symmetric_psd);
        const RVec fixed = symmetric_to_coords(RMat::Identity(8, 8));
        for (int k = 0; k < fixed.size(); ++k)
        {
            RVec e = RVec::Zero(fixed.size());
            e(k) = 1.0;
            LinearExpr fix;
            fix.add_coeffs(J, e);
            p.add_constraint("fix", fix, Sense::equal, fixed(k));
        }
        add_trace_inverse_constraint(p, J, mu);
        p.minimize(LinearExpr{});
        const ConicSolution s = solve(p);
        if (mu >= 8.0)
            CHECK(s.status == SolveStatus::optimal);
        else
            CHECK(s.status == SolveStatus::infeasible);
    }
}

TEST_CASE("trace-inverse encoding agrees with explicit inverse on random SPD matrices")
{
    Rng rng(2024);
    int disagreements = 0;
    for (int trial = 0; trial < 40; ++trial)
    {
        const int d = 4;
        const RMat Jm = random_spd(rng, d);
        const double exact = Jm.inverse().trace();
        const double mu = exact * (0.5 + rng.uniform());
        if (std::abs(mu - exact) <= 1e-7 * exact)
            continue;

        // minimize t with [[J, I], [I, T]] >= 0, tr T <= t ; feasibility of mu is t* <= mu
        ConicProblem p;
        const BlockId J = p.add_block("J", d, BlockKind::symmetric_psd);
        const RVec fixed = symmetric_to_coords(Jm);
        for (int k = 0; k < fixed.size(); ++k)
        {
            RVec e = RVec::Zero(fixed.size());
            e(k) = 1.0;
            LinearExpr fix;
            fix.add_coeffs(J, e);
            p.add_constraint("fix", fix, Sense::equal, fixed(k));
        }
        add_trace_inverse_constraint(p, J, mu);
        p.minimize(LinearExpr{});
        const ConicSolution s = solve(p);
        const bool feasible = s.status == SolveStatus::optimal;
        if (feasible != (exact <= mu))
            ++disagreements;
    }
    CHECK(disagreements == 0);
}

TEST_CASE("problem dump is valid JSON with every block")
{
    ConicProblem p;
    const BlockId X = p.add_block("X", 2, BlockKind::hermitian_psd);
    LinearExpr tr;
    tr.add_trace(X, CMat(CMat::Identity(2, 2)));
    p.add_constraint("budget", tr, Sense::less_equal, 1.0);
    p.maximize(tr);
    std::ostringstream os;
    write_problem(os, p);
    CHECK(os.str().find("\"hermitian_psd\"") != std::string::npos);
    CHECK(os.str().find("\"budget\"") != std::string::npos);
}
