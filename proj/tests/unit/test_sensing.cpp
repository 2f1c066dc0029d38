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
#include "arisac/random.hpp"
#include "arisac/sensing.hpp"

#include "../support/fim_oracle.hpp"

#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

using namespace arisac;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    SystemConfig small_config(int L = 8)
    {
        SystemConfig cfg = desk_scale_config();
        cfg.L = L;
        return cfg;
    }

    CMat random_psd(Rng &rng, int M)
    {
        const CMat B = rng.complex_normal_matrix(M, M);
        return B * B.adjoint() / M;
    }

    double deg(double d) { return d * pi / 180.0; }
} // namespace

TEST_CASE("single target Doppler sums")
{
    SystemConfig cfg = small_config(8);
    cfg.targets.resize(1);
    const auto targets = make_targets(cfg);
    const auto c = build_fisher_components(targets, cfg);
    CHECK(c.Sigma1.rows() == 1);
    CHECK_THAT(c.Sigma1(0, 0).real(), WithinAbs(8.0, 1e-12));
    CHECK(c.Sigma3(0, 0).real() > 0.0);
    CHECK_THAT(c.Sigma3(0, 0).imag(), WithinAbs(0.0, 1e-18));
}

TEST_CASE("diagonal Doppler sums have closed forms")
{
    const SystemConfig cfg = small_config(16);
    const auto c = build_fisher_components(make_targets(cfg), cfg);
    const double L = cfg.L;
    const double w = 2.0 * pi * cfg.T;
    double l2 = 0.0;
    for (int l = 1; l <= cfg.L; ++l)
        l2 += double(l) * l;
    for (int i = 0; i < 2; ++i)
    {
        CHECK_THAT(c.Sigma1(i, i).real(), WithinRel(L, 1e-14));
        CHECK_THAT(c.Sigma2(i, i).real(), WithinRel(w * L * (L + 1) / 2.0, 1e-12));
        CHECK_THAT(c.Sigma3(i, i).real(), WithinRel(w * w * l2, 1e-12));
    }
    CHECK((c.Sigma1 - c.Sigma1.adjoint()).norm() < 1e-12);
    CHECK((c.Sigma3 - c.Sigma3.adjoint()).norm() < 1e-20);
    CHECK(std::abs(c.Sigma2(0, 1) - std::conj(c.Sigma2(1, 0))) < 1e-15);
}

TEST_CASE("equal Dopplers give a constant first Doppler sum")
{
    SystemConfig cfg = small_config(8);
    cfg.targets[1].velocity = cfg.targets[0].velocity;
    const auto c = build_fisher_components(make_targets(cfg), cfg);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(c.Sigma1(i, j) - cplx(8.0, 0.0)) < 1e-12);
}

TEST_CASE("off-diagonal Doppler sum equals the geometric series")
{
    SystemConfig cfg = small_config(8);
    cfg.T = 1e-4; // larger phase steps so the series is far from L
    const auto targets = make_targets(cfg);
    const auto c = build_fisher_components(targets, cfg);
    const double om = 2.0 * pi * (targets[1].doppler - targets[0].doppler) * cfg.T;
    const cplx r = std::polar(1.0, om);
    const cplx closed = r * (1.0 - std::pow(r, 8)) / (1.0 - r);
    CHECK(std::abs(c.Sigma1(0, 1) - closed) < 1e-12);
}

TEST_CASE("FIM is linear in the covariance")
{
    const SystemConfig cfg = small_config(8);
    const auto c = build_fisher_components(make_targets(cfg), cfg);
    Rng rng(3);
    const CMat R1 = random_psd(rng, cfg.M);
    const CMat R2 = random_psd(rng, cfg.M);
    CHECK(fisher_information(CMat::Zero(cfg.M, cfg.M), c).norm() == 0.0);
    const RMat F1 = fisher_information(R1, c);
    CHECK((fisher_information(2.0 * R1, c) - 2.0 * F1).norm() <= 1e-12 * F1.norm());
    for (int t = 0; t < 10; ++t)
    {
        const double a = rng.uniform() * 3.0;
        const double b = rng.uniform() * 3.0;
        const RMat lhs = fisher_information(a * R1 + b * R2, c);
        const RMat rhs = a * F1 + b * fisher_information(R2, c);
        CHECK((lhs - rhs).norm() <= 1e-10 * rhs.norm());
    }
}

TEST_CASE("FIM is symmetric PSD for PSD covariances")
{
    const SystemConfig cfg = small_config(8);
    const auto c = build_fisher_components(make_targets(cfg), cfg);
    Rng rng(17);
    for (int t = 0; t < 20; ++t)
    {
        const RMat F = fisher_information(random_psd(rng, cfg.M), c);
        CHECK((F - F.transpose()).norm() == 0.0);
        Eigen::SelfAdjointEigenSolver<RMat> es(F, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues()(0) >= -1e-9 * F.norm());
    }
}

TEST_CASE("analytic FIM matches the finite-difference echo Jacobian")
{
    const SystemConfig cfg = small_config(8);
    const auto targets = make_targets(cfg);
    const auto c = build_fisher_components(targets, cfg);
    Rng rng(99);
    for (int t = 0; t < 5; ++t)
    {
        const CMat R = random_psd(rng, cfg.M);
        const RMat Fa = fisher_information(R, c);
        const RMat Fd = oracle::finite_difference_fim(targets, cfg, R);
        CHECK((Fa - Fd).norm() / Fd.norm() <= 1e-6);
    }
}

TEST_CASE("affine map reproduces direct assembly")
{
    const SystemConfig cfg = small_config(8);
    const auto c = build_fisher_components(make_targets(cfg), cfg);
    const FimAffineMap map = fim_affine_map(c);
    CMat e11 = CMat::Zero(cfg.M, cfg.M);
    e11(0, 0) = 1.0;
    CHECK((map.evaluate(e11) - fisher_information(e11, c)).norm() <= 1e-12 * fisher_information(e11, c).norm());

    Rng rng(8);
    const CMat R1 = random_psd(rng, cfg.M);
    const CMat R2 = random_psd(rng, cfg.M);
    const RMat combo = map.evaluate(0.3 * R1 + 1.7 * R2);
    const RMat direct = fisher_information(0.3 * R1 + 1.7 * R2, c);
    CHECK((combo - direct).norm() <= 1e-12 * direct.norm());
    for (int t = 0; t < 5; ++t)
    {
        const CMat R = random_psd(rng, cfg.M);
        const RMat Fd = fisher_information(R, c);
        CHECK((map.evaluate(R) - Fd).norm() <= 1e-12 * Fd.norm());
    }
}

TEST_CASE("CRB trace")
{
    CHECK_THAT(crb_trace(RMat::Identity(8, 8)), WithinRel(8.0, 1e-14));
    CHECK_THAT(crb_trace(2.0 * RMat::Identity(8, 8)), WithinRel(4.0, 1e-14));
    Rng rng(1);
    for (int t = 0; t < 10; ++t)
    {
        RMat B(6, 6);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                B(i, j) = rng.normal();
        const RMat F = B * B.transpose() + 0.1 * RMat::Identity(6, 6);
        CHECK_THAT(crb_trace(F), WithinRel(F.inverse().trace(), 1e-10));
    }
    RMat singular = RMat::Identity(4, 4);
    singular(3, 3) = 0.0;
    CHECK_THROWS_AS(crb_trace(singular), std::domain_error);
    RMat indefinite = RMat::Identity(4, 4);
    indefinite(0, 0) = -1.0;
    CHECK_THROWS_AS(crb_trace(indefinite), std::domain_error);
}

TEST_CASE("CRB scales inversely with transmit power")
{
    const SystemConfig cfg = small_config(8);
    const auto c = build_fisher_components(make_targets(cfg), cfg);
    const CMat R = CMat::Identity(cfg.M, cfg.M) / cfg.M;
    const double base = crb_trace(fisher_information(R, c));
    CHECK_THAT(crb_trace(fisher_information(3.0 * R, c)), WithinRel(base / 3.0, 1e-8));
}

TEST_CASE("beampattern of isotropic and matched covariances")
{
    std::vector<double> grid;
    for (int i = -180; i <= 180; ++i)
        grid.push_back(deg(i * 0.5));
    const auto flat = beampattern(CMat::Identity(4, 4), grid);
    for (double v : flat)
        CHECK_THAT(v, WithinRel(4.0, 1e-12));
    const auto flat_db = beampattern(CMat::Identity(4, 4), grid, true);
    for (double v : flat_db)
        CHECK_THAT(v, WithinAbs(0.0, 1e-9));

    const CVec a = steering_vector(deg(20.0), 4);
    const auto p = beampattern(a * a.adjoint(), grid);
    const auto it = std::max_element(p.begin(), p.end());
    CHECK_THAT(grid[static_cast<std::size_t>(it - p.begin())], WithinAbs(deg(20.0), 1e-12));
    CHECK_THAT(*it, WithinRel(16.0, 1e-12));
}
