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


#include "arisac/comm.hpp"
#include "arisac/covertness.hpp"
#include "arisac/random.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace arisac;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("kappa solves the divergence equation")
{
    // reference roots from an independent bracketing solver
    const std::pair<double, double> ref[] = {
        {0.05, 1.1070455687571776}, {0.1, 1.2298532886955198}, {0.2, 1.535016827837596}, {0.3, 1.9473986551592262}};
    for (const auto &[eps, k] : ref)
    {
        const double kappa = kappa_from_epsilon(eps);
        CHECK_THAT(kappa, WithinRel(k, 1e-12));
        CHECK(std::abs(std::log(kappa) + 1.0 / kappa - 1.0 - 2.0 * eps * eps) < 1e-12);
    }
    CHECK(kappa_from_epsilon(0.0) == 1.0);
    CHECK_THROWS(kappa_from_epsilon(-0.1));
    double prev = 1.0;
    for (double eps = 0.01; eps < 0.9; eps += 0.01)
    {
        const double k = kappa_from_epsilon(eps);
        CHECK(k > prev);
        prev = k;
    }
}

TEST_CASE("KL divergence")
{
    CHECK_THAT(kl_divergence(1.0, std::exp(1.0)), WithinAbs(std::exp(-1.0), 1e-15));
    CHECK(kl_divergence(2.5, 2.5) == 0.0);
    // small gap: D ~ (r-1)^2 / 2
    const double d = 1e-6;
    CHECK_THAT(kl_divergence(1.0, 1.0 + d), WithinRel(0.5 * d * d, 1e-5));
    CHECK_THROWS(kl_divergence(0.0, 1.0));
}

TEST_CASE("minimum detection error probability")
{
    CHECK_THAT(min_dep(1.0, 2.0), WithinAbs(0.75, 1e-15));
    CHECK_THAT(min_dep(3e-12, 6e-12), WithinAbs(0.75, 1e-12));
    CHECK(min_dep(1.0, 1.0) == 1.0);
    CHECK(min_dep(2.0, 1.0) == 1.0);
    CHECK_THAT(optimal_threshold(1.0, 2.0), WithinAbs(2.0 * std::log(2.0), 1e-15));
    CHECK_THROWS_AS(optimal_threshold(1.0, 1.0), std::domain_error);
    double prev = 1.0;
    for (double r = 1.05; r < 50.0; r *= 1.1)
    {
        const double z = min_dep(1.0, r);
        CHECK(z < prev);
        CHECK(z > 0.0);
        prev = z;
    }
}

TEST_CASE("Pinsker bound holds")
{
    for (double r = 1.001; r < 100.0; r *= 1.07)
    {
        const double D = kl_divergence(1.0, r);
        CHECK(min_dep(1.0, r) >= 1.0 - std::sqrt(D / 2.0) - 1e-12);
    }
}

TEST_CASE("variance ratio, divergence and DEP bound agree")
{
    for (double eps : {0.05, 0.1, 0.2})
    {
        const double kappa = kappa_from_epsilon(eps);
        for (double r = 1.0005; r < 4.0; r *= 1.013)
        {
            if (std::abs(r - kappa) < 1e-9)
                continue;
            const bool by_ratio = covertness_margin(WillieVariances{1.0, r}, kappa) <= 0.0;
            const bool by_kl = kl_divergence(1.0, r) <= 2.0 * eps * eps;
            const bool by_bound = 1.0 - std::sqrt(kl_divergence(1.0, r) / 2.0) >= 1.0 - eps;
            CHECK(by_ratio == by_kl);
            CHECK(by_kl == by_bound);
            if (by_ratio)
                CHECK(min_dep(1.0, r) >= 1.0 - eps);
        }
    }
}

TEST_CASE("Monte-Carlo detector matches the analytic DEP")
{
    for (double r : {1.2, 2.0, 5.0})
    {
        const WillieStats s = make_willie_stats(1e-12, r * 1e-12, 0.1);
        const DepEstimate mc = simulate_willie_detector(s, 1'000'000, 42, 1, 4);
        CHECK(mc.trials == 1'000'000);
        CHECK(std::abs(mc.dep - min_dep(s.sigma0_sq, s.sigma1_sq)) <= 4.0 * mc.std_error);
    }
}

TEST_CASE("Monte-Carlo detector is independent of worker count")
{
    const WillieStats s = make_willie_stats(1.0, 1.7, 0.1);
    const DepEstimate a = simulate_willie_detector(s, 100'001, 7, 1, 1);
    const DepEstimate b = simulate_willie_detector(s, 100'001, 7, 1, 8);
    CHECK(a.dep == b.dep);
    const DepEstimate c = simulate_willie_detector(make_willie_stats(1.0, 1.0, 0.1), 10, 7);
    CHECK(c.dep == 1.0);
    CHECK_THROWS(simulate_willie_detector(s, 0, 1));
}

TEST_CASE("Willie variances match received-power simulation")
{
    SystemConfig cfg = desk_scale_config();
    const ChannelSet ch = sample_channels(cfg, 11);
    Rng rng(5);
    const CVec w_g = rng.complex_normal_vector(cfg.M, 0.2);
    const CVec w_b = rng.complex_normal_vector(cfg.M, 0.05);
    const CMat W_s = rng.complex_normal_matrix(cfg.M, cfg.M, 0.02);
    CVec phi(cfg.N);
    for (int n = 0; n < cfg.N; ++n)
        phi(n) = std::polar(3.0 + n, 0.7 * n);

    const WillieVariances v = willie_variances(w_g, w_b, W_s, phi, ch, cfg);
    CHECK(v.sigma1_sq > v.sigma0_sq);

    // y = h_a^H x + h_r^H Phi (G x + z_r) + z_w
    const CVec &h_a = ch.direct(Node::willie);
    const CVec &h_r = ch.reflected(Node::willie);
    const int trials = 200'000;
    double p0 = 0.0, p1 = 0.0;
    for (int t = 0; t < trials; ++t)
    {
        const CVec s_s = rng.complex_normal_vector(cfg.M);
        const CVec base = w_g * rng.complex_normal() + W_s * s_s;
        const CVec cov = w_b * rng.complex_normal();
        const CVec z_r = rng.complex_normal_vector(cfg.N, cfg.sigma_r2);
        const cplx z_w = rng.complex_normal(cfg.sigma_w2);
        auto rx = [&](const CVec &x)
        { return h_a.dot(x) + h_r.dot(phi.cwiseProduct(ch.G * x + z_r)) + z_w; };
        p0 += std::norm(rx(base));
        p1 += std::norm(rx(base + cov));
    }
    CHECK_THAT(p0 / trials, WithinRel(v.sigma0_sq, 0.02));
    CHECK_THAT(p1 / trials, WithinRel(v.sigma1_sq, 0.02));

    // without DSS the sensing term drops out
    const WillieVariances v0 = willie_variances(w_g, w_b, CMat(), phi, ch, cfg);
    CHECK(v0.sigma0_sq < v.sigma0_sq);
    CHECK_THAT(v0.sigma1_sq - v0.sigma0_sq, WithinRel(v.sigma1_sq - v.sigma0_sq, 1e-12));
}

TEST_CASE("RIS noise reaches Willie only in active mode")
{
    SystemConfig cfg = desk_scale_config();
    cfg.ris_mode = RisMode::passive;
    const ChannelSet ch = sample_channels(cfg, 3);
    const CVec w = CVec::Zero(cfg.M);
    const CVec phi = CVec::Ones(cfg.N);
    const WillieVariances v = willie_variances(w, w, CMat(), phi, ch, cfg);
    CHECK(v.sigma0_sq == cfg.sigma_w2);
    CHECK(v.sigma1_sq == cfg.sigma_w2);
}
