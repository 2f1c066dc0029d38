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


#include "arisac/scenario.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace arisac;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    double deg(double d) { return d * pi / 180.0; }
} // namespace

TEST_CASE("steering vector at broadside is all ones")
{
    const CVec a = steering_vector(0.0, 4);
    for (int m = 0; m < 4; ++m)
        CHECK(std::abs(a(m) - cplx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("steering vector at 30 degrees steps by a quarter turn")
{
    const CVec a = steering_vector(deg(30.0), 2);
    CHECK(std::abs(a(0) - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(a(1) - imag_unit) < 1e-15);
}

TEST_CASE("steering vector matches per-element exponentials")
{
    const double th = deg(35.0);
    const CVec a = steering_vector(th, 8);
    for (int m = 0; m < 8; ++m)
    {
        const double ph = pi * m * std::sin(th);
        CHECK(std::abs(a(m) - cplx(std::cos(ph), std::sin(ph))) < 1e-14);
        CHECK_THAT(std::abs(a(m)), WithinAbs(1.0, 1e-15));
    }
    // frozen from an independent evaluation
    CHECK(std::abs(a(7) - cplx(0.9988846812208715, 0.0472164549948207)) < 1e-12);
    CHECK_THAT(a.squaredNorm(), WithinAbs(8.0, 1e-12));
}

TEST_CASE("steering derivative matches central differences")
{
    const double th = deg(-35.0);
    const double h = 1e-6;
    const CVec fd = (steering_vector(th + h, 6) - steering_vector(th - h, 6)) / (2.0 * h);
    CHECK((steering_vector_derivative(th, 6) - fd).norm() < 1e-8);
}

TEST_CASE("path loss")
{
    CHECK_THAT(path_loss(1.0, 3.5), WithinRel(1e-3, 1e-15));
    CHECK_THAT(path_loss(10.0, 2.0), WithinRel(1e-5, 1e-14));
    // dB-domain recomputation: -30 dB - 23 log10(40) dB
    CHECK_THAT(path_loss(40.0, 2.3), WithinRel(2.066626623592402e-07, 1e-12));
    CHECK_THROWS_AS(path_loss(0.0, 2.0), std::invalid_argument);
}

TEST_CASE("doppler frequency")
{
    CHECK(doppler_frequency(0.0, 3e9) == 0.0);
    CHECK_THAT(doppler_frequency(speed_of_light / 2.0, 3e9), WithinRel(3e9, 1e-15));
    CHECK_THAT(doppler_frequency(14.0, 3e9), WithinRel(280.19383996644774, 1e-12));
}

TEST_CASE("channel sampling is deterministic")
{
    const SystemConfig cfg = desk_scale_config();
    const ChannelSet a = sample_channels(cfg, 42);
    const ChannelSet b = sample_channels(cfg, 42);
    CHECK(a.G == b.G);
    for (int k = 0; k < 3; ++k)
    {
        CHECK(a.h_a[k] == b.h_a[k]);
        CHECK(a.h_r[k] == b.h_r[k]);
    }
    const ChannelSet c = sample_channels(cfg, 43);
    CHECK(!(a.G == c.G));
}

TEST_CASE("LoS limit of the BS-RIS channel is rank one")
{
    SystemConfig cfg = desk_scale_config();
    cfg.beta.ris = 1e14;
    const ChannelSet ch = sample_channels(cfg, 1);
    Eigen::JacobiSVD<CMat> svd(ch.G);
    const RVec sv = svd.singularValues();
    CHECK(sv(1) / sv(0) < 1e-6);
    const CVec a_n = steering_vector(azimuth(cfg.positions.ris, cfg.positions.bs), cfg.N);
    const CVec a_m = steering_vector(azimuth(cfg.positions.bs, cfg.positions.ris), cfg.M);
    const CMat los = a_n * a_m.adjoint();
    const cplx ratio = ch.G(0, 0) / los(0, 0);
    CHECK((ch.G - ratio * los).norm() <= 1e-6 * ch.G.norm());
}

TEST_CASE("second moment of the direct Bob channel matches its path loss")
{
    const SystemConfig cfg = desk_scale_config();
    const double expected = path_loss(distance(cfg.positions.bs, cfg.positions.bob), cfg.chi.bs_user, cfg.L0);
    double acc = 0.0;
    const int n = 10000;
    for (int s = 0; s < n; ++s)
        acc += std::norm(sample_channels(cfg, static_cast<std::uint64_t>(s)).direct(Node::bob)(0));
    CHECK_THAT(acc / n, WithinRel(expected, 0.05));
}

TEST_CASE("LoS and NLoS power split of the BS-RIS channel follows the Rician factor")
{
    const SystemConfig cfg = desk_scale_config();
    const double gain = path_loss(distance(cfg.positions.bs, cfg.positions.ris), cfg.chi.ris, cfg.L0);
    const CVec a_n = steering_vector(azimuth(cfg.positions.ris, cfg.positions.bs), cfg.N);
    const CVec a_m = steering_vector(azimuth(cfg.positions.bs, cfg.positions.ris), cfg.M);
    const CMat los = std::sqrt(gain * cfg.beta.ris / (1.0 + cfg.beta.ris)) * (a_n * a_m.adjoint());
    double nlos = 0.0;
    const int n = 4000;
    for (int s = 0; s < n; ++s)
        nlos += (sample_channels(cfg, static_cast<std::uint64_t>(s)).G - los).squaredNorm();
    nlos /= n;
    CHECK_THAT(los.squaredNorm() / nlos, WithinRel(cfg.beta.ris, 0.05));
}

TEST_CASE("none mode zeroes every RIS channel but keeps direct links")
{
    SystemConfig cfg = desk_scale_config();
    const ChannelSet active = sample_channels(cfg, 9);
    cfg.ris_mode = RisMode::none;
    const ChannelSet none = sample_channels(cfg, 9);
    CHECK(none.G.norm() == 0.0);
    for (int k = 0; k < 3; ++k)
    {
        CHECK(none.h_r[k].norm() == 0.0);
        CHECK(none.h_a[k] == active.h_a[k]);
    }
}

TEST_CASE("degenerate geometry is rejected")
{
    SystemConfig cfg = desk_scale_config();
    cfg.positions.bob = cfg.positions.ris;
    CHECK_THROWS_AS(sample_channels(cfg, 1), std::invalid_argument);
}

TEST_CASE("config validation")
{
    SystemConfig cfg = desk_scale_config();
    CHECK_NOTHROW(cfg.validate());
    cfg.epsilon = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = desk_scale_config();
    cfg.sigma_w2 = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = desk_scale_config();
    cfg.ris_mode = RisMode::passive;
    CHECK(cfg.eta_n(0) == 1.0);
    CHECK(cfg.sigma_r2_effective() == 0.0);
}

TEST_CASE("targets carry sampled reflection factors and Doppler")
{
    const SystemConfig cfg = desk_scale_config();
    const auto t1 = make_targets(cfg);
    const auto t2 = make_targets(cfg);
    REQUIRE(t1.size() == 2);
    CHECK(t1[0].alpha == t2[0].alpha);
    CHECK_THAT(t1[1].doppler, WithinRel(doppler_frequency(14.0, cfg.f_c), 1e-15));
}
