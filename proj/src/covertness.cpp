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


#include "arisac/covertness.hpp"
#include "arisac/comm.hpp"
#include "arisac/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace arisac
{
    WillieVariances willie_variances(const CVec &w_g, const CVec &w_b, const CMat &W_s, const CVec &phi,
                                     const ChannelSet &channels, const SystemConfig &config)
    {
        const CVec g_w = composite_channel(phi, channels, Node::willie);
        double shield = std::norm(g_w.dot(w_g));
        if (W_s.size() > 0)
            shield += (g_w.adjoint() * W_s).squaredNorm();
        shield += config.sigma_r2_effective() * ris_noise_gain(phi, channels, Node::willie);

        WillieVariances v;
        v.sigma0_sq = shield + config.sigma_w2;
        v.sigma1_sq = v.sigma0_sq + std::norm(g_w.dot(w_b));
        return v;
    }

    WillieVariances willie_variances(const BeamformerSolution &sol, const ChannelSet &channels,
                                     const SystemConfig &config)
    {
        return willie_variances(sol.w_g, sol.w_b, sol.W_s, sol.phi, channels, config);
    }

    double kappa_from_epsilon(double epsilon)
    {
        if (!(epsilon >= 0.0))
            throw std::invalid_argument("kappa_from_epsilon: epsilon must be non-negative");
        const double target = 2.0 * epsilon * epsilon;
        if (target == 0.0)
            return 1.0;
        auto f = [target](double x) { return std::log(x) + 1.0 / x - 1.0 - target; };

        double lo = 1.0;
        double hi = 1.0 + 10.0 * epsilon + 10.0 * epsilon * epsilon;
        while (f(hi) < 0.0)
        {
            lo = hi;
            hi *= 2.0;
        }
        for (int it = 0; it < 400; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi)
                break;
            (f(mid) < 0.0 ? lo : hi) = mid;
        }
        // pick whichever bracket end has the smaller residual
        return std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
    }

    double kl_divergence(double sigma0_sq, double sigma1_sq)
    {
        if (!(sigma0_sq > 0.0) || !(sigma1_sq > 0.0))
            throw std::invalid_argument("kl_divergence: variances must be positive");
        const double r = sigma0_sq / sigma1_sq;
        // ln(1/r) + r - 1, written to stay accurate when r is close to 1
        return r - 1.0 - std::log1p(r - 1.0);
    }

    double optimal_threshold(double sigma0_sq, double sigma1_sq)
    {
        if (!(sigma1_sq > sigma0_sq))
            throw std::domain_error("optimal_threshold: requires sigma1^2 > sigma0^2");
        const double d = sigma1_sq - sigma0_sq;
        return sigma0_sq * sigma1_sq / d * std::log(sigma1_sq / sigma0_sq);
    }

    double min_dep(double sigma0_sq, double sigma1_sq)
    {
        if (!(sigma0_sq > 0.0) || !(sigma1_sq > 0.0))
            throw std::invalid_argument("min_dep: variances must be positive");
        if (!(sigma1_sq > sigma0_sq))
            return 1.0;
        const double d = sigma1_sq - sigma0_sq;
        const double log_r = std::log(sigma1_sq / sigma0_sq);
        const double v = 1.0 + std::exp(-sigma1_sq / d * log_r) - std::exp(-sigma0_sq / d * log_r);
        return std::clamp(v, 0.0, 1.0);
    }

    WillieStats make_willie_stats(double sigma0_sq, double sigma1_sq, double epsilon)
    {
        WillieStats s;
        s.sigma0_sq = sigma0_sq;
        s.sigma1_sq = sigma1_sq;
        s.kappa = kappa_from_epsilon(epsilon);
        s.tau_star = sigma1_sq > sigma0_sq ? optimal_threshold(sigma0_sq, sigma1_sq) : 0.0;
        return s;
    }

    namespace
    {
        struct ShardCounts
        {
            long long false_alarm = 0;
            long long miss = 0;
        };

        double observe(std::mt19937_64 &eng, std::exponential_distribution<double> &unit, double var, int obs)
        {
            double acc = 0.0;
            for (int i = 0; i < obs; ++i)
                acc += var * unit(eng);
            return acc / obs;
        }
    } // namespace

    DepEstimate simulate_willie_detector(const WillieStats &stats, long long trials, std::uint64_t seed,
                                         int observations, int workers)
    {
        if (trials < 1)
            throw std::invalid_argument("simulate_willie_detector: trials must be positive");
        if (observations < 1)
            throw std::invalid_argument("simulate_willie_detector: observations must be positive");
        if (!(stats.sigma1_sq > stats.sigma0_sq))
            return {1.0, 0.0, trials};

        constexpr int shards = 64;
        std::vector<ShardCounts> counts(shards);
        const double tau = stats.tau_star;

        auto run_shard = [&](int s)
        {
            const long long n = trials / shards + (s < trials % shards ? 1 : 0);
            std::mt19937_64 eng(derive_seed(seed, static_cast<std::uint64_t>(s)));
            std::exponential_distribution<double> unit(1.0);
            ShardCounts c;
            for (long long i = 0; i < n; ++i)
            {
                // |y|^2 of a CN(0, var) sample is exponential with mean var
                if (observe(eng, unit, stats.sigma0_sq, observations) > tau)
                    ++c.false_alarm;
                if (observe(eng, unit, stats.sigma1_sq, observations) < tau)
                    ++c.miss;
            }
            counts[s] = c;
        };

        const int nw = std::clamp(workers, 1, shards);
        if (nw == 1)
        {
            for (int s = 0; s < shards; ++s)
                run_shard(s);
        }
        else
        {
            std::vector<std::jthread> pool;
            for (int w = 0; w < nw; ++w)
                pool.emplace_back([&, w]
                                  {
                                      for (int s = w; s < shards; s += nw)
                                          run_shard(s);
                                  });
        }

        ShardCounts total;
        for (const auto &c : counts)
        {
            total.false_alarm += c.false_alarm;
            total.miss += c.miss;
        }
        const double n = static_cast<double>(trials);
        const double pfa = total.false_alarm / n;
        const double pmd = total.miss / n;
        DepEstimate out;
        out.dep = pfa + pmd;
        out.std_error = std::sqrt(pfa * (1.0 - pfa) / n + pmd * (1.0 - pmd) / n);
        out.trials = trials;
        return out;
    }

    double covertness_margin(const WillieVariances &v, double kappa) { return v.sigma1_sq - kappa * v.sigma0_sq; }

    double covertness_margin(const BeamformerSolution &sol, const ChannelSet &channels, const SystemConfig &config,
                             double kappa)
    {
        return covertness_margin(willie_variances(sol, channels, config), kappa);
    }
} // namespace arisac
