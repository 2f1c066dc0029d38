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


#include "arisac/optimizer.hpp"
#include "arisac/covertness.hpp"
#include "arisac/linalg.hpp"
#include "arisac/random.hpp"
#include "arisac/verify.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace arisac
{
    // ---- lifted parameters ----------------------------------------------------------------------

    LiftedParameters build_lifted(const ChannelSet &channels, const CVec &phi, const CMat &W)
    {
        const auto N = channels.G.rows();
        const auto M = channels.G.cols();
        if (phi.size() != N || W.rows() != M)
            throw std::invalid_argument("build_lifted: dimension mismatch");

        LiftedParameters lp;
        const CMat PG = phi.asDiagonal() * channels.G;
        lp.Psi = phi * phi.adjoint();
        lp.Gamma = PG.adjoint() * PG;

        const CMat GW = channels.G * W;
        lp.Pi = CMat::Zero(N + 1, N + 1);
        lp.Pi.topLeftCorner(N, N).setIdentity();
        for (Eigen::Index j = 0; j < W.cols(); ++j)
        {
            CMat S = CMat::Zero(N + 1, N + 1);
            S.diagonal().head(N) = GW.col(j).cwiseAbs2().cast<cplx>();
            lp.S.push_back(std::move(S));
        }

        for (int k = 0; k < 3; ++k)
        {
            const Node node = static_cast<Node>(k);
            const CVec &h_a = channels.direct(node);
            const CVec &h_r = channels.reflected(node);
            const CVec g = composite_channel(phi, channels, node);
            lp.Upsilon[k] = g * g.adjoint();
            lp.H_r[k] = h_r * h_r.adjoint();

            lp.Omega[k] = CMat::Zero(N + 1, N + 1);
            lp.Omega[k].diagonal().head(N) = h_r.cwiseAbs2().cast<cplx>();

            CMat Cbar(N + 1, M);
            Cbar.topRows(N) = h_r.conjugate().asDiagonal() * channels.G;
            Cbar.row(N) = h_a.adjoint();
            lp.C[k] = Cbar * Cbar.adjoint();

            for (Eigen::Index j = 0; j < W.cols(); ++j)
            {
                const CVec lbar = Cbar * W.col(j);
                lp.Lambda[k].push_back(lbar * lbar.adjoint());
            }
        }
        return lp;
    }

    CVec lift_reflection(const CVec &phi)
    {
        CVec u(phi.size() + 1);
        u.head(phi.size()) = phi.conjugate();
        u(phi.size()) = 1.0;
        return u;
    }

    CVec reflection_from_lift(const CVec &u)
    {
        const auto N = u.size() - 1;
        const cplx last = u(N);
        if (std::abs(last) == 0.0)
            throw std::domain_error("reflection_from_lift: last entry is zero");
        return (u.head(N) / last).conjugate();
    }

    // ---- penalty linearization ------------------------------------------------------------------

    double SpectralBound::value(const CMat &X) const
    {
        return -norm - (q.adjoint() * (X - anchor) * q)(0).real();
    }

    double SpectralBound::penalty(const CMat &X) const
    {
        return X.trace().real() - (q.adjoint() * X * q)(0).real();
    }

    SpectralBound spectral_linearization(const CMat &X_prev)
    {
        SpectralBound b;
        const Eigenpair e = top_eigenpair(X_prev);
        b.norm = spectral_norm(X_prev);
        b.q = e.vector;
        b.anchor = X_prev;
        return b;
    }

    // ---- rank-one extraction --------------------------------------------------------------------

    RankOneFactor extract_rank_one(const CMat &X)
    {
        const CMat H = hermitianize(X);
        Eigen::SelfAdjointEigenSolver<CMat> es(H);
        const auto n = H.rows();
        const RVec &lam = es.eigenvalues();
        const double top = lam(n - 1);

        RankOneFactor out;
        if (!(top > 0.0))
        {
            out.vector = CVec::Zero(n);
            out.residual = H.norm() > 0.0 ? 1.0 : 0.0;
            return out;
        }

        // repeated top eigenvalue: pick the lexicographically smallest phase pattern
        CVec q = normalize_phase(es.eigenvectors().col(n - 1), 1e-12);
        for (Eigen::Index k = n - 2; k >= 0 && top - lam(k) <= 1e-12 * top; --k)
        {
            const CVec c = normalize_phase(es.eigenvectors().col(k), 1e-12);
            for (Eigen::Index i = 0; i < n; ++i)
            {
                const double a = std::arg(c(i));
                const double b = std::arg(q(i));
                if (std::abs(a - b) > 1e-12)
                {
                    if (a < b)
                        q = c;
                    break;
                }
            }
        }

        out.vector = std::sqrt(top) * q;
        out.residual = (H - out.vector * out.vector.adjoint()).norm() / H.norm();
        return out;
    }

    std::vector<CVec> gaussian_candidates(const CMat &X, int count, std::uint64_t seed)
    {
        Eigen::SelfAdjointEigenSolver<CMat> es(hermitianize(X));
        const double floor = 1e-12 * std::max(0.0, es.eigenvalues().maxCoeff());
        const RVec root = es.eigenvalues().unaryExpr([floor](double l) { return l > floor ? std::sqrt(l) : 0.0; });
        const CMat B = es.eigenvectors() * root.cast<cplx>().asDiagonal();
        Rng rng(seed);
        std::vector<CVec> out;
        out.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i)
            out.push_back(B * rng.complex_normal_vector(static_cast<int>(X.rows())));
        return out;
    }

    // ---- sensing model --------------------------------------------------------------------------

    SensingModel::SensingModel(const SystemConfig &config)
        : comps_(build_fisher_components(make_targets(config), config)), map_(comps_)
    {
        const CMat R = CMat::Identity(config.M, config.M) * (config.P_a_max / config.M);
        const RMat F = fisher_information(R, comps_);
        scale_ = F.diagonal().cwiseMax(0.0).cwiseSqrt();
        if (!(scale_.minCoeff() > 0.0))
            throw std::domain_error("SensingModel: a target parameter carries no Fisher information");
    }

    double SensingModel::crb(const CMat &R) const
    {
        try
        {
            return crb_trace(fisher_information(R, comps_));
        }
        catch (const std::domain_error &)
        {
            return std::numeric_limits<double>::quiet_NaN();
        }
    }

    namespace
    {
        ConicSettings solver_settings(const SystemConfig &config)
        {
            ConicSettings s;
            s.tolerance = config.tolerances.solver;
            return s;
        }

        /// Schur block [[J, I], [I, T]] >= 0 for a symmetric J; returns T.
        BlockId add_schur(ConicProblem &p, BlockId J, int d)
        {
            const BlockId T = p.add_block("T", d, BlockKind::symmetric_psd);
            LmiConstraint lmi;
            lmi.name = "schur(J)";
            lmi.dim = 2 * d;
            lmi.constant = RMat::Zero(2 * d, 2 * d);
            lmi.constant.block(0, d, d, d).setIdentity();
            lmi.constant.block(d, 0, d, d).setIdentity();
            lmi.terms.push_back({J.index, p.placement_images(J, 2 * d, 0)});
            lmi.terms.push_back({T.index, p.placement_images(T, 2 * d, d)});
            p.add_lmi(std::move(lmi));
            return T;
        }

        /// A transmit covariance block: either a full Hermitian matrix or p * d d^H for a fixed direction.
        struct BeamVar
        {
            BlockId id;
            std::optional<CVec> dir;
        };

        BeamVar make_beam(ConicProblem &p, const std::string &name, int M, const std::optional<CVec> &dir)
        {
            if (dir)
                return {p.add_block(name, 1, BlockKind::symmetric_psd), dir->normalized()};
            return {p.add_block(name, M, BlockKind::hermitian_psd), std::nullopt};
        }

        void add_quadratic(LinearExpr &e, const BeamVar &v, const CMat &C, double s)
        {
            if (v.dir)
                e.add_coeffs(v.id, RVec::Constant(1, s * (v.dir->adjoint() * C * *v.dir)(0).real()));
            else
                e.add_trace(v.id, CMat(s * C));
        }

        CMat beam_value(const BeamVar &v, const ConicSolution &sol, const ConicProblem &p)
        {
            if (v.dir)
                return std::max(0.0, sol.coords(v.id)(0)) * (*v.dir) * v.dir->adjoint();
            return sol.hermitian(v.id, p);
        }

        std::vector<RMat> fim_images(const BeamVar &v, const SensingModel &sm, double power)
        {
            const RVec dinv = sm.scale().cwiseInverse();
            auto scaled = [&](const RMat &F) -> RMat { return power * dinv.asDiagonal() * F * dinv.asDiagonal(); };
            std::vector<RMat> out;
            if (v.dir)
                out.push_back(scaled(sm.map().evaluate(*v.dir * v.dir->adjoint())));
            else
                for (const auto &img : sm.map().images())
                    out.push_back(scaled(img));
            return out;
        }

        struct TransmitModel
        {
            ConicProblem problem;
            BeamVar g, b;
            std::optional<BeamVar> s;
            double snr_scale = 0.0; // P_a / (Bob's noise)
        };

        struct TransmitOptions
        {
            std::optional<CVec> dir_g, dir_b;
            const std::vector<SpectralBound> *anchors = nullptr;
            double penalty_weight = 0.0;
            bool crb = true;
        };

        // All powers are normalized by P_a and every constraint by its natural noise or budget scale.
        TransmitModel build_transmit(const CVec &phi, const ChannelSet &ch, const SystemConfig &cfg,
                                     const SensingModel &sm, const TransmitOptions &opt)
        {
            const int M = cfg.M;
            const double Pa = cfg.P_a_max;
            const double sr2 = cfg.sigma_r2_effective();
            const double kappa = kappa_from_epsilon(cfg.epsilon);
            const double gamma = cfg.gamma_th();
            const LiftedParameters lp = build_lifted(ch, phi, CMat(M, 0));
            const auto &Ups = lp.Upsilon;
            constexpr int G = static_cast<int>(Node::grace);
            constexpr int B = static_cast<int>(Node::bob);
            constexpr int W = static_cast<int>(Node::willie);

            TransmitModel m;
            auto &p = m.problem;
            m.g = make_beam(p, "W_g", M, opt.dir_g);
            m.b = make_beam(p, "W_b", M, opt.dir_b);
            if (cfg.scheme == Scheme::with_dss)
                m.s = make_beam(p, "W_s", M, std::nullopt);
            std::vector<const BeamVar *> all{&m.g, &m.b};
            if (m.s)
                all.push_back(&*m.s);

            const double noise_b = cfg.sigma_b2 + sr2 * ris_noise_gain(phi, ch, Node::bob);
            m.snr_scale = Pa / noise_b;

            LinearExpr obj;
            add_quadratic(obj, m.b, Ups[B], m.snr_scale);
            if (opt.anchors && opt.penalty_weight > 0.0)
            {
                const BeamVar *vars[2] = {&m.g, &m.b};
                for (int i = 0; i < 2; ++i)
                {
                    if (vars[i]->dir)
                        continue;
                    const CVec &q = (*opt.anchors)[static_cast<std::size_t>(i)].q;
                    const CMat P = CMat::Identity(M, M) - q * q.adjoint();
                    obj.add_trace(vars[i]->id, CMat(-opt.penalty_weight * P));
                }
            }
            p.maximize(obj);

            LinearExpr power;
            for (const auto *v : all)
                add_quadratic(power, *v, CMat::Identity(M, M), 1.0);
            p.add_constraint("transmit_power", power, Sense::less_equal, 1.0);

            LinearExpr order;
            add_quadratic(order, m.g, CMat::Identity(M, M), 1.0);
            add_quadratic(order, m.b, CMat::Identity(M, M), -1.0);
            p.add_constraint("power_order", order, Sense::greater_equal, 0.0);

            LinearExpr qos;
            add_quadratic(qos, m.g, Ups[G], Pa / cfg.sigma_g2);
            add_quadratic(qos, m.b, Ups[G], -gamma * Pa / cfg.sigma_g2);
            p.add_constraint("grace_qos", qos, Sense::greater_equal,
                             gamma * (1.0 + sr2 * ris_noise_gain(phi, ch, Node::grace) / cfg.sigma_g2));

            if (cfg.ris_mode == RisMode::active)
            {
                LinearExpr ris;
                for (const auto *v : all)
                    add_quadratic(ris, *v, lp.Gamma, Pa / cfg.P_r_max);
                p.add_constraint("ris_power", ris, Sense::less_equal,
                                 1.0 - phi.squaredNorm() * sr2 / cfg.P_r_max);
            }

            LinearExpr cov;
            add_quadratic(cov, m.b, Ups[W], Pa / cfg.sigma_w2);
            add_quadratic(cov, m.g, Ups[W], (1.0 - kappa) * Pa / cfg.sigma_w2);
            if (m.s)
                add_quadratic(cov, *m.s, Ups[W], (1.0 - kappa) * Pa / cfg.sigma_w2);
            p.add_constraint("covertness", cov, Sense::less_equal,
                             (kappa - 1.0) * (1.0 + sr2 * ris_noise_gain(phi, ch, Node::willie) / cfg.sigma_w2));

            if (opt.crb && std::isfinite(cfg.mu))
            {
                // F(R) >= J in the coordinates J' = D^{-1} J D^{-1}, where tr(J^{-1}) = sum_i T_ii / d_i^2
                const int d = sm.components().dim();
                const BlockId J = p.add_block("J", d, BlockKind::symmetric_psd);
                LmiConstraint lmi;
                lmi.name = "fim";
                lmi.dim = d;
                lmi.constant = RMat::Zero(d, d);
                for (const auto *v : all)
                    lmi.terms.push_back({v->id.index, fim_images(*v, sm, Pa)});
                lmi.terms.push_back({J.index, p.placement_images(J, d, 0, -1.0)});
                p.add_lmi(std::move(lmi));
                const RVec w = sm.scale().cwiseAbs2().cwiseInverse() / cfg.mu;
                add_trace_inverse_constraint(p, J, 1.0, w);
            }
            return m;
        }

        struct TransmitSolve
        {
            TransmitModel model;
            ConicSolution solution;
        };

        // The CRB constraint is added only when the optimum without it violates the threshold, so a
        // slack threshold never perturbs the solver path and looser thresholds give identical results.
        TransmitSolve solve_screened(const CVec &phi, const ChannelSet &ch, const SystemConfig &cfg,
                                     const SensingModel &sm, TransmitOptions opt)
        {
            if (std::isfinite(cfg.mu))
            {
                opt.crb = false;
                TransmitSolve free{build_transmit(phi, ch, cfg, sm, opt), {}};
                free.solution = solve(free.model.problem, solver_settings(cfg));
                if (free.solution.ok())
                {
                    const auto &m = free.model;
                    CMat R = beam_value(m.g, free.solution, m.problem) + beam_value(m.b, free.solution, m.problem);
                    if (m.s)
                        R += beam_value(*m.s, free.solution, m.problem);
                    const double crb = sm.crb(cfg.P_a_max * R);
                    if (crb <= cfg.mu)
                        return free;
                }
                opt.crb = true;
            }
            TransmitSolve out{build_transmit(phi, ch, cfg, sm, opt), {}};
            out.solution = solve(out.model.problem, solver_settings(cfg));
            return out;
        }

        int scheme_index(const SystemConfig &cfg, int transmit_or_reflect)
        {
            return (cfg.scheme == Scheme::with_dss ? 2 : 0) + transmit_or_reflect;
        }

        CMat sensing_factor(const CMat &Ws)
        {
            Eigen::SelfAdjointEigenSolver<CMat> es(hermitianize(Ws));
            const RVec root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
            return es.eigenvectors() * root.cast<cplx>().asDiagonal();
        }

        void refresh(BeamformerSolution &sol, const ChannelSet &ch, const SystemConfig &cfg, const SensingModel &sm)
        {
            sol.rates = achievable_rates(sol, ch, cfg);
            sol.crb = sm.crb(sol.covariance());
            sol.covert_margin = covertness_margin(sol, ch, cfg, kappa_from_epsilon(cfg.epsilon));
        }

        double rate_of(const BeamformerSolution &s) { return s.rates.R_b_sb; }

        double elapsed(std::chrono::steady_clock::time_point t0)
        {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    } // namespace

    ConicProblem minimum_crb_problem(const SensingModel &sensing, int M, double power)
    {
        const int d = sensing.components().dim();
        ConicProblem p;
        const BeamVar R = make_beam(p, "R", M, std::nullopt);
        const BlockId J = p.add_block("J", d, BlockKind::symmetric_psd);
        LmiConstraint lmi;
        lmi.name = "fim";
        lmi.dim = d;
        lmi.constant = RMat::Zero(d, d);
        lmi.terms.push_back({R.id.index, fim_images(R, sensing, power)});
        lmi.terms.push_back({J.index, p.placement_images(J, d, 0, -1.0)});
        p.add_lmi(std::move(lmi));
        const BlockId T = add_schur(p, J, d);

        LinearExpr tr;
        add_quadratic(tr, R, CMat::Identity(M, M), 1.0);
        p.add_constraint("power", tr, Sense::less_equal, 1.0);

        // sum_i T_ii / d_i^2, rescaled so the largest weight is one
        const RVec w = sensing.scale().cwiseAbs2().cwiseInverse();
        RVec c = RVec::Zero(symmetric_coords(d));
        c.head(d) = w / w.maxCoeff();
        LinearExpr obj;
        obj.add_coeffs(T, c);
        p.minimize(obj);
        return p;
    }

    double minimum_crb(const SystemConfig &config, double power)
    {
        const SensingModel sm(config);
        const ConicProblem p = minimum_crb_problem(sm, config.M, power);
        // the weights span the parameter scales (angles vs Doppler), so the dual residual of the
        // negligible angle terms stalls early; the returned value is re-evaluated exactly below
        ConicSettings st = solver_settings(config);
        st.reduced_tolerance = 1e-5;
        const ConicSolution sol = solve(p, st);
        if (!sol.ok())
            throw std::runtime_error("minimum_crb: solver returned " + std::string(to_string(sol.status)));
        // report the exact CRB of the optimal covariance rather than the relaxed objective
        const double exact = sm.crb(power * sol.hermitian(BlockId{0}, p));
        const double wmax = sm.scale().cwiseAbs2().cwiseInverse().maxCoeff();
        return std::isnan(exact) ? sol.objective * wmax : exact;
    }

    ConicProblem transmit_problem(const CVec &phi, const ChannelSet &channels, const SystemConfig &config,
                                  const SensingModel &sensing)
    {
        return build_transmit(phi, channels, config, sensing, {}).problem;
    }

    // ---- transmit subproblem --------------------------------------------------------------------

    TransmitResult solve_transmit(const CVec &phi, const ChannelSet &channels, const SystemConfig &config,
                                  const SensingModel &sensing, const BeamformerSolution &anchor,
                                  PenaltyState &penalty)
    {
        const double Pa = config.P_a_max;
        penalty.iota = config.penalty.iota[static_cast<std::size_t>(scheme_index(config, 0))];
        penalty.shrink = config.penalty.c1;
        penalty.anchors = {spectral_linearization(anchor.w_g * anchor.w_g.adjoint() / Pa),
                           spectral_linearization(anchor.w_b * anchor.w_b.adjoint() / Pa)};
        penalty.iterations = 0;

        const CVec g_b = composite_channel(phi, channels, Node::bob);
        const double noise_b =
            config.sigma_b2 + config.sigma_r2_effective() * ris_noise_gain(phi, channels, Node::bob);
        const double s_obj = Pa * g_b.squaredNorm() / noise_b; // best achievable SNR

        TransmitResult out;
        for (int t = 0; t < config.penalty.max_iterations; ++t)
        {
            TransmitOptions opt;
            opt.anchors = &penalty.anchors;
            opt.penalty_weight = s_obj / penalty.iota;
            const TransmitSolve ts = solve_screened(phi, channels, config, sensing, opt);
            const TransmitModel &m = ts.model;
            const ConicSolution &sol = ts.solution;
            ++penalty.iterations;
            if (!sol.ok())
            {
                if (t == 0)
                {
                    out.status = sol.status;
                    out.message = "transmit subproblem " + std::string(to_string(sol.status));
                    return out;
                }
                break; // keep the last accurate iterate
            }
            const CMat Wg = beam_value(m.g, sol, m.problem);
            const CMat Wb = beam_value(m.b, sol, m.problem);
            out.status = SolveStatus::optimal;
            out.W_g = Pa * Wg;
            out.W_b = Pa * Wb;
            out.W_s = m.s ? CMat(Pa * beam_value(*m.s, sol, m.problem)) : CMat();
            out.lifted_snr = m.snr_scale * (g_b.adjoint() * Wb * g_b)(0).real();
            out.residual = std::max(rank_one_residual(Wg), rank_one_residual(Wb));
            penalty.residual = out.residual;
            penalty.anchors = {spectral_linearization(Wg), spectral_linearization(Wb)};
            penalty.iota *= penalty.shrink;
            if (out.residual <= config.tolerances.xi2)
                break;
        }
        out.penalty_iterations = penalty.iterations;
        return out;
    }

    std::optional<BeamformerSolution> polish_transmit(const CVec &phi, const CVec &dir_g, const CVec &dir_b,
                                                      const ChannelSet &channels, const SystemConfig &config,
                                                      const SensingModel &sensing)
    {
        if (!(dir_g.norm() > 0.0) || !(dir_b.norm() > 0.0))
            return std::nullopt;
        TransmitOptions opt;
        opt.dir_g = dir_g;
        opt.dir_b = dir_b;
        const TransmitSolve ts = solve_screened(phi, channels, config, sensing, opt);
        const TransmitModel &m = ts.model;
        const ConicSolution &sol = ts.solution;
        if (!sol.ok())
            return std::nullopt;

        const double Pa = config.P_a_max;
        BeamformerSolution s;
        s.scheme = config.scheme;
        s.ris_mode = config.ris_mode;
        s.phi = phi;
        s.w_g = normalize_phase(std::sqrt(Pa * std::max(0.0, sol.coords(m.g.id)(0))) * *m.g.dir);
        s.w_b = normalize_phase(std::sqrt(Pa * std::max(0.0, sol.coords(m.b.id)(0))) * *m.b.dir);
        if (m.s)
            s.W_s = sensing_factor(Pa * beam_value(*m.s, sol, m.problem));
        refresh(s, channels, config, sensing);
        return s;
    }

    // ---- reflection subproblem ------------------------------------------------------------------

    ReflectResult solve_reflect(const BeamformerSolution &current, const ChannelSet &channels,
                                const SystemConfig &config, PenaltyState &penalty, DinkelbachState &dinkelbach)
    {
        const int N = config.N;
        const int n = N + 1;
        const double sr2 = config.sigma_r2_effective();
        const double kappa = kappa_from_epsilon(config.epsilon);
        const double gamma = config.gamma_th();
        const CMat W = stacked_beamformers(current);
        const LiftedParameters lp = build_lifted(channels, current.phi, W);
        constexpr int G = static_cast<int>(Node::grace);
        constexpr int B = static_cast<int>(Node::bob);
        constexpr int Wi = static_cast<int>(Node::willie);
        constexpr int jb = 1; // Bob's column

        double tr_scale = 1.0;
        for (int i = 0; i < N; ++i)
            tr_scale += config.eta_n(i) * config.eta_n(i);

        penalty.iota = config.penalty.iota[static_cast<std::size_t>(scheme_index(config, 1))];
        penalty.shrink = config.penalty.c2;
        const CVec u0 = lift_reflection(current.phi);
        penalty.anchors = {spectral_linearization(u0 * u0.adjoint())};
        penalty.iterations = 0;

        const double sb = config.sigma_b2;
        auto f_num = [&](const CMat &U) { return (lp.Lambda[B][jb] * U).trace().real() / sb; };
        auto f_noise = [&](const CMat &U) { return (sr2 * (lp.Omega[B] * U).trace().real() + sb) / sb; };

        ReflectResult out;
        dinkelbach.iterations = 0;
        for (int t = 0; t < config.penalty.max_iterations; ++t)
        {
            const double weight = 1.0 / (penalty.iota * tr_scale);
            const CVec &q = penalty.anchors.front().q;
            const CMat P = CMat::Identity(n, n) - q * q.adjoint();

            ConicProblem p;
            const BlockId Ub = p.add_block("U", n, BlockKind::hermitian_psd);
            {
                LinearExpr sic;
                sic.add_trace(Ub, CMat((lp.C[B] - (1.0 + 1e-9) * lp.C[G]) / sb));
                p.add_constraint("sic_order", sic, Sense::greater_equal, 0.0);

                LinearExpr qos;
                CMat Cq = lp.Lambda[G][0] - gamma * lp.Lambda[G][jb] - gamma * sr2 * lp.Omega[G];
                qos.add_trace(Ub, CMat(Cq / config.sigma_g2));
                p.add_constraint("grace_qos", qos, Sense::greater_equal, gamma);

                if (config.ris_mode == RisMode::active)
                {
                    CMat Cr = sr2 * lp.Pi;
                    for (const auto &S : lp.S)
                        Cr += S;
                    LinearExpr ris;
                    ris.add_trace(Ub, CMat(Cr / config.P_r_max));
                    p.add_constraint("ris_power", ris, Sense::less_equal, 1.0);
                }

                CMat Cc = lp.Lambda[Wi][jb] + (1.0 - kappa) * sr2 * lp.Omega[Wi];
                for (std::size_t j = 0; j < lp.Lambda[Wi].size(); ++j)
                    if (static_cast<int>(j) != jb)
                        Cc += (1.0 - kappa) * lp.Lambda[Wi][j];
                LinearExpr cov;
                cov.add_trace(Ub, CMat(Cc / config.sigma_w2));
                p.add_constraint("covertness", cov, Sense::less_equal, kappa - 1.0);

                for (int i = 0; i < N; ++i)
                {
                    CMat E = CMat::Zero(n, n);
                    const double cap = config.eta_n(i) * config.eta_n(i);
                    E(i, i) = 1.0 / cap;
                    LinearExpr amp;
                    amp.add_trace(Ub, E);
                    p.add_constraint("amplitude_" + std::to_string(i), amp,
                                     config.ris_mode == RisMode::passive ? Sense::equal : Sense::less_equal, 1.0);
                }
                CMat E = CMat::Zero(n, n);
                E(N, N) = 1.0;
                LinearExpr last;
                last.add_trace(Ub, E);
                p.add_constraint("anchor", last, Sense::equal, 1.0);
            }

            dinkelbach.u = config.dinkelbach.u_init;
            CMat U;
            bool solved = false;
            for (int l = 0; l < config.dinkelbach.max_iterations; ++l)
            {
                // f1 - u (noise + weight * penalty)
                LinearExpr obj;
                obj.add_trace(Ub, CMat(lp.Lambda[B][jb] / sb - dinkelbach.u * (sr2 * lp.Omega[B] / sb + weight * P)));
                obj.add_constant(-dinkelbach.u);
                p.maximize(obj);
                const ConicSolution sol = solve(p, solver_settings(config));
                ++dinkelbach.iterations;
                if (!sol.ok())
                {
                    if (!solved)
                    {
                        out.status = sol.status;
                        out.message = "reflection subproblem " + std::string(to_string(sol.status));
                        out.dinkelbach_iterations = dinkelbach.iterations;
                        return out;
                    }
                    break;
                }
                solved = true;
                U = sol.hermitian(Ub, p);
                dinkelbach.f_num = f_num(U);
                dinkelbach.f_den = f_noise(U) + weight * std::max(0.0, penalty.anchors.front().penalty(U));
                dinkelbach.surrogate = dinkelbach.f_num - dinkelbach.u * dinkelbach.f_den;
                const double next = dinkelbach.f_num / dinkelbach.f_den;
                if (dinkelbach.surrogate <= 1e-8 * std::max(1.0, dinkelbach.f_num))
                    break;
                dinkelbach.u = std::max(next, config.dinkelbach.u_init);
            }
            out.status = SolveStatus::optimal;
            out.U = U;
            out.lifted_snr = f_num(U) / f_noise(U);
            out.residual = rank_one_residual(U);
            penalty.residual = out.residual;
            penalty.anchors = {spectral_linearization(U)};
            penalty.iota *= penalty.shrink;
            if (out.residual <= config.tolerances.xi3)
                break;
        }

        const RankOneFactor r = extract_rank_one(out.U);
        CVec phi = reflection_from_lift(r.vector);
        for (int i = 0; i < N; ++i)
        {
            const double a = std::abs(phi(i));
            if (config.ris_mode == RisMode::passive)
                phi(i) = a > 0.0 ? phi(i) / a : cplx(1.0, 0.0);
            else if (a > config.eta_n(i))
                phi(i) *= config.eta_n(i) / a;
        }
        out.phi = phi;
        out.penalty_iterations = penalty.iterations;
        out.dinkelbach_iterations = dinkelbach.iterations;
        return out;
    }

    // ---- initialization -------------------------------------------------------------------------

    namespace
    {
        [[noreturn]] void sic_failure()
        {
            throw std::runtime_error(
                "SIC order infeasible: Bob's composite channel is weaker than Grace's for this realization. "
                "Resample the channels with a different seed; Bob and Grace are never swapped.");
        }

        CVec aligned_reflection(const SystemConfig &cfg, const ChannelSet &ch)
        {
            const int N = cfg.N;
            CVec phi = CVec::Zero(N);
            if (!cfg.has_ris())
                return phi;
            // phase of conj(h_rb,n) (G h_ab)_n is removed so each cascade adds to the direct path
            const CVec Gh = ch.G * ch.direct(Node::bob);
            double rho = std::numeric_limits<double>::infinity();
            if (cfg.ris_mode == RisMode::active)
            {
                const double g2 = ch.G.squaredNorm();
                rho = std::sqrt(cfg.P_r_max / (g2 * cfg.P_a_max + N * cfg.sigma_r2_effective())) * (1.0 - 1e-9);
            }
            for (int n = 0; n < N; ++n)
            {
                const cplx z = std::conj(ch.reflected(Node::bob)(n)) * Gh(n);
                const double amp = cfg.ris_mode == RisMode::passive ? 1.0 : std::min(cfg.eta_n(n), rho);
                phi(n) = std::polar(amp, -std::arg(z));
            }
            return phi;
        }

        std::optional<BeamformerSolution> best_polished(const std::vector<std::pair<CVec, CVec>> &dirs,
                                                        const CVec &phi, const ChannelSet &ch,
                                                        const SystemConfig &cfg, const SensingModel &sm)
        {
            std::optional<BeamformerSolution> best;
            for (const auto &[dg, db] : dirs)
            {
                auto s = polish_transmit(phi, dg, db, ch, cfg, sm);
                if (s && verify_solution(*s, ch, cfg).feasible(1e-7) && (!best || rate_of(*s) > rate_of(*best)))
                    best = std::move(s);
            }
            return best;
        }

        /// Rank-one candidates of a transmit solve, with Gaussian randomization when the rank residual is large.
        std::vector<std::pair<CVec, CVec>> transmit_directions(const TransmitResult &tr, std::uint64_t seed)
        {
            std::vector<std::pair<CVec, CVec>> dirs;
            const CVec dg = extract_rank_one(tr.W_g).vector;
            const CVec db = extract_rank_one(tr.W_b).vector;
            dirs.emplace_back(dg, db);
            // a tight CRB pulls the total covariance towards a single sensing beam; sharing it keeps
            // the CRB reachable when the per-signal directions cannot
            CMat total = tr.W_g + tr.W_b;
            if (tr.W_s.size() > 0)
                total += tr.W_s;
            const CVec v = extract_rank_one(total).vector;
            dirs.emplace_back(v, v);
            dirs.emplace_back(dg, v);
            dirs.emplace_back(v, db);
            if (tr.residual > 1e-3)
            {
                const auto cg = gaussian_candidates(tr.W_g, 200, derive_seed(seed, 1));
                const auto cb = gaussian_candidates(tr.W_b, 200, derive_seed(seed, 2));
                for (std::size_t i = 0; i < cg.size(); ++i)
                    dirs.emplace_back(cg[i], cb[i]);
            }
            return dirs;
        }
    } // namespace

    bool sic_admissible(const SystemConfig &config, const ChannelSet &channels)
    {
        return sic_feasible(aligned_reflection(config, channels), channels);
    }

    BeamformerSolution initialize(const SystemConfig &config, const ChannelSet &channels,
                                  const SensingModel &sensing)
    {
        config.validate();
        const double Pa = config.P_a_max;
        CVec phi = aligned_reflection(config, channels);
        if (!sic_feasible(phi, channels))
            sic_failure();

        const CVec g_g = composite_channel(phi, channels, Node::grace);
        const CVec g_b = composite_channel(phi, channels, Node::bob);

        BeamformerSolution s;
        s.scheme = config.scheme;
        s.ris_mode = config.ris_mode;
        s.seed = channels.seed;
        s.phi = phi;
        s.w_g = normalize_phase(std::sqrt(0.75 * Pa) * g_g.normalized());
        const CVec wb_full = normalize_phase(std::sqrt(0.25 * Pa) * g_b.normalized());
        if (config.scheme == Scheme::with_dss)
            s.W_s = CMat::Zero(config.M, config.M);

        auto feasible_at = [&](double scale)
        {
            BeamformerSolution t = s;
            t.w_b = scale * wb_full;
            return verify_solution(t, channels, config).feasible(1e-10);
        };

        if (feasible_at(0.0))
        {
            double lo = 0.0;
            double hi = 1.0;
            if (feasible_at(1.0))
                lo = 1.0;
            else
                for (int it = 0; it < 60; ++it)
                {
                    const double mid = 0.5 * (lo + hi);
                    (feasible_at(mid) ? lo : hi) = mid;
                }
            s.w_b = lo * wb_full;
            if (lo > 0.0)
            {
                refresh(s, channels, config, sensing);
                s.status = "initial";
                return s;
            }
        }

        // heuristic failed: fall back to the transmit SDP anchored at the heuristic directions
        s.w_b = wb_full;
        PenaltyState ps;
        const TransmitResult tr = solve_transmit(phi, channels, config, sensing, s, ps);
        if (!tr.ok())
            throw std::runtime_error("no feasible initial point: " + tr.message);
        auto best = best_polished(transmit_directions(tr, channels.seed), phi, channels, config, sensing);
        if (!best)
            throw std::runtime_error("no feasible initial point: rank-one extraction failed");
        best->seed = channels.seed;
        best->status = "initial";
        return *best;
    }

    // ---- alternating optimization ---------------------------------------------------------------

    BeamformerSolution alternating_optimize(const SystemConfig &config, const ChannelSet &channels)
    {
        const auto t0 = std::chrono::steady_clock::now();
        const SensingModel sensing(config);
        BeamformerSolution cur = initialize(config, channels, sensing);
        cur.trace.push_back({0, rate_of(cur), cur.crb, cur.covert_margin, 0.0, 0.0, 0, elapsed(t0)});

        auto transmit_step = [&](BeamformerSolution &sol, double &residual)
        {
            PenaltyState ps;
            const TransmitResult tr = solve_transmit(sol.phi, channels, config, sensing, sol, ps);
            residual = tr.residual;
            if (!tr.ok())
                return false;
            auto cand = best_polished(transmit_directions(tr, derive_seed(channels.seed, 100 + sol.iterations)),
                                      sol.phi, channels, config, sensing);
            sol.lifted_rate = std::log2(1.0 + tr.lifted_snr);
            if (cand && rate_of(*cand) >= rate_of(sol))
            {
                cand->trace = std::move(sol.trace);
                cand->lifted_rate = sol.lifted_rate;
                cand->iterations = sol.iterations;
                sol = std::move(*cand);
                return true;
            }
            return false;
        };

        double prev = rate_of(cur);
        bool converged = false;
        for (int s = 1; s <= config.max_ao_iterations; ++s)
        {
            cur.iterations = s;
            TraceEntry e;
            e.iteration = s;
            transmit_step(cur, e.transmit_residual);

            if (config.has_ris())
            {
                PenaltyState ps;
                DinkelbachState dk;
                const ReflectResult rf = solve_reflect(cur, channels, config, ps, dk);
                e.reflect_residual = rf.residual;
                e.dinkelbach_iterations = rf.dinkelbach_iterations;
                if (rf.ok())
                {
                    std::vector<CVec> phis{rf.phi};
                    if (rf.residual > 1e-3)
                        for (const CVec &xi : gaussian_candidates(rf.U, 200, derive_seed(channels.seed, 200 + s)))
                        {
                            if (std::abs(xi(config.N)) == 0.0)
                                continue;
                            CVec phi = reflection_from_lift(xi);
                            for (int i = 0; i < config.N; ++i)
                            {
                                const double a = std::abs(phi(i));
                                const double cap = config.ris_mode == RisMode::passive ? 1.0 : config.eta_n(i);
                                if (config.ris_mode == RisMode::passive || a > cap)
                                    phi(i) = a > 0.0 ? phi(i) * (cap / a) : cplx(cap, 0.0);
                            }
                            phis.push_back(phi);
                        }
                    std::optional<BeamformerSolution> best;
                    for (const CVec &phi : phis)
                    {
                        if (!sic_feasible(phi, channels))
                            continue;
                        auto cand = best_polished({{cur.w_g, cur.w_b}}, phi, channels, config, sensing);
                        if (cand && (!best || rate_of(*cand) > rate_of(*best)))
                            best = std::move(cand);
                    }
                    if (best && rate_of(*best) >= rate_of(cur))
                    {
                        best->trace = std::move(cur.trace);
                        best->lifted_rate = std::log2(1.0 + rf.lifted_snr);
                        best->iterations = cur.iterations;
                        cur = std::move(*best);
                    }
                }
            }

            const double now = rate_of(cur);
            e.covert_rate = now;
            e.crb = cur.crb;
            e.margin = cur.covert_margin;
            e.wall_time = elapsed(t0);
            cur.trace.push_back(e);
            if (now - prev <= config.tolerances.xi1)
            {
                converged = true;
                break;
            }
            prev = now;
        }

        // closing transmit step so the reported lifted objective refers to the final reflection vector
        double res = 0.0;
        transmit_step(cur, res);
        auto &last = cur.trace.back();
        last.covert_rate = rate_of(cur);
        last.crb = cur.crb;
        last.margin = cur.covert_margin;
        last.transmit_residual = res;
        last.wall_time = elapsed(t0);

        cur.converged = converged;
        cur.status = converged ? "converged" : "max-iterations";
        cur.seed = channels.seed;
        return cur;
    }
} // namespace arisac
