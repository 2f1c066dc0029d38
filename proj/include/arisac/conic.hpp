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


#pragma once

#include "arisac/types.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace arisac
{
    enum class BlockKind
    {
        hermitian_psd, // n x n complex Hermitian, n*n real coordinates (see linalg.hpp)
        symmetric_psd, // n x n real symmetric, n(n+1)/2 coordinates: diagonal, then X(i,j) for i < j
        free           // n unconstrained scalars
    };

    struct BlockId
    {
        int index = -1;
    };

    enum class Sense
    {
        less_equal,
        equal,
        greater_equal
    };

    /// Real-valued affine functional of the problem blocks.
    class LinearExpr
    {
    public:
        struct Term
        {
            int block;
            RVec coeffs; // one coefficient per block coordinate
        };

        LinearExpr() = default;

        /// + Re tr(C X) for a Hermitian block.
        LinearExpr &add_trace(BlockId b, const CMat &C);
        /// + tr(C X) for a symmetric block.
        LinearExpr &add_trace(BlockId b, const RMat &C);
        /// + coeffs . coords(X)
        LinearExpr &add_coeffs(BlockId b, const RVec &coeffs);
        LinearExpr &add_constant(double v);
        LinearExpr &scale(double s);

        const std::vector<Term> &terms() const { return terms_; }
        double constant() const { return constant_; }

    private:
        std::vector<Term> terms_;
        double constant_ = 0.0;

        friend class ConicProblem;
    };

    /// constant + sum_k coords_k * images_k >= 0 (real symmetric, dim x dim).
    struct LmiConstraint
    {
        struct Term
        {
            int block;
            std::vector<RMat> images; // one dim x dim image per block coordinate
        };
        std::string name;
        int dim = 0;
        RMat constant;
        std::vector<Term> terms;
    };

    struct LinearConstraint
    {
        std::string name;
        LinearExpr expr;
        Sense sense = Sense::less_equal;
        double rhs = 0.0;
    };

    struct VariableBlock
    {
        std::string name;
        int dim = 0;
        BlockKind kind = BlockKind::free;
        int coords() const;
    };

    class ConicProblem
    {
    public:
        BlockId add_block(std::string name, int dim, BlockKind kind);
        void add_constraint(std::string name, LinearExpr expr, Sense sense, double rhs);
        void add_lmi(LmiConstraint lmi);
        void maximize(LinearExpr objective);
        void minimize(LinearExpr objective);

        /// Images placing a symmetric block (scaled) at (offset, offset) inside a dim x dim LMI.
        std::vector<RMat> placement_images(BlockId b, int dim, int offset, double scale = 1.0) const;

        const VariableBlock &block(BlockId b) const;
        const std::vector<VariableBlock> &blocks() const { return blocks_; }
        const std::vector<LinearConstraint> &constraints() const { return constraints_; }
        const std::vector<LmiConstraint> &lmis() const { return lmis_; }
        const LinearExpr &objective() const { return objective_; }
        bool is_maximize() const { return maximize_; }

        /// Throws std::invalid_argument when a term references an unknown block or has the wrong size.
        void validate() const;

    private:
        std::vector<VariableBlock> blocks_;
        std::vector<LinearConstraint> constraints_;
        std::vector<LmiConstraint> lmis_;
        LinearExpr objective_;
        bool maximize_ = true;
    };

    enum class SolveStatus
    {
        optimal,
        infeasible,
        unbounded,
        near_optimal, // stalled with KKT residuals below ConicSettings::reduced_tolerance
        inaccurate
    };

    std::string_view to_string(SolveStatus s);

    struct ConicSettings
    {
        double tolerance = 1e-8;
        double reduced_tolerance = 1e-6;
        int max_iterations = 80;
        bool equilibrate = true;
        bool retry_inaccurate = true;
    };

    struct KktResiduals
    {
        double primal = 0.0;
        double dual = 0.0;
        double gap = 0.0;
    };

    class ConicSolution
    {
    public:
        SolveStatus status = SolveStatus::inaccurate;
        double objective = 0.0;
        KktResiduals residuals;
        int iterations = 0;
        std::vector<RVec> values; // coordinates per block

        bool ok() const { return status == SolveStatus::optimal || status == SolveStatus::near_optimal; }
        CMat hermitian(BlockId b, const ConicProblem &p) const;
        RMat symmetric(BlockId b, const ConicProblem &p) const;
        const RVec &coords(BlockId b) const { return values.at(b.index); }
    };

    ConicSolution solve(const ConicProblem &problem, const ConicSettings &settings = {});

    /// Value of a functional at stored block coordinates.
    double evaluate(const LinearExpr &e, const std::vector<RVec> &values);
    /// Assembled LMI matrix at stored block coordinates.
    RMat evaluate(const LmiConstraint &lmi, const std::vector<RVec> &values);

    struct AuditEntry
    {
        std::string name;
        double residual = 0.0; // scale-relative violation, zero when satisfied
    };

    /// Re-evaluates every constraint and PSD block from the stored problem data.
    std::vector<AuditEntry> audit(const ConicProblem &problem, const ConicSolution &solution);
    double max_violation(const std::vector<AuditEntry> &entries);

    /// [[Re H, -Im H], [Im H, Re H]]; H >= 0 iff the embedding is.
    RMat complex_psd_to_real(const CMat &H);

    /**
     * Encodes tr(W^{-1} J^{-1}) <= mu via an auxiliary symmetric block T with [[J, I], [I, T]] >= 0
     * and sum_i w_i T_ii <= mu. With no weights this is tr(J^{-1}) <= mu. Returns T.
     */
    BlockId add_trace_inverse_constraint(ConicProblem &problem, BlockId J, double mu,
                                         const std::optional<RVec> &weights = std::nullopt);

    int symmetric_coords(int n);
    RVec symmetric_to_coords(const RMat &X);
    RMat symmetric_from_coords(const Eigen::Ref<const RVec> &x, int n);

    /// JSON dump of blocks, constraints, LMIs and the objective, for cross-checking with other solvers.
    void write_problem(std::ostream &os, const ConicProblem &problem);
} // namespace arisac
