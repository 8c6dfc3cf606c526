// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include "surfnsch/types.hpp"

#include <memory>
#include <vector>

namespace surfnsch {

/// Direct sparse LU with a relative residual check on every solve.
class LinearSolver {
public:
    LinearSolver();
    ~LinearSolver();
    LinearSolver(LinearSolver&&) noexcept;
    LinearSolver& operator=(LinearSolver&&) noexcept;

    explicit LinearSolver(const SpMat& A, double residual_tol = 1e-10);
    void factorize(const SpMat& A, double residual_tol = 1e-10);
    VecX solve(const VecX& b) const;
    /// Relative residual |Ax - b| / |b| of the last solve.
    double last_residual() const { return last_residual_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    SpMat A_;
    double tol_ = 1e-10;
    mutable double last_residual_ = 0.0;
};

/// Assembles a block matrix from a row-major grid of blocks; empty blocks
/// (0x0) are treated as zero of the size implied by the other blocks.
SpMat block_matrix(const std::vector<std::vector<SpMat>>& blocks);

/// Column vector as a sparse n x 1 matrix.
SpMat sparse_column(const VecX& v);

/// Solves the bordered system [S c; c^T 0][x; lambda] = [f; g] for a singular S
/// whose left and right null space is span{z} (e.g. a constant pressure or potential
/// mode), with c^T z != 0. The border is never assembled: S + s e_k e_k^T (k the
/// largest entry of z) is factorized, which keeps the sparsity pattern, and the exact
/// multiplier solution is recovered from z. Dense border rows ruin sparse LU fill.
class BorderedSolver {
public:
    BorderedSolver() = default;
    BorderedSolver(const SpMat& S, const VecX& z, const VecX& c, double residual_tol = 1e-10);
    void factorize(const SpMat& S, const VecX& z, const VecX& c, double residual_tol = 1e-10);
    /// rhs = [f; g] (size n + 1); returns [x; lambda].
    VecX solve(const VecX& rhs) const;
    double last_residual() const { return last_residual_; }

private:
    VecX raw_solve(const VecX& rhs) const;

    LinearSolver reg_;
    SpMat S_;
    VecX z_, c_;
    double zc_ = 0.0, tol_ = 1e-10;
    mutable double last_residual_ = 0.0;
};

/// Solves [A m; m^T 0][x; lambda] = [b; c] for a symmetric A with A 1 = 0.
VecX solve_mean_constrained(const SpMat& A, const VecX& m, const VecX& b, double c = 0.0,
                            double* lambda = nullptr);

/// sqrt(r^T M^{-1} r) for an SPD M.
double dual_norm(const SpMat& M, const VecX& r);

SpMat identity(std::size_t n);

} // namespace surfnsch
