// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/linalg.hpp"

#include "surfnsch/error.hpp"

#include <Eigen/SparseCholesky>
#ifdef SURFNSCH_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#else
#include <Eigen/SparseLU>
#endif

#include <cmath>
#include <sstream>

namespace surfnsch {

struct LinearSolver::Impl {
#ifdef SURFNSCH_HAVE_UMFPACK
    Eigen::UmfPackLU<SpMat> lu;
#else
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
#endif
};

LinearSolver::LinearSolver() = default;
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

LinearSolver::LinearSolver(const SpMat& A, double residual_tol)
{
    factorize(A, residual_tol);
}

void LinearSolver::factorize(const SpMat& A, double residual_tol)
{
    if (A.rows() != A.cols()) fail(ErrorCode::LinearSolverFailure, "matrix is not square");
    impl_ = std::make_unique<Impl>();
    A_ = A;
    A_.makeCompressed();
    tol_ = residual_tol;
    impl_->lu.analyzePattern(A_);
    impl_->lu.factorize(A_);
    if (impl_->lu.info() != Eigen::Success)
        fail(ErrorCode::LinearSolverFailure, "sparse LU factorization failed");
}

VecX LinearSolver::solve(const VecX& b) const
{
    if (!impl_) fail(ErrorCode::LinearSolverFailure, "solve before factorize");
    VecX x = impl_->lu.solve(b);
    const double bn = b.norm();
    if (bn == 0.0) {
        last_residual_ = 0.0;
        return VecX::Zero(b.size());
    }
    VecX r = b - A_ * x;
    // One step of iterative refinement keeps saddle systems at the tolerance.
    for (int it = 0; it < 3 && r.norm() > tol_ * bn; ++it) {
        x += impl_->lu.solve(r);
        r = b - A_ * x;
    }
    last_residual_ = r.norm() / bn;
    if (!x.allFinite() || last_residual_ > tol_) {
        std::ostringstream os;
        os << "relative residual " << last_residual_ << " above tolerance " << tol_;
        fail(ErrorCode::LinearSolverFailure, os.str());
    }
    return x;
}

SpMat block_matrix(const std::vector<std::vector<SpMat>>& blocks)
{
    const std::size_t br = blocks.size();
    const std::size_t bc = blocks.empty() ? 0 : blocks[0].size();
    std::vector<Eigen::Index> rows(br, -1), cols(bc, -1);
    for (std::size_t i = 0; i < br; ++i)
        for (std::size_t j = 0; j < bc; ++j) {
            const SpMat& b = blocks[i][j];
            if (b.rows() == 0 && b.cols() == 0) continue;
            if (rows[i] >= 0 && rows[i] != b.rows()) fail(ErrorCode::InvalidArgument, "block row size mismatch");
            if (cols[j] >= 0 && cols[j] != b.cols()) fail(ErrorCode::InvalidArgument, "block column size mismatch");
            rows[i] = b.rows();
            cols[j] = b.cols();
        }
    std::vector<Eigen::Index> r0(br + 1, 0), c0(bc + 1, 0);
    for (std::size_t i = 0; i < br; ++i) {
        if (rows[i] < 0) fail(ErrorCode::InvalidArgument, "block row without size");
        r0[i + 1] = r0[i] + rows[i];
    }
    for (std::size_t j = 0; j < bc; ++j) {
        if (cols[j] < 0) fail(ErrorCode::InvalidArgument, "block column without size");
        c0[j + 1] = c0[j] + cols[j];
    }
    std::vector<Triplet> trips;
    for (std::size_t i = 0; i < br; ++i)
        for (std::size_t j = 0; j < bc; ++j) {
            const SpMat& b = blocks[i][j];
            for (int k = 0; k < b.outerSize(); ++k)
                for (SpMat::InnerIterator it(b, k); it; ++it)
                    trips.emplace_back(r0[i] + it.row(), c0[j] + it.col(), it.value());
        }
    SpMat M(r0[br], c0[bc]);
    M.setFromTriplets(trips.begin(), trips.end());
    return M;
}

SpMat sparse_column(const VecX& v)
{
    std::vector<Triplet> trips;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) trips.emplace_back(i, 0, v[i]);
    SpMat M(v.size(), 1);
    M.setFromTriplets(trips.begin(), trips.end());
    return M;
}

SpMat identity(std::size_t n)
{
    SpMat I(n, n);
    I.setIdentity();
    return I;
}

BorderedSolver::BorderedSolver(const SpMat& S, const VecX& z, const VecX& c, double residual_tol)
{
    factorize(S, z, c, residual_tol);
}

void BorderedSolver::factorize(const SpMat& S, const VecX& z, const VecX& c, double residual_tol)
{
    if (S.rows() != S.cols() || z.size() != S.rows() || c.size() != S.rows())
        fail(ErrorCode::LinearSolverFailure, "bordered system dimensions disagree");
    S_ = S;
    S_.makeCompressed();
    z_ = z;
    c_ = c;
    tol_ = residual_tol;
    zc_ = z.dot(c);
    if (!(std::abs(zc_) > 0.0)) fail(ErrorCode::LinearSolverFailure, "constraint does not see the null vector");
    Eigen::Index k = 0;
    z.cwiseAbs().maxCoeff(&k);
    double scale = 0.0;
    for (int j = 0; j < S_.outerSize(); ++j)
        for (SpMat::InnerIterator it(S_, j); it; ++it) scale = std::max(scale, std::abs(it.value()));
    SpMat R = S_;
    R.coeffRef(k, k) += (scale > 0.0 ? scale : 1.0) / (z[k] * z[k]);
    reg_.factorize(R, INFINITY);
}

VecX BorderedSolver::raw_solve(const VecX& rhs) const
{
    const Eigen::Index n = S_.rows();
    const VecX f = rhs.head(n);
    const double g = rhs[n];
    // z^T S = 0 fixes the multiplier; the regularized solve then hits S x = f - c lambda.
    const double lambda = z_.dot(f) / zc_;
    VecX x = reg_.solve(f - lambda * c_);
    x += ((g - c_.dot(x)) / zc_) * z_;
    VecX out(n + 1);
    out << x, lambda;
    return out;
}

VecX BorderedSolver::solve(const VecX& rhs) const
{
    const Eigen::Index n = S_.rows();
    if (rhs.size() != n + 1) fail(ErrorCode::LinearSolverFailure, "bordered right-hand side has the wrong size");
    auto residual = [&](const VecX& y) {
        VecX r(n + 1);
        r.head(n) = rhs.head(n) - S_ * y.head(n) - y[n] * c_;
        r[n] = rhs[n] - c_.dot(y.head(n));
        return r;
    };
    const double bn = rhs.norm();
    if (bn == 0.0) {
        last_residual_ = 0.0;
        return VecX::Zero(n + 1);
    }
    VecX y = raw_solve(rhs);
    VecX r = residual(y);
    for (int it = 0; it < 3 && r.norm() > tol_ * bn; ++it) {
        y += raw_solve(r);
        r = residual(y);
    }
    last_residual_ = r.norm() / bn;
    if (!y.allFinite() || last_residual_ > tol_) {
        std::ostringstream os;
        os << "bordered solve: relative residual " << last_residual_ << " above tolerance " << tol_;
        fail(ErrorCode::LinearSolverFailure, os.str());
    }
    return y;
}

VecX solve_mean_constrained(const SpMat& A, const VecX& m, const VecX& b, double c, double* lambda)
{
    BorderedSolver solver(A, VecX::Ones(A.rows()), m);
    VecX rhs(b.size() + 1);
    rhs << b, c;
    const VecX x = solver.solve(rhs);
    if (lambda) *lambda = x[b.size()];
    return x.head(b.size());
}

double dual_norm(const SpMat& M, const VecX& r)
{
    Eigen::SimplicialLDLT<SpMat> ldlt(M);
    if (ldlt.info() != Eigen::Success) fail(ErrorCode::LinearSolverFailure, "mass matrix factorization failed");
    const VecX y = ldlt.solve(r);
    return std::sqrt(std::max(0.0, r.dot(y)));
}

} // namespace surfnsch
