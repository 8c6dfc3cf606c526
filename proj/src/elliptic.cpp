// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/elliptic.hpp"

#include "surfnsch/error.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace surfnsch {

namespace {

VecX ones_load(const FeSpace& s)
{
    return assemble_load(s, [](std::size_t, std::size_t) { return 1.0; });
}

double hvn(const QuadPoint& Q)
{
    return Q.g.H * Q.g.v_n;
}

SpacePtr scalar_p1(const DomainPtr& dom)
{
    return FeSpace::make(dom, FeFamily::P1Scalar);
}

// Constant pressure mode and the mean-zero border of a velocity-pressure system.
VecX pressure_mode(std::size_t nu, std::size_t np)
{
    VecX z = VecX::Zero(nu + np);
    z.tail(np).setOnes();
    return z;
}

VecX pressure_border(std::size_t nu, const VecX& mass_one)
{
    VecX c = VecX::Zero(nu + mass_one.size());
    c.tail(mass_one.size()) = mass_one;
    return c;
}

DomainPtr domain_at(const SurfaceMesh& mesh, const EvolvingSurface& surface, double t)
{
    SurfaceMesh m = mesh;
    m.t = t;
    return SurfaceDomain::make(std::move(m), surface);
}

} // namespace

FeFunction solve_psi(const SpacePtr& space)
{
    if (space->is_vector()) fail(ErrorCode::InvalidArgument, "solve_psi needs a scalar space");
    const SurfaceDomain& dom = *space->domain();
    const SpMat A = assemble_a(*space).matrix;
    const VecX one = ones_load(*space);
    const VecX data = assemble_load(*space, [&](std::size_t e, std::size_t q) { return hvn(dom.qp(e, q)); });
    const double mean = data.sum() / dom.area();
    const VecX rhs = data - mean * one;
    return FeFunction(space, solve_mean_constrained(A, one, rhs));
}

FeFunction project_gradient(const FeFunction& psi, const SpacePtr& vector_space)
{
    require_same_domain(*psi.space, *vector_space);
    const SpMat M = assemble_vec_m(*vector_space).matrix;
    const VecX load = assemble_vec_load(*vector_space, [&](std::size_t e, std::size_t q) { return psi.gradient(e, q); });
    Eigen::SimplicialLDLT<SpMat> ldlt(M);
    if (ldlt.info() != Eigen::Success) fail(ErrorCode::SolverFailure, "vector mass factorization failed");
    return FeFunction(vector_space, vector_space->from_reduced(ldlt.solve(load)));
}

CorrectionField solve_correction(const SurfaceMesh& mesh, const EvolvingSurface& surface, double t,
                                 const CorrectionOptions& opt)
{
    const DomainPtr dom = domain_at(mesh, surface, t);
    const SpacePtr P1 = scalar_p1(dom);
    const SpacePtr V = FeSpace::make(dom, opt.vector_family);

    double data = 0.0;
    for (std::size_t e = 0; e < dom->num_elements(); ++e)
        for (std::size_t q = 0; q < dom->num_qp(); ++q) data += dom->qp(e, q).w * hvn(dom->qp(e, q));
    if (std::abs(data) > opt.compat_tol * dom->area()) {
        std::ostringstream os;
        os << "int H V_N = " << data << " exceeds " << opt.compat_tol << " * area";
        fail(ErrorCode::IncompatibleData, os.str());
    }

    CorrectionField c;
    c.data_mean = data / dom->area();
    try {
        c.psi = solve_psi(P1);
        c.u_tilde = project_gradient(c.psi, V);
    } catch (const Error& err) {
        fail(ErrorCode::SolverFailure, std::string("correction solve failed: ") + err.what());
    }

    const double dt = opt.dt_fd > 0.0 ? opt.dt_fd : 1e-4 * surface.period();
    SurfaceMesh base = mesh;
    base.t = t;
    const SurfaceMesh mp = advect(base, surface, t + dt, opt.substeps);
    const SurfaceMesh mm = advect(base, surface, t - dt, opt.substeps);
    const DomainPtr dp = SurfaceDomain::make(mp, surface), dm = SurfaceDomain::make(mm, surface);
    const FeFunction psi_p = solve_psi(scalar_p1(dp)), psi_m = solve_psi(scalar_p1(dm));
    const FeFunction ut_p = project_gradient(psi_p, FeSpace::make(dp, opt.vector_family));
    const FeFunction ut_m = project_gradient(psi_m, FeSpace::make(dm, opt.vector_family));

    if (opt.derivative == CorrectionDerivative::FiniteDifference) {
        c.dpsi_dt = FeFunction(P1, (psi_p.coeffs - psi_m.coeffs) / (2.0 * dt));
    } else {
        // Normal time derivative of H V_N along x(t +- dt) = cp(p +- dt V_N nu).
        const SurfaceFrame fp = surface.at(t + dt), fm = surface.at(t - dt);
        std::vector<double> dhv(dom->num_elements() * dom->num_qp());
        for (std::size_t e = 0; e < dom->num_elements(); ++e)
            for (std::size_t q = 0; q < dom->num_qp(); ++q) {
                const QuadPoint& Q = dom->qp(e, q);
                const Vec3 step = dt * Q.g.v_n * Q.g.nu;
                const GeomSample sp = fp.sample(fp.closest_point(Q.p + step));
                const GeomSample sm = fm.sample(fm.closest_point(Q.p - step));
                dhv[e * dom->num_qp() + q] = (sp.H * sp.v_n - sm.H * sm.v_n) / (2.0 * dt);
            }
        const SpMat A = assemble_a(*P1).matrix;
        const SpMat B = assemble_b(*P1).matrix;
        const VecX one = ones_load(*P1);
        const VecX hv = assemble_load(*P1, [&](std::size_t e, std::size_t q) { return hvn(dom->qp(e, q)); });
        VecX rhs = assemble_load(*P1, [&](std::size_t e, std::size_t q) {
            const double h = hvn(dom->qp(e, q));
            return dhv[e * dom->num_qp() + q] + h * h;
        });
        rhs -= B * c.psi.coeffs;
        rhs -= (rhs.sum() / dom->area()) * one;
        c.dpsi_dt = FeFunction(P1, solve_mean_constrained(A, one, rhs, -hv.dot(c.psi.coeffs)));
    }

    const FeFunction dut(V, (ut_p.coeffs - ut_m.coeffs) / (2.0 * dt));
    const SpMat M = assemble_vec_m(*V).matrix;
    const VecX load = assemble_vec_load(*V, [&](std::size_t e, std::size_t q) {
        const QuadPoint& Q = dom->qp(e, q);
        const Vec3 u = c.u_tilde.vector_value(e, q);
        Vec3 f = Vec3::Zero();
        if (opt.force) f = Q.g.proj * opt.force(Q.p, t);
        return Vec3(f - c.u_tilde.vector_gradient(e, q) * u - dut.vector_value(e, q) - Q.g.v_n * (Q.g.shape_op * u));
    });
    Eigen::SimplicialLDLT<SpMat> ldlt(M);
    c.body_force = FeFunction(V, V->from_reduced(ldlt.solve(load)));
    return c;
}

FeFunction remove_mean(const FeFunction& z)
{
    const double m = mean_value(z);
    FeFunction out = z;
    out.coeffs.array() -= m;
    return out;
}

FeFunction inverse_laplacian_dual(const SpacePtr& space, const VecX& dual)
{
    if (space->is_vector()) fail(ErrorCode::InvalidArgument, "inverse Laplacian needs a scalar space");
    const double total = dual.sum();
    if (std::abs(total) > 1e-10 * std::max(dual.cwiseAbs().sum(), 1e-300) && dual.cwiseAbs().sum() > 0.0) {
        std::ostringstream os;
        os << "data has mean " << total << "; inverse Laplacian needs mean-zero data";
        fail(ErrorCode::NonZeroMean, os.str());
    }
    if (dual.cwiseAbs().sum() == 0.0) return FeFunction(space);
    const SpMat A = assemble_a(*space).matrix;
    const VecX one = ones_load(*space);
    return FeFunction(space, solve_mean_constrained(A, one, dual));
}

FeFunction inverse_laplacian(const FeFunction& z)
{
    if (z.space->is_vector()) fail(ErrorCode::InvalidArgument, "inverse Laplacian needs a scalar field");
    const SpMat M = assemble_m(*z.space).matrix;
    const VecX dual = M * z.coeffs;
    const double scale = l2_norm(z) * std::sqrt(z.space->domain()->area());
    if (std::abs(dual.sum()) > 1e-10 * scale) {
        std::ostringstream os;
        os << "m(z, 1) = " << dual.sum() << " is not zero relative to |z|";
        fail(ErrorCode::NonZeroMean, os.str());
    }
    if (scale == 0.0) return FeFunction(z.space);
    const SpMat A = assemble_a(*z.space).matrix;
    const VecX one = ones_load(*z.space);
    return FeFunction(z.space, solve_mean_constrained(A, one, dual - (dual.sum() / one.sum()) * one));
}

double h_minus1_norm(const FeFunction& z)
{
    const FeFunction g = inverse_laplacian(z);
    const SpMat M = assemble_m(*z.space).matrix;
    return std::sqrt(std::max(0.0, z.coeffs.dot(M * g.coeffs)));
}

SpacePtr pressure_space_for(const SpacePtr& u_space)
{
    return FeSpace::make(u_space->domain(), FeFamily::P1Scalar);
}

InverseStokes::InverseStokes(SpacePtr u_space, SpacePtr p_space)
    : u_space_(std::move(u_space))
    , p_space_(std::move(p_space))
{
    require_same_domain(*u_space_, *p_space_);
    M_ = assemble_vec_m(*u_space_).matrix;
    const SpMat A = assemble_vec_a(*u_space_).matrix;
    B_ = divergence_matrix(*u_space_, *p_space_, DivergenceForm::IntegratedByParts).matrix;
    const std::size_t nu = u_space_->reduced_dof_count(), np = p_space_->dof_count();
    const SpMat K = block_matrix({{SpMat(M_ + A), SpMat(B_.transpose())}, {B_, SpMat(np, np)}});
    try {
        solver_.factorize(K, pressure_mode(nu, np), pressure_border(nu, ones_load(*p_space_)));
    } catch (const Error& e) {
        fail(ErrorCode::SolverFailure, e.what());
    }
}

VecX InverseStokes::apply_reduced(const VecX& phi) const
{
    const std::size_t nu = u_space_->reduced_dof_count();
    VecX rhs = VecX::Zero(nu + p_space_->dof_count() + 1);
    rhs.head(nu) = M_ * phi;
    try {
        return solver_.solve(rhs).head(nu);
    } catch (const Error& e) {
        fail(ErrorCode::SolverFailure, e.what());
    }
}

FeFunction InverseStokes::apply(const FeFunction& phi) const
{
    if (phi.space->domain() != u_space_->domain() || phi.space->family() != u_space_->family())
        fail(ErrorCode::MeshMismatch, "field is not on the operator's velocity space");
    return FeFunction(u_space_, u_space_->from_reduced(apply_reduced(u_space_->to_reduced(phi.coeffs))));
}

double InverseStokes::s_norm(const FeFunction& phi) const
{
    const VecX r = u_space_->to_reduced(phi.coeffs);
    return std::sqrt(std::max(0.0, r.dot(M_ * apply_reduced(r))));
}

FeFunction inverse_stokes(const FeFunction& phi)
{
    return InverseStokes(phi.space, pressure_space_for(phi.space)).apply(phi);
}

double s_norm(const FeFunction& phi)
{
    return InverseStokes(phi.space, pressure_space_for(phi.space)).s_norm(phi);
}

FeFunction stokes_projection(const FeFunction& u, const SpacePtr& p_space, const VecX& div_rhs)
{
    const FeSpace& V = *u.space;
    const SpMat M = assemble_vec_m(V).matrix;
    const SpMat B = divergence_matrix(V, *p_space, DivergenceForm::IntegratedByParts).matrix;
    const std::size_t nu = V.reduced_dof_count(), np = p_space->dof_count();
    const SpMat K = block_matrix({{M, SpMat(B.transpose())}, {B, SpMat(np, np)}});
    BorderedSolver solver(K, pressure_mode(nu, np), pressure_border(nu, ones_load(*p_space)));
    VecX rhs = VecX::Zero(nu + np + 1);
    rhs.head(nu) = M * V.to_reduced(u.coeffs);
    if (div_rhs.size() == static_cast<Eigen::Index>(np)) rhs.segment(nu, np) = div_rhs;
    return FeFunction(u.space, V.from_reduced(solver.solve(rhs).head(nu)));
}

std::vector<double> lanczos_largest(const std::function<VecX(const VecX&)>& op, const SpMat& W, const VecX& start,
                                    int iterations, const std::vector<VecX>& deflate, int wanted, int* used)
{
    // Deflation vectors are W-orthonormalized first.
    std::vector<VecX> D;
    for (const VecX& d : deflate) {
        VecX v = d;
        for (const VecX& q : D) v -= q.dot(W * v) * q;
        const double n = std::sqrt(v.dot(W * v));
        if (n > 0.0) D.push_back(v / n);
    }
    auto orth = [&](VecX& w, const std::vector<VecX>& basis) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const VecX& q : D) w -= q.dot(W * w) * q;
            for (const VecX& q : basis) w -= q.dot(W * w) * q;
        }
    };
    std::vector<VecX> V;
    std::vector<double> alpha, beta;
    VecX v = start;
    orth(v, V);
    v /= std::sqrt(v.dot(W * v));
    V.push_back(v);
    std::vector<double> ritz;
    int it = 0;
    for (; it < iterations; ++it) {
        VecX w = op(V.back());
        const double a = w.dot(W * V.back());
        alpha.push_back(a);
        orth(w, V);
        const double b = std::sqrt(std::max(0.0, w.dot(W * w)));

        const int k = static_cast<int>(alpha.size());
        MatX T = MatX::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<MatX> es(T);
        ritz.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
        std::reverse(ritz.begin(), ritz.end());
        bool converged = k >= wanted + 2;
        for (int i = 0; i < std::min(wanted, k) && converged; ++i) {
            const double resid = std::abs(b * es.eigenvectors()(k - 1, k - 1 - i));
            if (resid > 1e-10 * std::abs(ritz[i])) converged = false;
        }
        if (converged || b < 1e-14 * std::abs(a)) {
            ++it;
            break;
        }
        beta.push_back(b);
        V.push_back(w / b);
    }
    if (used) *used = it;
    ritz.resize(std::min<std::size_t>(ritz.size(), wanted));
    return ritz;
}

InfSupResult inf_sup(const SpacePtr& u_space, const SpacePtr& q_space, InfSupMethod method)
{
    require_same_domain(*u_space, *q_space);
    const SpMat A = assemble_vec_h1(*u_space).matrix;
    const SpMat B = divergence_matrix(*u_space, *q_space, DivergenceForm::IntegratedByParts).matrix;
    const SpMat Mp = assemble_m(*q_space).matrix;
    const std::size_t np = q_space->dof_count(), nu = u_space->reduced_dof_count();
    InfSupResult res;
    if (method == InfSupMethod::Auto) method = np <= 1200 ? InfSupMethod::Dense : InfSupMethod::Lanczos;

    if (method == InfSupMethod::Dense) {
        Eigen::SimplicialLDLT<SpMat> ldlt(A);
        if (ldlt.info() != Eigen::Success) fail(ErrorCode::EigenSolverFailure, "H1 Gram factorization failed");
        const MatX Bt = MatX(SpMat(B.transpose()));
        const MatX X = ldlt.solve(Bt);
        const MatX S = MatX(B) * X;
        const MatX Md = MatX(Mp);
        Eigen::GeneralizedSelfAdjointEigenSolver<MatX> ges(0.5 * (S + S.transpose()), Md);
        if (ges.info() != Eigen::Success) fail(ErrorCode::EigenSolverFailure, "dense eigen solve failed");
        const VecX m1 = Md * VecX::Ones(np);
        // Drop the constant pressure mode.
        Eigen::Index drop = 0;
        (ges.eigenvectors().transpose() * m1).cwiseAbs().maxCoeff(&drop);
        for (Eigen::Index i = 0; i < ges.eigenvalues().size(); ++i)
            if (i != drop) res.smallest.push_back(std::max(0.0, ges.eigenvalues()[i]));
        res.smallest.resize(std::min<std::size_t>(res.smallest.size(), 6));
        res.beta = std::sqrt(res.smallest.front());
        return res;
    }

    const double sigma = 0.05;
    const SpMat K = block_matrix({{A, SpMat(B.transpose())}, {B, SpMat(-sigma * Mp)}});
    LinearSolver solver;
    try {
        solver.factorize(K);
    } catch (const Error& e) {
        fail(ErrorCode::EigenSolverFailure, e.what());
    }
    auto op = [&](const VecX& x) {
        VecX rhs = VecX::Zero(nu + np);
        rhs.tail(np) = -(Mp * x);
        return VecX(solver.solve(rhs).tail(np));
    };
    std::mt19937_64 rng(20260101);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    VecX start(np);
    for (std::size_t i = 0; i < np; ++i) start[i] = U(rng);
    const auto ritz = lanczos_largest(op, Mp, start, 300, {VecX::Ones(np)}, 3, &res.iterations);
    if (ritz.empty()) fail(ErrorCode::EigenSolverFailure, "Lanczos produced no Ritz values");
    for (double th : ritz) res.smallest.push_back(std::max(0.0, 1.0 / th - sigma));
    res.beta = std::sqrt(res.smallest.front());
    return res;
}

double inf_sup_constant(const SpacePtr& u_space, const SpacePtr& q_space)
{
    return inf_sup(u_space, q_space).beta;
}

KillingSpectrum killing_spectrum(const SpacePtr& u_space, double tol, int count)
{
    const SpacePtr p_space = pressure_space_for(u_space);
    const SpMat M = assemble_vec_m(*u_space).matrix;
    const SpMat A = assemble_vec_a(*u_space).matrix;
    const SpMat B = divergence_matrix(*u_space, *p_space, DivergenceForm::IntegratedByParts).matrix;
    const std::size_t nu = u_space->reduced_dof_count(), np = p_space->dof_count();
    const double sigma = 1.0;
    const SpMat K = block_matrix({{SpMat(A + sigma * M), SpMat(B.transpose())}, {B, SpMat(np, np)}});
    BorderedSolver solver;
    try {
        solver.factorize(K, pressure_mode(nu, np), pressure_border(nu, ones_load(*p_space)));
    } catch (const Error& e) {
        fail(ErrorCode::EigenSolverFailure, e.what());
    }
    auto op = [&](const VecX& v) {
        VecX rhs = VecX::Zero(nu + np + 1);
        rhs.head(nu) = M * v;
        return VecX(solver.solve(rhs).head(nu));
    };

    // Subspace iteration with Rayleigh-Ritz; a block resolves the near-degenerate Killing modes.
    const int block = std::max(count + 4, 10);
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    MatX X(nu, block);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = U(rng);
    VecX prev = VecX::Constant(count, INFINITY);
    VecX theta;
    for (int it = 0; it < 200; ++it) {
        MatX Y(nu, block);
        for (int j = 0; j < block; ++j) Y.col(j) = op(X.col(j));
        // Rayleigh-Ritz for op in the M inner product on span(X).
        const MatX MX = M * X;
        const MatX R = MX.transpose() * Y;
        const MatX G = MX.transpose() * X;
        Eigen::GeneralizedSelfAdjointEigenSolver<MatX> ges(0.5 * (R + R.transpose()), 0.5 * (G + G.transpose()));
        if (ges.info() != Eigen::Success) fail(ErrorCode::EigenSolverFailure, "Rayleigh-Ritz step failed");
        theta = ges.eigenvalues().reverse();
        const MatX C = ges.eigenvectors().rowwise().reverse();
        X = Y * C;
        for (int j = 0; j < block; ++j) X.col(j) /= std::sqrt(X.col(j).dot(M * X.col(j)));
        VecX lam(count);
        for (int i = 0; i < count; ++i) lam[i] = 1.0 / theta[i] - sigma;
        if (((lam - prev).cwiseAbs().array() <= 1e-9 * (1.0 + lam.cwiseAbs().array())).all()) break;
        prev = lam;
    }
    KillingSpectrum ks;
    for (int i = 0; i < count; ++i) ks.eigenvalues.push_back(std::max(0.0, 1.0 / theta[i] - sigma));
    const double ref = ks.eigenvalues.size() > 3 ? ks.eigenvalues[3] : ks.eigenvalues.back();
    for (int i = 0; i < std::min(3, count); ++i)
        if (ks.eigenvalues[i] < tol * ref) ++ks.dimension;
    return ks;
}

int killing_kernel_dim(const SpacePtr& u_space, double tol)
{
    return killing_spectrum(u_space, tol).dimension;
}

} // namespace surfnsch
