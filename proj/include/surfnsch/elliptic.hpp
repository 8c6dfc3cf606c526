// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include "surfnsch/forms.hpp"
#include "surfnsch/linalg.hpp"

#include <functional>
#include <vector>

namespace surfnsch {

using ForceFn = std::function<Vec3(const Vec3&, double)>;

enum class CorrectionDerivative {
    FiniteDifference,    // central difference of Psi solves at t +- dt
    DifferentiatedSystem // a(dPsi, chi) = m(d(H V_N) + (H V_N)^2, chi) - b(Psi, chi)
};

struct CorrectionOptions {
    double dt_fd = -1.0;  // <= 0: 1e-4 * surface period
    int substeps = 4;
    CorrectionDerivative derivative = CorrectionDerivative::FiniteDifference;
    FeFamily vector_family = FeFamily::P1VectorTangential;
    ForceFn force;        // F_T(x, t); empty means zero
    double compat_tol = 1e-6;
};

struct CorrectionField {
    FeFunction psi;        // P1, mean zero
    FeFunction u_tilde;    // L2 projection of grad Psi
    FeFunction dpsi_dt;    // normal time derivative of Psi
    FeFunction body_force; // F_T - (grad ut) ut - P d(ut) - V_N H ut
    double data_mean = 0.0; // int H V_N / |Gamma|
};

/// Psi with a(Psi, chi) = m(H V_N, chi), mean zero, on the P1 space of `scalar_space`.
FeFunction solve_psi(const SpacePtr& scalar_space);
/// Nodal L2 projection of grad Psi onto a vector space on the same domain.
FeFunction project_gradient(const FeFunction& psi, const SpacePtr& vector_space);

CorrectionField solve_correction(const SurfaceMesh& mesh, const EvolvingSurface& surface, double t,
                                 const CorrectionOptions& options = {});

/// Mean-zero G z with a(G z, phi) = m(z, phi). Throws NonZeroMean.
FeFunction inverse_laplacian(const FeFunction& z);
/// Same, with the right-hand side given as the dual vector m(z, phi_i).
FeFunction inverse_laplacian_dual(const SpacePtr& space, const VecX& dual);
double h_minus1_norm(const FeFunction& z);
/// z - mean(z)
FeFunction remove_mean(const FeFunction& z);

/// Factorized inverse Stokes-type operator on a velocity/pressure pair.
class InverseStokes {
public:
    InverseStokes(SpacePtr u_space, SpacePtr p_space);
    FeFunction apply(const FeFunction& phi) const;
    double s_norm(const FeFunction& phi) const;
    /// Same from reduced coefficients.
    VecX apply_reduced(const VecX& phi_reduced) const;
    const SpMat& mass() const { return M_; }
    const SpMat& divergence() const { return B_; }
    const SpacePtr& u_space() const { return u_space_; }

private:
    SpacePtr u_space_, p_space_;
    SpMat M_, B_;
    BorderedSolver solver_;
};

/// Pressure space paired with a velocity space: P1 scalar on the same domain.
SpacePtr pressure_space_for(const SpacePtr& u_space);

FeFunction inverse_stokes(const FeFunction& phi);
double s_norm(const FeFunction& phi);

/// L2 projection onto {v : m(q, div v) = -m(q, g)} (g defaults to zero).
FeFunction stokes_projection(const FeFunction& u, const SpacePtr& p_space, const VecX& div_rhs = VecX());

enum class InfSupMethod { Dense, Lanczos, Auto };

struct InfSupResult {
    double beta = 0.0;
    std::vector<double> smallest;  // smallest nonzero generalized eigenvalues (beta^2, ...)
    int iterations = 0;
};

/// sqrt of the smallest nonzero eigenvalue of B A^-1 B^T against the pressure mass,
/// A the H^1 Gram matrix of the velocity space.
InfSupResult inf_sup(const SpacePtr& u_space, const SpacePtr& q_space, InfSupMethod method = InfSupMethod::Auto);
double inf_sup_constant(const SpacePtr& u_space, const SpacePtr& q_space);

struct KillingSpectrum {
    std::vector<double> eigenvalues; // smallest eigenvalues of a on the div-free subspace
    int dimension = 0;
};

KillingSpectrum killing_spectrum(const SpacePtr& u_space, double tol, int count = 6);
/// Number of the three smallest div-free eigenvalues of a below tol times the fourth.
int killing_kernel_dim(const SpacePtr& u_space, double tol = 0.05);

/// Largest Ritz values of an operator self-adjoint in the W inner product,
/// with the given vectors deflated. Full reorthogonalization.
std::vector<double> lanczos_largest(const std::function<VecX(const VecX&)>& op, const SpMat& W,
                                    const VecX& start, int iterations, const std::vector<VecX>& deflate,
                                    int wanted, int* used = nullptr);

} // namespace surfnsch
