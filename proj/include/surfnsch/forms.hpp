// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include "surfnsch/fe_space.hpp"

#include <functional>
#include <string>

namespace surfnsch {

enum class FormTag { M, A, VecM, VecA, AHat, C1, L, D1, D2, B, Div, Custom };

const char* to_string(FormTag tag);

/// Sparse matrix (or load vector) of one assembled form at time t.
/// Vector-valued spaces are represented in the reduced tangent-frame basis
/// unless assembled with a *_cartesian routine.
struct AssembledForm {
    FormTag tag = FormTag::Custom;
    double t = 0.0;
    SpMat matrix;
    VecX vector;
    bool symmetric = false;

    /// max |M - M^T|
    double asymmetry() const;
};

using QpScalar = std::function<double(std::size_t e, std::size_t q)>;
using QpVector = std::function<Vec3(std::size_t e, std::size_t q)>;

// Scalar forms.
AssembledForm assemble_m(const FeSpace& space);
AssembledForm assemble_a(const FeSpace& space);
/// int w phi psi with a quadrature-point weight.
AssembledForm assemble_weighted_m(const FeSpace& space, const QpScalar& weight);
/// Rectangular mass m(phi_test, psi_trial) between two scalar spaces on one domain.
AssembledForm assemble_m_mixed(const FeSpace& test, const FeSpace& trial);
/// b(phi, psi) = int V_N (H I - 2 shape_op) grad phi . grad psi
AssembledForm assemble_b(const FeSpace& space);
/// Load vector int f chi.
VecX assemble_load(const FeSpace& space, const QpScalar& f);
/// int psi u . grad chi; rows chi, columns psi. Every row sum of the transpose vanishes
/// (constant chi), so transport written with it conserves mass exactly.
AssembledForm assemble_advection(const FeSpace& space, const FeFunction& velocity);

// Vector forms (reduced basis).
AssembledForm assemble_vec_m(const FeSpace& space);
AssembledForm assemble_vec_a(const FeSpace& space);
/// int w u . v with a quadrature-point weight (reduced basis).
AssembledForm assemble_vec_weighted_m(const FeSpace& space, const QpScalar& weight);
/// H^1 Gram matrix: int u.v + grad u : grad v.
AssembledForm assemble_vec_h1(const FeSpace& space);
/// a_hat(eta; u, v) = 2 int eta E(u):E(v), eta a nodal scalar field.
AssembledForm assemble_a_hat(const FeFunction& eta_field, const FeSpace& u_space, const FeSpace& v_space);
/// 2 int w E(u):E(v) with a quadrature-point weight.
AssembledForm assemble_vec_a_weighted(const FeSpace& space, const QpScalar& weight);
/// l(phi, psi) = m(V_N shape_op phi, psi)
AssembledForm assemble_l(const FeSpace& space);
/// d1(phi, psi) = c1(phi, ut, psi) + c1(ut, phi, psi); rows psi, columns phi.
AssembledForm assemble_d1(const FeFunction& utilde);
/// Linear form psi -> a_hat(eta; ut, psi).
AssembledForm assemble_d2(const FeFunction& eta_field, const FeFunction& utilde);
/// Load vector int F . chi.
VecX assemble_vec_load(const FeSpace& space, const QpVector& f);

// Cartesian (3 per node) variants used for moving-mesh transfers.
AssembledForm assemble_vec_m_cartesian(const FeSpace& space);
AssembledForm assemble_vec_a_cartesian(const FeSpace& space);

/// c1(u, v, w) = int (grad u) v . w
double apply_c1(const FeFunction& u, const FeFunction& v, const FeFunction& w);
/// Matrix of c1 with one slot frozen to `field`. Rows index the later free
/// slot, columns the earlier one: slot 1 frozen -> K(w, v); slot 2 -> K(w, u); slot 3 -> K(v, u).
AssembledForm assemble_c1_matrix(int frozen_slot, const FeFunction& field, const FeSpace& space);
/// c2(phi, psi, chi) = int phi grad psi . chi
double apply_c2(const FeFunction& phi, const FeFunction& psi, const FeFunction& chi);
/// c3(phi, psi, chi) = int (grad phi (x) grad psi) : grad chi
double apply_c3(const FeFunction& phi, const FeFunction& psi, const FeFunction& chi);

enum class DivergenceForm {
    Direct,            // int q div u
    IntegratedByParts  // -int grad q . u (annihilates constants exactly)
};

/// Rows pressure dofs, columns reduced velocity dofs.
AssembledForm divergence_matrix(const FeSpace& u_space, const FeSpace& q_space,
                                DivergenceForm form = DivergenceForm::Direct);

/// [a_{t+dt}(u, v) - a_{t-dt}(u, v)] / (2 dt) with frozen Cartesian nodal
/// coefficients on meshes advected from `mesh` (P1 or P2 vector family).
double vec_b_finite_difference(const VecX& u, const VecX& v, FeFamily family, const SurfaceMesh& mesh,
                               const EvolvingSurface& surface, double dt_fd, int substeps = 4);

/// Scalar integrals of discrete fields.
double integrate(const FeFunction& f);
double l2_norm(const FeFunction& f);
double h1_seminorm(const FeFunction& f);
double vec_l2_norm(const FeFunction& u);
double strain_norm(const FeFunction& u);
/// Discrete mean m(f, 1) / |Gamma|.
double mean_value(const FeFunction& f);

void require_same_domain(const FeSpace& a, const FeSpace& b);

} // namespace surfnsch
