// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "common.hpp"

#include "surfnsch/error.hpp"
#include "surfnsch/forms.hpp"

#include <doctest.h>

using namespace surfnsch;
using testing_support::kPi;
using testing_support::rotation;

namespace {

DomainPtr sphere_domain(int level, int degree = 6)
{
    const auto s = EvolvingSurface::static_sphere();
    return SurfaceDomain::make(mesh_for_surface(s, level), s, degree);
}

double max_abs(const SpMat& A)
{
    double m = 0.0;
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
}

Vec3 grad_z(const Vec3& x)
{
    const Vec3 n = x.normalized();
    return Vec3::UnitZ() - n.z() * n;
}

} // namespace

TEST_CASE("mass matrix integrates the area of the exact sphere")
{
    const auto S = FeSpace::make(sphere_domain(3), FeFamily::P1Scalar);
    const SpMat M = assemble_m(*S).matrix;
    const VecX one = VecX::Ones(S->dof_count());
    CHECK(one.dot(M * one) == doctest::Approx(4.0 * kPi).epsilon(1e-10));
    CHECK(assemble_m(*S).asymmetry() < 1e-15);
    CHECK(assemble_load(*S, [](std::size_t, std::size_t) { return 1.0; }).sum() ==
          doctest::Approx(4.0 * kPi).epsilon(1e-10));
    const SpMat W = assemble_weighted_m(*S, [](std::size_t, std::size_t) { return 1.0; }).matrix;
    CHECK(max_abs(W - M) < 1e-15);
}

TEST_CASE("stiffness matrix: constants in the kernel, Rayleigh quotient of Y10")
{
    for (FeFamily fam : {FeFamily::P1Scalar, FeFamily::P2Scalar}) {
        const auto S = FeSpace::make(sphere_domain(3), fam);
        const AssembledForm A = assemble_a(*S);
        CHECK(A.asymmetry() < 1e-12);
        CHECK((A.matrix * VecX::Ones(S->dof_count())).norm() < 1e-12);
        const FeFunction y = interpolate(S, testing_support::y10);
        const double rq = y.coeffs.dot(A.matrix * y.coeffs) / y.coeffs.dot(assemble_m(*S).matrix * y.coeffs);
        CHECK(rq == doctest::Approx(2.0).epsilon(fam == FeFamily::P1Scalar ? 2e-2 : 1e-3));
    }
}

TEST_CASE("scalar integrals of discrete fields")
{
    const auto S = FeSpace::make(sphere_domain(3), FeFamily::P2Scalar);
    const FeFunction z2 = interpolate(S, [](const Vec3& x) { return x.z() * x.z(); });
    CHECK(integrate(z2) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-4));
    CHECK(mean_value(z2) == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
    const FeFunction z = interpolate(S, [](const Vec3& x) { return x.z(); });
    CHECK(l2_norm(z) == doctest::Approx(std::sqrt(4.0 * kPi / 3.0)).epsilon(1e-4));
    CHECK(h1_seminorm(z) == doctest::Approx(std::sqrt(8.0 * kPi / 3.0)).epsilon(1e-3));
}

TEST_CASE("strain form: rotation is a Killing field")
{
    for (FeFamily fam : {FeFamily::P1VectorTangential, FeFamily::P2VectorTangential}) {
        const auto V = FeSpace::make(sphere_domain(3), fam);
        const AssembledForm A = assemble_vec_a(*V);
        CHECK(A.asymmetry() < 1e-12);
        const VecX k = V->to_reduced(interpolate_vector(V, rotation).coeffs);
        const double kk = k.dot(assemble_vec_m(*V).matrix * k);
        CHECK(kk == doctest::Approx(8.0 * kPi / 3.0).epsilon(fam == FeFamily::P1VectorTangential ? 1e-2 : 1e-4));
        CHECK(k.dot(A.matrix * k) / kk < (fam == FeFamily::P1VectorTangential ? 2e-2 : 2e-4));
        // Gradient fields are not Killing: a(grad z, grad z) = 2 int |E|^2 = 2 int z^2 |P|^2 = 16 pi / 3.
        const VecX g = V->to_reduced(interpolate_vector(V, grad_z).coeffs);
        CHECK(g.dot(A.matrix * g) == doctest::Approx(16.0 * kPi / 3.0).epsilon(fam == FeFamily::P1VectorTangential ? 3e-2 : 1e-3));
    }
}

TEST_CASE("viscous form scales with the viscosity field")
{
    const auto dom = sphere_domain(2);
    const auto V = FeSpace::make(dom, FeFamily::P2VectorTangential);
    const auto S = FeSpace::make(dom, FeFamily::P1Scalar);
    const SpMat A = assemble_vec_a(*V).matrix;
    const FeFunction one(S, VecX::Ones(S->dof_count()));
    const FeFunction two(S, VecX::Constant(S->dof_count(), 2.0));
    CHECK(max_abs(assemble_a_hat(one, *V, *V).matrix - A) < 1e-12 * max_abs(A));
    CHECK(max_abs(assemble_a_hat(two, *V, *V).matrix - 2.0 * A) < 1e-12 * max_abs(A));
    const SpMat W = assemble_vec_a_weighted(*V, [](std::size_t, std::size_t) { return 1.0; }).matrix;
    CHECK(max_abs(W - A) < 1e-12 * max_abs(A));
}

TEST_CASE("convective forms")
{
    const auto dom = sphere_domain(3);
    const auto V = FeSpace::make(dom, FeFamily::P2VectorTangential);
    const auto S = FeSpace::make(dom, FeFamily::P2Scalar);

    // c2(1 + z, 1 + z, grad z) = int (1 + z)(1 - z^2) = 8 pi / 3.
    const FeFunction onez = interpolate(S, [](const Vec3& x) { return 1.0 + x.z(); });
    const FeFunction gz = interpolate_vector(V, grad_z);
    CHECK(apply_c2(onez, onez, gz) == doctest::Approx(8.0 * kPi / 3.0).epsilon(1e-3));

    // Antisymmetry along a divergence-free transport field.
    const FeFunction k = interpolate_vector(V, rotation);
    const FeFunction a = interpolate(S, [](const Vec3& x) { return x.x() + x.y() * x.y() + x.z(); });
    const FeFunction b = interpolate(S, [](const Vec3& x) { return x.x() * x.y() + x.z() * x.z(); });
    const double ab = apply_c2(a, b, k), ba = apply_c2(b, a, k);
    CHECK(std::abs(ab) > 0.1);
    CHECK(std::abs(ab + ba) < 1e-3 * std::abs(ab));

    const FeFunction u = interpolate_vector(V, [](const Vec3& x) { return Vec3(x.cross(Vec3(1, 2, 3)) * (1.0 + x.x())); });
    const FeFunction w = interpolate_vector(V, [](const Vec3& x) { return Vec3(grad_z(x) * (x.y() + x.x() * x.x())); });
    const double uw = apply_c1(u, k, w), wu = apply_c1(w, k, u);
    CHECK(std::abs(uw) > 0.05);
    CHECK(std::abs(uw + wu) < 1e-3 * std::abs(uw));

    // Frozen-slot matrices reproduce the trilinear form.
    const VecX ur = V->to_reduced(u.coeffs), kr = V->to_reduced(k.coeffs), wr = V->to_reduced(w.coeffs);
    CHECK(wr.dot(assemble_c1_matrix(1, u, *V).matrix * kr) == doctest::Approx(uw).epsilon(1e-10));
    CHECK(wr.dot(assemble_c1_matrix(2, k, *V).matrix * ur) == doctest::Approx(uw).epsilon(1e-10));
    CHECK(kr.dot(assemble_c1_matrix(3, w, *V).matrix * ur) == doctest::Approx(uw).epsilon(1e-10));
}

TEST_CASE("advection matrix conserves the mean")
{
    const auto dom = sphere_domain(2);
    const auto S = FeSpace::make(dom, FeFamily::P1Scalar);
    const auto V = FeSpace::make(dom, FeFamily::P2VectorTangential);
    const FeFunction u = interpolate_vector(V, [](const Vec3& x) { return Vec3(x.cross(Vec3(1, 2, 3)) + grad_z(x)); });
    const SpMat K = assemble_advection(*S, u).matrix;
    const VecX colsum = VecX::Ones(S->dof_count()).transpose() * K;
    CHECK(colsum.cwiseAbs().maxCoeff() < 1e-14 * max_abs(K) * S->dof_count());
}

TEST_CASE("curvature forms vanish on spheres")
{
    for (const auto& s : {EvolvingSurface::static_sphere(), EvolvingSurface::dilating_sphere(1.0, 0.3)}) {
        const auto dom = SurfaceDomain::make(mesh_for_surface(s, 2), s, 6);
        const auto S = FeSpace::make(dom, FeFamily::P1Scalar);
        CHECK(max_abs(assemble_b(*S).matrix) < 1e-12);
    }
}

TEST_CASE("l form on the dilating sphere")
{
    // V_N = rate, shape operator P / r: l(u, u) = rate / r int |u|^2.
    const double rate = 0.3;
    const auto s = EvolvingSurface::dilating_sphere(1.0, rate);
    const auto dom = SurfaceDomain::make(mesh_for_surface(s, 2), s, 6);
    const auto V = FeSpace::make(dom, FeFamily::P2VectorTangential);
    const SpMat L = assemble_l(*V).matrix;
    const SpMat M = assemble_vec_m(*V).matrix;
    CHECK(max_abs(L - rate * M) < 1e-12 * max_abs(M));
    const auto st = EvolvingSurface::static_sphere();
    const auto V0 = FeSpace::make(SurfaceDomain::make(mesh_for_surface(st, 2), st, 6), FeFamily::P2VectorTangential);
    CHECK(max_abs(assemble_l(*V0).matrix) == 0.0);
}

TEST_CASE("time derivative of the strain form vanishes under dilation")
{
    // a(u, u) with frozen Cartesian nodal values is scale invariant for a uniformly dilating sphere.
    for (const auto& s : {EvolvingSurface::static_sphere(), EvolvingSurface::dilating_sphere(1.0, 0.5)}) {
        const SurfaceMesh m = mesh_for_surface(s, 2);
        const auto V = FeSpace::make(SurfaceDomain::make(m, s, 6), FeFamily::P1VectorTangential);
        const VecX u = interpolate_vector(V, [](const Vec3& x) { return Vec3(x.cross(Vec3(0.3, 1, 0)) * x.z()); }).coeffs;
        const VecX v = interpolate_vector(V, grad_z).coeffs;
        CHECK(std::abs(vec_b_finite_difference(u, v, FeFamily::P1VectorTangential, m, s, 1e-3)) < 1e-8);
    }
}

TEST_CASE("divergence matrix")
{
    const auto dom = sphere_domain(3);
    const auto V = FeSpace::make(dom, FeFamily::P2VectorTangential);
    const auto Q = FeSpace::make(dom, FeFamily::P1Scalar);
    const SpMat B = divergence_matrix(*V, *Q).matrix;
    const SpMat Bp = divergence_matrix(*V, *Q, DivergenceForm::IntegratedByParts).matrix;
    CHECK(B.rows() == static_cast<Eigen::Index>(Q->dof_count()));
    CHECK(B.cols() == static_cast<Eigen::Index>(V->reduced_dof_count()));
    // Rotation is divergence free.
    const VecX k = V->to_reduced(interpolate_vector(V, rotation).coeffs);
    CHECK((B * k).norm() < 1e-3 * k.norm());
    // Integrated by parts, constants see no divergence at all.
    const VecX one = VecX::Ones(Q->dof_count());
    CHECK((Bp.transpose() * one).cwiseAbs().maxCoeff() < 1e-13);
    // div grad z = -2 z: m(q, div grad z) = -2 m(q, z).
    const VecX g = V->to_reduced(interpolate_vector(V, grad_z).coeffs);
    const VecX zq = interpolate(Q, [](const Vec3& x) { return x.z(); }).coeffs;
    const double expected = -2.0 * zq.dot(assemble_m(*Q).matrix * zq);
    CHECK(zq.dot(B * g) == doctest::Approx(expected).epsilon(5e-3));
    CHECK(zq.dot(Bp * g) == doctest::Approx(expected).epsilon(5e-3));
}

TEST_CASE("forms reject spaces on different domains")
{
    const auto A = FeSpace::make(sphere_domain(1), FeFamily::P1Scalar);
    const auto B = FeSpace::make(sphere_domain(1), FeFamily::P1Scalar);
    try {
        require_same_domain(*A, *B);
        FAIL("expected MeshMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MeshMismatch);
    }
}
