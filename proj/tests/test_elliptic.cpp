// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "common.hpp"

#include "surfnsch/elliptic.hpp"
#include "surfnsch/error.hpp"
#include "surfnsch/forms.hpp"
#include "surfnsch/linalg.hpp"
#include "surfnsch/solver.hpp"
#include "surfnsch/verification.hpp"

#include <doctest.h>

#include <random>

using namespace surfnsch;
using testing_support::kPi;
using testing_support::y10;
using testing_support::y20;

namespace {

DomainPtr sphere_domain(int level)
{
    const auto s = EvolvingSurface::static_sphere();
    return SurfaceDomain::make(mesh_for_surface(s, level), s, 6);
}

// Surface curl nu x grad f of a random cubic polynomial: divergence free on any closed surface.
std::function<Vec3(const Vec3&)> random_curl(std::mt19937& rng)
{
    std::normal_distribution<double> N;
    std::array<double, 10> c;
    for (double& v : c) v = N(rng);
    return [c](const Vec3& x) {
        const Vec3 n = x.normalized();
        const double X = x.x(), Y = x.y(), Z = x.z();
        const Vec3 g(c[1] + 2 * c[4] * X + c[7] * Y + 3 * c[9] * X * X, c[2] + 2 * c[5] * Y + c[7] * X + c[8] * Z,
                     c[3] + 2 * c[6] * Z + c[8] * Y);
        return Vec3(n.cross(g));
    };
}

} // namespace

TEST_CASE("correction field vanishes without normal motion")
{
    const auto s = EvolvingSurface::static_sphere();
    CorrectionOptions opt;
    opt.force = [](const Vec3& x, double) { return Vec3(0.5 * Vec3::UnitZ().cross(x)); };
    const CorrectionField c = solve_correction(mesh_for_surface(s, 2), s, 0.0, opt);
    CHECK(c.psi.coeffs.norm() == 0.0);
    CHECK(c.u_tilde.coeffs.norm() == 0.0);
    CHECK(c.dpsi_dt.coeffs.norm() == 0.0);
    CHECK(testing_support::rel_l2_vec(c.body_force, [](const Vec3& x) { return Vec3(0.5 * Vec3::UnitZ().cross(x)); }) <
          0.02);
}

TEST_CASE("correction field for a synthetic zonal normal velocity")
{
    // H V_N = 2 Y20 on the unit sphere, so Psi = Y20 / 3.
    const auto s = EvolvingSurface::static_sphere().with_normal_velocity([](const Vec3& x, double) { return y20(x); });
    const CorrectionField c = solve_correction(mesh_for_surface(s, 4), s, 0.0);
    CHECK(testing_support::rel_l2(c.psi, [](const Vec3& x) { return y20(x) / 3.0; }) < 0.02);
    CHECK(std::abs(mean_value(c.psi)) <= 1e-12 * l2_norm(c.psi));
    CHECK(c.data_mean == doctest::Approx(0.0).scale(1.0));
    // grad Y20 = 3 z grad z with grad z = e_z - z nu.
    CHECK(testing_support::rel_l2_vec(c.u_tilde, [](const Vec3& x) {
              const Vec3 n = x.normalized();
              return Vec3(n.z() * (Vec3::UnitZ() - n.z() * n));
          }) < 0.02);
}

TEST_CASE("weak divergence of the correction velocity converges at first order")
{
    // Residual functional q -> m(q, div u_tilde) + m(q, H V_N), measured in the H^-1 dual norm.
    const auto s = EvolvingSurface::area_preserving_ellipsoid(1.0);
    double prev = 0.0, prev_h = 0.0;
    for (int level : {2, 3, 4}) {
        const SurfaceMesh m = mesh_for_surface(s, level, 0.2);
        const CorrectionField c = solve_correction(m, s, 0.2);
        const auto Q = pressure_space_for(c.u_tilde.space);
        const SpMat B = divergence_matrix(*c.u_tilde.space, *Q).matrix;
        const VecX r = B * c.u_tilde.space->to_reduced(c.u_tilde.coeffs) - divergence_data(*Q);
        const SpMat K = assemble_a(*Q).matrix + assemble_m(*Q).matrix;
        const LinearSolver solver(K);
        const double e = std::sqrt(r.dot(solver.solve(r)));
        const double h = max_edge_length(m);
        if (prev > 0.0) CHECK(std::log(prev / e) / std::log(prev_h / h) >= 0.9);
        prev = e;
        prev_h = h;
    }
}

TEST_CASE("time derivative of Psi: finite differences against the differentiated system")
{
    const auto s = EvolvingSurface::area_preserving_ellipsoid(1.0);
    const SurfaceMesh m = advect(mesh_for_surface(s, 3), s, 0.2, 8);
    CorrectionOptions fd;
    CorrectionOptions ds;
    ds.derivative = CorrectionDerivative::DifferentiatedSystem;
    const FeFunction a = solve_correction(m, s, 0.2, fd).dpsi_dt;
    const FeFunction b = solve_correction(m, s, 0.2, ds).dpsi_dt;
    CHECK(l2_norm(a) > 0.1);
    CHECK(l2_norm(FeFunction(a.space, a.coeffs - b.coeffs)) <= 0.05 * l2_norm(a));
}

TEST_CASE("inverse Laplacian on spherical harmonics")
{
    const auto S = FeSpace::make(sphere_domain(4), FeFamily::P1Scalar);
    const FeFunction z = remove_mean(interpolate(S, y20));
    const FeFunction g = inverse_laplacian(z);
    CHECK(l2_norm(FeFunction(S, g.coeffs - z.coeffs / 6.0)) <= 0.02 * l2_norm(z) / 6.0);
    CHECK(std::abs(mean_value(g)) < 1e-12);

    const FeFunction y = remove_mean(interpolate(S, y10));
    CHECK(h_minus1_norm(y) == doctest::Approx(l2_norm(y) / std::sqrt(2.0)).epsilon(0.02));
    CHECK(h_minus1_norm(FeFunction(S)) == 0.0);
    CHECK(inverse_laplacian(FeFunction(S)).coeffs.norm() == 0.0);
}

TEST_CASE("inverse Laplacian rejects data with a mean")
{
    const auto S = FeSpace::make(sphere_domain(2), FeFamily::P1Scalar);
    try {
        inverse_laplacian(interpolate(S, [](const Vec3&) { return 1.0; }));
        FAIL("expected NonZeroMean");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonZeroMean);
    }
}

TEST_CASE("inverse Laplacian is self-adjoint")
{
    const auto S = FeSpace::make(sphere_domain(3), FeFamily::P1Scalar);
    const SpMat M = assemble_m(*S).matrix;
    std::mt19937 rng(4);
    std::normal_distribution<double> N;
    for (int k = 0; k < 5; ++k) {
        VecX r1(S->dof_count()), r2(S->dof_count());
        for (Eigen::Index i = 0; i < r1.size(); ++i) {
            r1[i] = N(rng);
            r2[i] = N(rng);
        }
        const FeFunction z1 = remove_mean(FeFunction(S, r1)), z2 = remove_mean(FeFunction(S, r2));
        const double a = z1.coeffs.dot(M * inverse_laplacian(z2).coeffs);
        const double b = z2.coeffs.dot(M * inverse_laplacian(z1).coeffs);
        CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
        CHECK(h_minus1_norm(z1) >= 0.0);
    }
}

TEST_CASE("H^-1 norm of an eigenfunction converges at second order")
{
    double prev = 0.0, prev_h = 0.0;
    for (int level : {2, 3, 4}) {
        const auto S = FeSpace::make(sphere_domain(level), FeFamily::P1Scalar);
        const FeFunction z = remove_mean(interpolate(S, y20));
        // Exact: |Y20|_{L2} / sqrt(6) with |Y20|^2 = 4 pi / 5.
        const double e = std::abs(h_minus1_norm(z) - std::sqrt(4.0 * kPi / 5.0 / 6.0));
        const double h = S->domain()->h();
        if (prev > 0.0) CHECK(std::log(prev / e) / std::log(prev_h / h) >= 1.8);
        prev = e;
        prev_h = h;
    }
}

TEST_CASE("inverse Stokes operator")
{
    const auto V = FeSpace::make(sphere_domain(3), FeFamily::P2VectorTangential);
    const auto Q = pressure_space_for(V);
    const InverseStokes S(V, Q);
    const FeFunction k = interpolate_vector(V, testing_support::rotation);
    CHECK(S.s_norm(k) == doctest::Approx(std::sqrt(8.0 * kPi / 3.0)).epsilon(0.02));
    CHECK(vec_l2_norm(FeFunction(V, S.apply(k).coeffs - k.coeffs)) <= 0.02 * vec_l2_norm(k));
    CHECK(S.apply(FeFunction(V)).coeffs.norm() == 0.0);

    std::mt19937 rng(17);
    std::vector<FeFunction> fields;
    for (int i = 0; i < 20; ++i) {
        const FeFunction phi = interpolate_vector(V, random_curl(rng));
        CHECK(S.s_norm(phi) <= vec_l2_norm(phi) * (1.0 + 1e-8));
        fields.push_back(phi);
    }
    // Self-adjoint in m, discretely divergence free.
    const SpMat& M = S.mass();
    for (int i = 0; i + 1 < 6; ++i) {
        const VecX a = V->to_reduced(fields[i].coeffs), b = V->to_reduced(fields[i + 1].coeffs);
        const VecX Sa = V->to_reduced(S.apply(fields[i]).coeffs), Sb = V->to_reduced(S.apply(fields[i + 1]).coeffs);
        const double ab = a.dot(M * Sb), ba = b.dot(M * Sa);
        CHECK(std::abs(ab - ba) <= 1e-10 * std::max(1.0, std::abs(ab)));
        CHECK(dual_norm(assemble_m(*Q).matrix, S.divergence() * Sa) <= 1e-8 * a.norm());
    }
    // Triangle inequality on random triples.
    for (int i = 0; i + 2 < 20; i += 3) {
        const FeFunction sum(V, fields[i].coeffs + fields[i + 1].coeffs);
        CHECK(S.s_norm(sum) <= S.s_norm(fields[i]) + S.s_norm(fields[i + 1]) + 1e-12);
    }
}

TEST_CASE("inf-sup constant: Taylor-Hood baseline and equal order")
{
    const auto dom = sphere_domain(3);
    const auto V2 = FeSpace::make(dom, FeFamily::P2VectorTangential);
    const double beta3 = inf_sup(V2, pressure_space_for(V2), InfSupMethod::Dense).beta;
    CHECK(beta3 == doctest::Approx(kInfSupBaselineLevel3).epsilon(1e-5));
    CHECK(inf_sup(V2, pressure_space_for(V2), InfSupMethod::Lanczos).beta == doctest::Approx(beta3).epsilon(1e-4));

    const auto V1 = FeSpace::make(dom, FeFamily::P1VectorTangential);
    const double beta_p1 = inf_sup_constant(V1, FeSpace::make(dom, FeFamily::P1Scalar));
    CHECK(beta_p1 <= 0.1 * beta3);
}

TEST_CASE("Killing kernel dimension")
{
    const auto sphere = FeSpace::make(sphere_domain(3), FeFamily::P2VectorTangential);
    CHECK(killing_kernel_dim(sphere) == 3);
    CHECK(killing_kernel_dim(sphere, 1e-3) == 3);
    // No symmetry: the smallest strain eigenvalues are small but mesh-converged, not a kernel.
    const auto s = EvolvingSurface::static_ellipsoid(1.0, 1.25, 0.8);
    const auto V = FeSpace::make(SurfaceDomain::make(mesh_for_surface(s, 3), s, 6), FeFamily::P2VectorTangential);
    CHECK(killing_kernel_dim(V, 1e-3) == 0);
}
