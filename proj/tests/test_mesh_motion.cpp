// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "common.hpp"

#include "surfnsch/error.hpp"
#include "surfnsch/mesh.hpp"
#include "surfnsch/piola.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>

using namespace surfnsch;
using testing_support::kPi;

namespace {

double max_vertex_distance(const SurfaceMesh& a, const SurfaceMesh& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.num_vertices(); ++i) d = std::max(d, (a.vertices[i] - b.vertices[i]).norm());
    return d;
}

} // namespace

TEST_CASE("icosphere sizes and topology")
{
    for (int l = 0; l <= 4; ++l) {
        const SurfaceMesh m = icosphere(l);
        const std::size_t f = 20u << (2 * l);
        CHECK(m.num_triangles() == f);
        CHECK(m.num_vertices() == f / 2 + 2);
        const MeshTopology t = build_topology(m);
        CHECK(t.euler_characteristic == 2);
        CHECK(t.watertight);
        CHECK(t.oriented);
        for (const Vec3& v : m.vertices) CHECK(std::abs(v.norm() - 1.0) < 1e-14);
    }
}

TEST_CASE("icosphere level range")
{
    for (int l : {-1, 8}) {
        try {
            icosphere(l);
            FAIL("expected LevelOutOfRange");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::LevelOutOfRange);
        }
    }
}

TEST_CASE("outward orientation")
{
    const SurfaceMesh m = icosphere(2);
    for (const Tri& t : m.triangles) {
        const Vec3 &a = m.vertices[t[0]], &b = m.vertices[t[1]], &c = m.vertices[t[2]];
        CHECK((b - a).cross(c - a).dot(a + b + c) > 0.0);
    }
}

TEST_CASE("advect on a static surface is the identity")
{
    const auto s = EvolvingSurface::static_sphere();
    const SurfaceMesh m = mesh_for_surface(s, 3);
    const SurfaceMesh n = advect(m, s, 0.7, 4);
    CHECK(n.t == 0.7);
    CHECK(max_vertex_distance(m, n) <= 1e-15);
}

TEST_CASE("advected ellipsoid mesh stays on the surface and keeps its area")
{
    const auto s = EvolvingSurface::area_preserving_ellipsoid(1.0);
    SurfaceMesh m = mesh_for_surface(s, 3);
    const double area0 = flat_area(m);
    for (int k = 1; k <= 10; ++k) {
        m = advect(m, s, 0.1 * k, 4);
        CHECK(max_level_residual(m, s) <= 1e-10);
        CHECK_NOTHROW(check_mesh(m, s));
        const MeshTopology t = build_topology(m);
        CHECK(t.watertight);
        CHECK(t.oriented);
    }
    // Polyhedral area drifts with mesh distortion only, not with the surface area.
    CHECK(std::abs(flat_area(m) - area0) / area0 < 1e-2);
    CHECK(min_angle_degrees(m) > 15.0);
}

TEST_CASE("advection of the dilating sphere matches the exact radius")
{
    const auto s = EvolvingSurface::dilating_sphere(1.0, 0.5);
    const SurfaceMesh m = advect(mesh_for_surface(s, 2), s, 1.0, 8);
    for (const Vec3& v : m.vertices) CHECK(std::abs(v.norm() - 1.5) < 1e-12);
    // Radial motion keeps each vertex on its ray.
    for (std::size_t i = 0; i < m.num_vertices(); ++i)
        CHECK((m.vertices[i].normalized() - m.ref_vertices[i].normalized()).norm() < 1e-12);
}

TEST_CASE("RK4 advection converges at fourth order")
{
    const auto s = EvolvingSurface::area_preserving_ellipsoid(1.0);
    const SurfaceMesh m = mesh_for_surface(s, 2);
    const SurfaceMesh ref = advect(m, s, 0.4, 256);
    double prev = 0.0;
    for (int n : {2, 4, 8}) {
        const double e = max_vertex_distance(advect(m, s, 0.4, n), ref);
        if (prev > 0.0) CHECK(std::log2(prev / e) >= 3.5);
        prev = e;
    }
}

TEST_CASE("backward advection returns to the start")
{
    const auto s = EvolvingSurface::area_preserving_ellipsoid(1.0);
    const SurfaceMesh m = mesh_for_surface(s, 2);
    const SurfaceMesh back = advect(advect(m, s, 0.3, 64), s, 0.0, 64);
    CHECK(max_vertex_distance(m, back) < 1e-9);
}

TEST_CASE("OFF round trip")
{
    const SurfaceMesh m = icosphere(1);
    const auto path = std::filesystem::temp_directory_path() / "surfnsch_roundtrip.off";
    write_off(m, path.string());
    const SurfaceMesh r = read_off(path.string());
    std::filesystem::remove(path);
    REQUIRE(r.num_vertices() == m.num_vertices());
    REQUIRE(r.num_triangles() == m.num_triangles());
    CHECK(max_vertex_distance(m, r) == 0.0);
    for (std::size_t i = 0; i < m.num_triangles(); ++i) CHECK(r.triangles[i] == m.triangles[i]);
}

TEST_CASE("Piola maps on a static surface are the identity")
{
    const auto s = EvolvingSurface::static_sphere();
    const SurfaceMesh m = mesh_for_surface(s, 2);
    const PiolaMapData p = piola_maps(m, s, 0.0);
    for (std::size_t e = 0; e < m.num_triangles(); ++e) {
        CHECK(std::abs(p.J[e] - 1.0) < 1e-14);
        CHECK((p.A[e] * p.A_inv[e] - Mat3::Identity()).norm() < 1e-12);
    }
}

TEST_CASE("Piola maps of the dilating sphere scale areas")
{
    const auto s = EvolvingSurface::dilating_sphere(1.0, 1.0);
    const SurfaceMesh m0 = mesh_for_surface(s, 2);
    const SurfaceMesh m1 = advect(m0, s, 1.0, 8);
    const PiolaMapData p = piola_maps(m1, s, 1.0);
    for (std::size_t e = 0; e < m1.num_triangles(); ++e) {
        CHECK(p.J[e] == doctest::Approx(4.0).epsilon(1e-12));
        CHECK((p.A[e] * p.A_inv[e] - Mat3::Identity()).norm() < 1e-12);
    }
}

TEST_CASE("Piola push and pull are inverse; rotation field is preserved on a static sphere")
{
    const auto ell = EvolvingSurface::area_preserving_ellipsoid(1.0);
    const SurfaceMesh m0 = mesh_for_surface(ell, 2);
    const SurfaceMesh mt = advect(m0, ell, 0.25, 8);
    const auto V0 = FeSpace::make(SurfaceDomain::make(m0, ell), FeFamily::P1VectorTangential);
    const auto Vt = FeSpace::make(SurfaceDomain::make(mt, ell), FeFamily::P1VectorTangential);
    const PiolaMapData p = piola_maps(mt, ell, 0.25);
    const FeFunction u0 = interpolate_vector(V0, [](const Vec3& x) { return Vec3(x.cross(Vec3(1, 2, 3))); });
    const FeFunction back = piola_pull(piola_push(u0, p, Vt), p, V0);
    CHECK((back.coeffs - u0.coeffs).norm() <= 1e-12 * u0.coeffs.norm());
    CHECK(Vt->max_normal_component(piola_push(u0, p, Vt).coeffs) < 1e-12);

    const auto sphere = EvolvingSurface::static_sphere();
    const SurfaceMesh ms = mesh_for_surface(sphere, 2);
    const auto Vs = FeSpace::make(SurfaceDomain::make(ms, sphere), FeFamily::P1VectorTangential);
    const FeFunction k = interpolate_vector(Vs, testing_support::rotation);
    const FeFunction pk = piola_push(k, piola_maps(ms, sphere, 0.0), Vs);
    CHECK((pk.coeffs - k.coeffs).norm() <= 1e-12 * k.coeffs.norm());
}
