// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/piola.hpp"

#include "surfnsch/error.hpp"
#include "surfnsch/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>

namespace surfnsch {

namespace {

using Frame = Eigen::Matrix<double, 3, 2>;

Frame frame_at(const Vec3& nu)
{
    Eigen::Index k;
    nu.cwiseAbs().minCoeff(&k);
    Vec3 a = Vec3::Zero();
    a[k] = 1.0;
    const Vec3 t1 = (a - nu.dot(a) * nu).normalized();
    Frame f;
    f.col(0) = t1;
    f.col(1) = nu.cross(t1);
    return f;
}

Vec3 frame_normal(const Frame& f)
{
    return f.col(0).cross(f.col(1));
}

void check_compatible(const FeSpace& a, const FeSpace& b, const PiolaMapData& maps)
{
    if (!a.is_vector() || !b.is_vector()) fail(ErrorCode::InvalidArgument, "Piola maps act on vector fields");
    if (a.family() != b.family() || a.num_nodes() != b.num_nodes() ||
        a.domain()->num_elements() != maps.J.size() || b.domain()->num_elements() != maps.J.size() ||
        a.num_nodes() > maps.node_D.size())
        fail(ErrorCode::MeshMismatch, "Piola source and target spaces do not match");
}

// Vertex two-rings, excluding the vertex itself.
std::vector<std::vector<int>> two_rings(const SurfaceMesh& mesh)
{
    const std::size_t nv = mesh.vertices.size();
    std::vector<std::vector<int>> one(nv);
    for (const Tri& t : mesh.triangles)
        for (int k = 0; k < 3; ++k) {
            one[t[k]].push_back(t[(k + 1) % 3]);
            one[t[k]].push_back(t[(k + 2) % 3]);
        }
    for (auto& r : one) {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
    }
    std::vector<std::vector<int>> two(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        auto& r = two[i];
        for (int j : one[i]) {
            r.push_back(j);
            r.insert(r.end(), one[j].begin(), one[j].end());
        }
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        r.erase(std::remove(r.begin(), r.end(), static_cast<int>(i)), r.end());
    }
    return two;
}

// Linear part of y ~ L xi + (quadratic in xi) fitted over a vertex patch, xi being
// tangent-plane coordinates of the reference positions. Returns L a^T.
Mat3 fit_differential(const SurfaceMesh& mesh, std::size_t i, const std::vector<int>& patch, const Frame& a)
{
    const int n = static_cast<int>(patch.size());
    Eigen::MatrixXd X(n, 5), Y(n, 3);
    double scale = 0.0;
    for (int j : patch) scale = std::max(scale, (mesh.ref_vertices[j] - mesh.ref_vertices[i]).norm());
    for (int r = 0; r < n; ++r) {
        const int j = patch[r];
        const Eigen::Vector2d xi = a.transpose() * (mesh.ref_vertices[j] - mesh.ref_vertices[i]) / scale;
        X.row(r) << xi[0], xi[1], xi[0] * xi[0], xi[0] * xi[1], xi[1] * xi[1];
        Y.row(r) = (mesh.vertices[j] - mesh.vertices[i]).transpose() / scale;
    }
    const Eigen::MatrixXd C = X.colPivHouseholderQr().solve(Y);
    const Eigen::Matrix<double, 3, 2> L = C.topRows(2).transpose();
    return L * a.transpose();
}

} // namespace

PiolaMapData piola_maps(const SurfaceMesh& mesh_t, const EvolvingSurface& surface, double t)
{
    if (mesh_t.ref_vertices.size() != mesh_t.vertices.size())
        fail(ErrorCode::MeshMismatch, "mesh carries no reference vertices");
    const SurfaceFrame f0 = surface.at(0.0);
    const SurfaceFrame ft = surface.at(t);
    const std::size_t ne = mesh_t.triangles.size();
    PiolaMapData m;
    m.t = t;
    m.D.resize(ne);
    m.D_inv.resize(ne);
    m.J.resize(ne);
    m.A.resize(ne);
    m.A_inv.resize(ne);
    m.frame0.resize(ne);
    m.frame_t.resize(ne);
    m.M.resize(ne);
    m.ref_area.resize(ne);
    parallel_for(ne, [&](std::size_t e) {
        const Tri& tr = mesh_t.triangles[e];
        Eigen::Matrix<double, 3, 2> E0, Et;
        E0.col(0) = mesh_t.ref_vertices[tr[1]] - mesh_t.ref_vertices[tr[0]];
        E0.col(1) = mesh_t.ref_vertices[tr[2]] - mesh_t.ref_vertices[tr[0]];
        Et.col(0) = mesh_t.vertices[tr[1]] - mesh_t.vertices[tr[0]];
        Et.col(1) = mesh_t.vertices[tr[2]] - mesh_t.vertices[tr[0]];
        const double area0 = 0.5 * E0.col(0).cross(E0.col(1)).norm();
        const double areat = 0.5 * Et.col(0).cross(Et.col(1)).norm();
        if (area0 < 1e-14) fail(ErrorCode::DegenerateElement, "reference triangle with vanishing area");
        const Vec3 c0 = (mesh_t.ref_vertices[tr[0]] + mesh_t.ref_vertices[tr[1]] + mesh_t.ref_vertices[tr[2]]) / 3.0;
        const Vec3 ct = (mesh_t.vertices[tr[0]] + mesh_t.vertices[tr[1]] + mesh_t.vertices[tr[2]]) / 3.0;
        const Vec3 nu0 = f0.gradient(f0.closest_point(c0)).normalized();
        const Vec3 nut = ft.gradient(ft.closest_point(ct)).normalized();
        const Frame a = frame_at(nu0), b = frame_at(nut);
        const Eigen::Matrix2d C0 = a.transpose() * E0;
        const Eigen::Matrix2d Ct = b.transpose() * Et;
        const Eigen::Matrix2d M = Ct * C0.inverse();
        const Eigen::Matrix2d Minv = M.inverse();
        m.frame0[e] = a;
        m.frame_t[e] = b;
        m.M[e] = M;
        m.ref_area[e] = area0;
        m.J[e] = areat / area0;
        m.D[e] = b * M * a.transpose();
        m.D_inv[e] = a * Minv * b.transpose();
        m.A[e] = m.D[e] / m.J[e] + nut * nu0.transpose();
        m.A_inv[e] = m.J[e] * m.D_inv[e] + nu0 * nut.transpose();
    });

    const std::size_t nv = mesh_t.vertices.size();
    const auto rings = two_rings(mesh_t);
    m.node_D.resize(nv);
    parallel_for(nv, [&](std::size_t i) {
        const Frame a = frame_at(f0.gradient(mesh_t.ref_vertices[i]).normalized());
        m.node_D[i] = fit_differential(mesh_t, i, rings[i], a);
    });
    for (const auto& ed : build_topology(mesh_t).edges) m.node_D.push_back(0.5 * (m.node_D[ed[0]] + m.node_D[ed[1]]));
    return m;
}

FeFunction piola_push(const FeFunction& field0, const PiolaMapData& maps, const SpacePtr& target)
{
    const FeSpace& src = *field0.space;
    check_compatible(src, *target, maps);
    FeFunction out(target);
    for (std::size_t i = 0; i < target->num_nodes(); ++i) {
        const Frame a = frame_at(src.node_normal(i));
        const Frame b = frame_at(target->node_normal(i));
        const Eigen::Matrix2d M = b.transpose() * maps.node_D[i] * a;
        const double J = M.determinant();
        const Mat3 A = b * M * a.transpose() / J + frame_normal(b) * frame_normal(a).transpose();
        out.coeffs.segment<3>(3 * i) = A * field0.coeffs.segment<3>(3 * i);
    }
    return out;
}

FeFunction piola_pull(const FeFunction& field_t, const PiolaMapData& maps, const SpacePtr& reference)
{
    const FeSpace& cur = *field_t.space;
    check_compatible(*reference, cur, maps);
    FeFunction out(reference);
    for (std::size_t i = 0; i < cur.num_nodes(); ++i) {
        const Frame a = frame_at(reference->node_normal(i));
        const Frame b = frame_at(cur.node_normal(i));
        const Eigen::Matrix2d M = b.transpose() * maps.node_D[i] * a;
        const double J = M.determinant();
        const Mat3 Ainv = J * a * M.inverse() * b.transpose() + frame_normal(a) * frame_normal(b).transpose();
        out.coeffs.segment<3>(3 * i) = Ainv * field_t.coeffs.segment<3>(3 * i);
    }
    return out;
}

} // namespace surfnsch
