// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/domain.hpp"

#include "surfnsch/error.hpp"
#include "surfnsch/parallel.hpp"

#include <cmath>

namespace surfnsch {

SurfaceDomain::SurfaceDomain(SurfaceMesh mesh, EvolvingSurface surface, int quad_degree)
    : mesh_(std::move(mesh))
    , surface_(std::move(surface))
    , frame_(surface_.at(mesh_.t))
    , topo_(build_topology(mesh_))
    , rule_(triangle_rule(quad_degree))
{
    const std::size_t ne = mesh_.triangles.size();
    const std::size_t nq = rule_.size();
    qps_.resize(ne * nq);
    flat_area_.resize(ne);
    flat_normal_.resize(ne);
    bary_grad_.resize(ne);

    parallel_for(ne, [&](std::size_t e) {
        const Tri& t = mesh_.triangles[e];
        const Vec3& x0 = mesh_.vertices[t[0]];
        const Vec3& x1 = mesh_.vertices[t[1]];
        const Vec3& x2 = mesh_.vertices[t[2]];
        const Vec3 e1 = x1 - x0, e2 = x2 - x0;
        const Vec3 n = e1.cross(e2);
        const double area = 0.5 * n.norm();
        if (area < 1e-14) fail(ErrorCode::DegenerateElement, "flat triangle with vanishing area");
        flat_area_[e] = area;
        const Vec3 nh = n / (2.0 * area);
        flat_normal_[e] = nh;
        Eigen::Matrix<double, 3, 2> J;
        J.col(0) = e1;
        J.col(1) = e2;
        const Eigen::Matrix<double, 3, 2> Jp = J * (J.transpose() * J).inverse();
        bary_grad_[e][1] = Jp.col(0);
        bary_grad_[e][2] = Jp.col(1);
        bary_grad_[e][0] = -Jp.col(0) - Jp.col(1);

        for (std::size_t q = 0; q < nq; ++q) {
            QuadPoint& Q = qps_[e * nq + q];
            const auto& b = rule_.bary[q];
            Q.x = b[0] * x0 + b[1] * x1 + b[2] * x2;
            Q.p = frame_.closest_point(Q.x);
            Q.g = frame_.sample(Q.p);
            const Vec3& nu = Q.g.nu;
            Q.d = (Q.x - Q.p).dot(nu);
            const double cosang = nu.dot(nh);
            if (std::abs(cosang) < 1e-3) fail(ErrorCode::DegenerateElement, "triangle nearly orthogonal to the surface");
            const double jac = 1.0 + Q.d * Q.g.H + Q.d * Q.d * Q.g.K;
            Q.w = rule_.weights[q] * area * std::abs(cosang) / jac;
            // Tangential gradient of the lift: (I + d H) (I - nu_h nu^T / (nu . nu_h)) g.
            const Mat3 tilt = Mat3::Identity() - nh * nu.transpose() / cosang;
            Q.lift = (Mat3::Identity() + Q.d * Q.g.shape_op) * tilt;
        }
    });
    for (const auto& Q : qps_) area_ += Q.w;
    h_ = max_edge_length(mesh_);
}

} // namespace surfnsch
