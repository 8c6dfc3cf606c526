// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include "surfnsch/geometry.hpp"
#include "surfnsch/mesh.hpp"
#include "surfnsch/quadrature.hpp"

#include <memory>

namespace surfnsch {

/// Quadrature point of a flat triangle together with its lift onto Gamma(t).
struct QuadPoint {
    Vec3 x;           // point on the flat triangle
    Vec3 p;           // closest point on Gamma(t)
    double d = 0.0;   // x = p + d nu(p)
    double w = 0.0;   // rule weight * flat area * lift area factor
    GeomSample g;     // geometry at p
    Mat3 lift;        // maps a flat in-plane gradient to the tangential gradient of the lift
};

/// A mesh on Gamma(t) with lifted quadrature. Integrals assembled through a
/// domain are over the exact surface Gamma(t), not the polyhedron.
class SurfaceDomain {
public:
    SurfaceDomain(SurfaceMesh mesh, EvolvingSurface surface, int quad_degree = 4);

    static std::shared_ptr<const SurfaceDomain> make(SurfaceMesh mesh, EvolvingSurface surface,
                                                     int quad_degree = 4)
    {
        return std::make_shared<const SurfaceDomain>(std::move(mesh), std::move(surface), quad_degree);
    }

    const SurfaceMesh& mesh() const { return mesh_; }
    const EvolvingSurface& surface() const { return surface_; }
    const SurfaceFrame& frame() const { return frame_; }
    const MeshTopology& topology() const { return topo_; }
    const TriangleRule& rule() const { return rule_; }
    double t() const { return mesh_.t; }
    int quad_degree() const { return rule_.degree; }

    std::size_t num_elements() const { return mesh_.triangles.size(); }
    std::size_t num_qp() const { return rule_.size(); }
    const QuadPoint& qp(std::size_t e, std::size_t q) const { return qps_[e * rule_.size() + q]; }

    double flat_area(std::size_t e) const { return flat_area_[e]; }
    const Vec3& flat_normal(std::size_t e) const { return flat_normal_[e]; }
    /// In-plane gradients of the three barycentric coordinates.
    const std::array<Vec3, 3>& bary_gradients(std::size_t e) const { return bary_grad_[e]; }

    /// Sum of all quadrature weights, i.e. |Gamma(t)| up to quadrature error.
    double area() const { return area_; }
    /// Longest mesh edge.
    double h() const { return h_; }

private:
    SurfaceMesh mesh_;
    EvolvingSurface surface_;
    SurfaceFrame frame_;
    MeshTopology topo_;
    TriangleRule rule_;
    std::vector<QuadPoint> qps_;
    std::vector<double> flat_area_;
    std::vector<Vec3> flat_normal_;
    std::vector<std::array<Vec3, 3>> bary_grad_;
    double area_ = 0.0;
    double h_ = 0.0;
};

using DomainPtr = std::shared_ptr<const SurfaceDomain>;

} // namespace surfnsch
