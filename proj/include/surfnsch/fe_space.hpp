// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include "surfnsch/domain.hpp"

#include <functional>
#include <memory>

namespace surfnsch {

enum class FeFamily { P1Scalar, P2Scalar, P1VectorTangential, P2VectorTangential };

/// Lagrange space on a SurfaceDomain. Nodes are the mesh vertices, followed by
/// edge midpoints for P2. Vector spaces store three Cartesian components per
/// node (dof 3i+c); nodal values are kept orthogonal to the analytic normal at
/// the lifted node, and solves run in the 2-per-node tangent frame basis.
class FeSpace {
public:
    FeSpace(DomainPtr domain, FeFamily family);

    static std::shared_ptr<const FeSpace> make(DomainPtr domain, FeFamily family)
    {
        return std::make_shared<const FeSpace>(std::move(domain), family);
    }

    const DomainPtr& domain() const { return domain_; }
    FeFamily family() const { return family_; }
    bool is_vector() const { return family_ == FeFamily::P1VectorTangential || family_ == FeFamily::P2VectorTangential; }
    int order() const { return (family_ == FeFamily::P2Scalar || family_ == FeFamily::P2VectorTangential) ? 2 : 1; }

    std::size_t num_nodes() const { return node_x_.size(); }
    std::size_t dof_count() const { return is_vector() ? 3 * num_nodes() : num_nodes(); }
    std::size_t reduced_dof_count() const { return is_vector() ? 2 * num_nodes() : num_nodes(); }
    int nodes_per_element() const { return order() == 2 ? 6 : 3; }
    const int* element_nodes(std::size_t e) const { return &elem_nodes_[e * nodes_per_element()]; }

    const Vec3& node_flat(std::size_t i) const { return node_x_[i]; }
    const Vec3& node_point(std::size_t i) const { return node_p_[i]; }
    const Vec3& node_normal(std::size_t i) const { return node_nu_[i]; }
    const Vec3& node_tangent(std::size_t i, int a) const { return node_t_[2 * i + a]; }

    /// Basis value and lifted tangential gradient of local node k at quadrature point (e, q).
    double value(std::size_t e, std::size_t q, int k) const { return val_[index(e, q, k)]; }
    const Vec3& grad(std::size_t e, std::size_t q, int k) const { return grad_[index(e, q, k)]; }

    /// 3N x 2N tangent frame basis (vector spaces only).
    const SpMat& tangent_basis() const { return tangent_; }
    VecX to_reduced(const VecX& full) const;
    VecX from_reduced(const VecX& reduced) const;
    /// Removes the nodal normal component.
    VecX project_tangential(const VecX& full) const;
    double max_normal_component(const VecX& full) const;

    /// True when both spaces are built on the same domain object.
    bool same_domain(const FeSpace& other) const { return domain_ == other.domain_; }

private:
    std::size_t index(std::size_t e, std::size_t q, int k) const
    {
        return (e * nq_ + q) * nodes_per_element() + k;
    }

    DomainPtr domain_;
    FeFamily family_;
    std::size_t nq_ = 0;
    std::vector<int> elem_nodes_;
    std::vector<Vec3> node_x_, node_p_, node_nu_, node_t_;
    std::vector<double> val_;
    std::vector<Vec3> grad_;
    SpMat tangent_;
};

using SpacePtr = std::shared_ptr<const FeSpace>;

/// Coefficient vector over an FeSpace.
struct FeFunction {
    SpacePtr space;
    VecX coeffs;

    FeFunction() = default;
    explicit FeFunction(SpacePtr s) : space(std::move(s)), coeffs(VecX::Zero(space->dof_count())) {}
    FeFunction(SpacePtr s, VecX c);

    /// Scalar value at a quadrature point.
    double value(std::size_t e, std::size_t q) const;
    /// Tangential gradient of a scalar function.
    Vec3 gradient(std::size_t e, std::size_t q) const;
    /// Tangential vector value P u_h.
    Vec3 vector_value(std::size_t e, std::size_t q) const;
    /// Tangential gradient of a vector function (3x3, rows = components).
    Mat3 vector_gradient(std::size_t e, std::size_t q) const;
};

/// Nodal interpolation at the lifted nodes.
FeFunction interpolate(const SpacePtr& space, const std::function<double(const Vec3&)>& f);
/// Nodal interpolation of a vector field, projected onto the nodal tangent plane.
FeFunction interpolate_vector(const SpacePtr& space, const std::function<Vec3(const Vec3&)>& f);

/// Tangential gradient of a vector field u_h = sum U_i N_i with Cartesian coefficients
/// evaluated through P: P G - (nu . u_h) shape_op.
Mat3 tangential_vector_gradient(const GeomSample& g, const Vec3& uh, const Mat3& G);

} // namespace surfnsch
