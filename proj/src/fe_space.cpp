// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/fe_space.hpp"

#include "surfnsch/error.hpp"
#include "surfnsch/parallel.hpp"

#include <cmath>

namespace surfnsch {

namespace {

// Unit tangents orthogonal to nu, chosen continuously from the coordinate axis least aligned with nu.
void tangent_frame(const Vec3& nu, Vec3& t1, Vec3& t2)
{
    Eigen::Index k;
    nu.cwiseAbs().minCoeff(&k);
    Vec3 a = Vec3::Zero();
    a[k] = 1.0;
    t1 = (a - nu.dot(a) * nu).normalized();
    t2 = nu.cross(t1);
}

} // namespace

FeSpace::FeSpace(DomainPtr domain, FeFamily family)
    : domain_(std::move(domain))
    , family_(family)
{
    const SurfaceMesh& mesh = domain_->mesh();
    const MeshTopology& topo = domain_->topology();
    const SurfaceFrame& frame = domain_->frame();
    const std::size_t ne = mesh.triangles.size();
    const int npe = nodes_per_element();
    nq_ = domain_->num_qp();

    node_x_ = mesh.vertices;
    if (order() == 2)
        for (const auto& ed : topo.edges) node_x_.push_back(0.5 * (mesh.vertices[ed[0]] + mesh.vertices[ed[1]]));
    const std::size_t nv = mesh.vertices.size();

    elem_nodes_.resize(ne * npe);
    for (std::size_t e = 0; e < ne; ++e) {
        for (int k = 0; k < 3; ++k) elem_nodes_[e * npe + k] = mesh.triangles[e][k];
        if (order() == 2)
            for (int k = 0; k < 3; ++k) elem_nodes_[e * npe + 3 + k] = static_cast<int>(nv) + topo.tri_edges[e][k];
    }

    const std::size_t nn = node_x_.size();
    node_p_.resize(nn);
    node_nu_.resize(nn);
    node_t_.resize(2 * nn);
    parallel_for(nn, [&](std::size_t i) {
        node_p_[i] = i < nv ? node_x_[i] : frame.closest_point(node_x_[i]);
        const Vec3 g = frame.gradient(node_p_[i]);
        if (g.norm() < 1e-8) fail(ErrorCode::DegenerateGradient, "level gradient vanishes at a node");
        node_nu_[i] = g.normalized();
        tangent_frame(node_nu_[i], node_t_[2 * i], node_t_[2 * i + 1]);
    });

    val_.resize(ne * nq_ * npe);
    grad_.resize(ne * nq_ * npe);
    const TriangleRule& rule = domain_->rule();
    parallel_for(ne, [&](std::size_t e) {
        const auto& bg = domain_->bary_gradients(e);
        for (std::size_t q = 0; q < nq_; ++q) {
            const auto& l = rule.bary[q];
            const Mat3& lift = domain_->qp(e, q).lift;
            double v[6];
            Vec3 g[6];
            if (order() == 1) {
                for (int k = 0; k < 3; ++k) {
                    v[k] = l[k];
                    g[k] = bg[k];
                }
            } else {
                for (int k = 0; k < 3; ++k) {
                    v[k] = l[k] * (2.0 * l[k] - 1.0);
                    g[k] = (4.0 * l[k] - 1.0) * bg[k];
                    const int a = k, b = (k + 1) % 3;
                    v[3 + k] = 4.0 * l[a] * l[b];
                    g[3 + k] = 4.0 * (l[b] * bg[a] + l[a] * bg[b]);
                }
            }
            for (int k = 0; k < npe; ++k) {
                val_[index(e, q, k)] = v[k];
                grad_[index(e, q, k)] = lift * g[k];
            }
        }
    });

    if (is_vector()) {
        std::vector<Triplet> trips;
        trips.reserve(6 * nn);
        for (std::size_t i = 0; i < nn; ++i)
            for (int a = 0; a < 2; ++a)
                for (int c = 0; c < 3; ++c) trips.emplace_back(3 * i + c, 2 * i + a, node_t_[2 * i + a][c]);
        tangent_.resize(3 * nn, 2 * nn);
        tangent_.setFromTriplets(trips.begin(), trips.end());
    }
}

VecX FeSpace::to_reduced(const VecX& full) const
{
    return tangent_.transpose() * full;
}

VecX FeSpace::from_reduced(const VecX& reduced) const
{
    return tangent_ * reduced;
}

VecX FeSpace::project_tangential(const VecX& full) const
{
    VecX out = full;
    for (std::size_t i = 0; i < num_nodes(); ++i) {
        const Vec3 u = full.segment<3>(3 * i);
        out.segment<3>(3 * i) = u - node_nu_[i].dot(u) * node_nu_[i];
    }
    return out;
}

double FeSpace::max_normal_component(const VecX& full) const
{
    double m = 0.0;
    for (std::size_t i = 0; i < num_nodes(); ++i)
        m = std::max(m, std::abs(node_nu_[i].dot(full.segment<3>(3 * i))));
    return m;
}

FeFunction::FeFunction(SpacePtr s, VecX c)
    : space(std::move(s))
    , coeffs(std::move(c))
{
    if (static_cast<std::size_t>(coeffs.size()) != space->dof_count())
        fail(ErrorCode::MeshMismatch, "coefficient vector length does not match the space");
}

double FeFunction::value(std::size_t e, std::size_t q) const
{
    const FeSpace& s = *space;
    const int* nodes = s.element_nodes(e);
    double v = 0.0;
    for (int k = 0; k < s.nodes_per_element(); ++k) v += coeffs[nodes[k]] * s.value(e, q, k);
    return v;
}

Vec3 FeFunction::gradient(std::size_t e, std::size_t q) const
{
    const FeSpace& s = *space;
    const int* nodes = s.element_nodes(e);
    Vec3 g = Vec3::Zero();
    for (int k = 0; k < s.nodes_per_element(); ++k) g += coeffs[nodes[k]] * s.grad(e, q, k);
    return g;
}

Vec3 FeFunction::vector_value(std::size_t e, std::size_t q) const
{
    const FeSpace& s = *space;
    const int* nodes = s.element_nodes(e);
    Vec3 u = Vec3::Zero();
    for (int k = 0; k < s.nodes_per_element(); ++k) u += s.value(e, q, k) * coeffs.segment<3>(3 * nodes[k]);
    return s.domain()->qp(e, q).g.proj * u;
}

Mat3 FeFunction::vector_gradient(std::size_t e, std::size_t q) const
{
    const FeSpace& s = *space;
    const int* nodes = s.element_nodes(e);
    Vec3 u = Vec3::Zero();
    Mat3 G = Mat3::Zero();
    for (int k = 0; k < s.nodes_per_element(); ++k) {
        const Vec3 U = coeffs.segment<3>(3 * nodes[k]);
        u += s.value(e, q, k) * U;
        G += U * s.grad(e, q, k).transpose();
    }
    return tangential_vector_gradient(s.domain()->qp(e, q).g, u, G);
}

Mat3 tangential_vector_gradient(const GeomSample& g, const Vec3& uh, const Mat3& G)
{
    return g.proj * G - g.nu.dot(uh) * g.shape_op;
}

FeFunction interpolate(const SpacePtr& space, const std::function<double(const Vec3&)>& f)
{
    if (space->is_vector()) fail(ErrorCode::InvalidArgument, "interpolate needs a scalar space");
    FeFunction out(space);
    for (std::size_t i = 0; i < space->num_nodes(); ++i) out.coeffs[i] = f(space->node_point(i));
    return out;
}

FeFunction interpolate_vector(const SpacePtr& space, const std::function<Vec3(const Vec3&)>& f)
{
    if (!space->is_vector()) fail(ErrorCode::InvalidArgument, "interpolate_vector needs a vector space");
    FeFunction out(space);
    for (std::size_t i = 0; i < space->num_nodes(); ++i) {
        const Vec3 v = f(space->node_point(i));
        const Vec3& n = space->node_normal(i);
        out.coeffs.segment<3>(3 * i) = v - n.dot(v) * n;
    }
    return out;
}

} // namespace surfnsch
