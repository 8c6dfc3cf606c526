// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/forms.hpp"

#include "surfnsch/error.hpp"
#include "surfnsch/parallel.hpp"

#include <cmath>

namespace surfnsch {

const char* to_string(FormTag tag)
{
    switch (tag) {
    case FormTag::M: return "m";
    case FormTag::A: return "a";
    case FormTag::VecM: return "vec_m";
    case FormTag::VecA: return "vec_a";
    case FormTag::AHat: return "a_hat";
    case FormTag::C1: return "c1";
    case FormTag::L: return "l";
    case FormTag::D1: return "d1";
    case FormTag::D2: return "d2";
    case FormTag::B: return "b";
    case FormTag::Div: return "div";
    case FormTag::Custom: return "custom";
    }
    return "?";
}

double AssembledForm::asymmetry() const
{
    if (matrix.rows() != matrix.cols()) return INFINITY;
    const SpMat d = matrix - SpMat(matrix.transpose());
    double m = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (SpMat::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
}

void require_same_domain(const FeSpace& a, const FeSpace& b)
{
    if (!a.same_domain(b)) fail(ErrorCode::MeshMismatch, "spaces live on different meshes");
}

namespace {

struct LocalBlock {
    std::vector<int> rows, cols;
    MatX K;
};

SpMat scatter(std::size_t nr, std::size_t nc, const std::vector<LocalBlock>& blocks)
{
    std::size_t nnz = 0;
    for (const auto& b : blocks) nnz += b.rows.size() * b.cols.size();
    std::vector<Triplet> trips;
    trips.reserve(nnz);
    for (const auto& b : blocks)
        for (std::size_t i = 0; i < b.rows.size(); ++i)
            for (std::size_t j = 0; j < b.cols.size(); ++j) trips.emplace_back(b.rows[i], b.cols[j], b.K(i, j));
    SpMat M(nr, nc);
    M.setFromTriplets(trips.begin(), trips.end());
    return M;
}

template <class F>
SpMat assemble_blocks(std::size_t nr, std::size_t nc, std::size_t ne, F&& local)
{
    std::vector<LocalBlock> blocks(ne);
    parallel_for(ne, [&](std::size_t e) { local(e, blocks[e]); });
    return scatter(nr, nc, blocks);
}

VecX scatter_vector(std::size_t n, const std::vector<std::pair<std::vector<int>, VecX>>& parts)
{
    VecX out = VecX::Zero(n);
    for (const auto& [dofs, v] : parts)
        for (std::size_t i = 0; i < dofs.size(); ++i) out[dofs[i]] += v[i];
    return out;
}

struct ScalarBasis {
    int n = 0;
    int dof[6];
    double val[6];
    Vec3 grad[6];
};

void scalar_basis(const FeSpace& s, std::size_t e, std::size_t q, ScalarBasis& b)
{
    b.n = s.nodes_per_element();
    const int* nodes = s.element_nodes(e);
    for (int k = 0; k < b.n; ++k) {
        b.dof[k] = nodes[k];
        b.val[k] = s.value(e, q, k);
        b.grad[k] = s.grad(e, q, k);
    }
}

struct VectorBasis {
    int n = 0;
    int dof[18];
    Vec3 val[18];
    Mat3 grad[18];
};

void vector_basis(const FeSpace& s, std::size_t e, std::size_t q, bool reduced, VectorBasis& b)
{
    const GeomSample& g = s.domain()->qp(e, q).g;
    const int* nodes = s.element_nodes(e);
    const int nc = reduced ? 2 : 3;
    b.n = 0;
    for (int k = 0; k < s.nodes_per_element(); ++k) {
        const int i = nodes[k];
        const double N = s.value(e, q, k);
        const Vec3& dN = s.grad(e, q, k);
        for (int a = 0; a < nc; ++a) {
            const Vec3 c = reduced ? s.node_tangent(i, a) : Vec3::Unit(a);
            b.dof[b.n] = reduced ? 2 * i + a : 3 * i + a;
            b.val[b.n] = g.proj * c * N;
            b.grad[b.n] = g.proj * c * dN.transpose() - g.nu.dot(c) * N * g.shape_op;
            ++b.n;
        }
    }
}

void require_scalar(const FeSpace& s)
{
    if (s.is_vector()) fail(ErrorCode::InvalidArgument, "scalar space expected");
}

void require_vector(const FeSpace& s)
{
    if (!s.is_vector()) fail(ErrorCode::InvalidArgument, "vector space expected");
}

Mat3 sym(const Mat3& G)
{
    return 0.5 * (G + G.transpose());
}

AssembledForm make_form(FormTag tag, const FeSpace& s, SpMat M, bool symmetric)
{
    AssembledForm f;
    f.tag = tag;
    f.t = s.domain()->t();
    f.matrix = std::move(M);
    f.symmetric = symmetric;
    return f;
}

SpMat scalar_form(const FeSpace& test, const FeSpace& trial,
                  const std::function<double(std::size_t, std::size_t, const ScalarBasis&, int,
                                             const ScalarBasis&, int)>& kernel)
{
    const SurfaceDomain& dom = *test.domain();
    return assemble_blocks(test.dof_count(), trial.dof_count(), dom.num_elements(),
                           [&](std::size_t e, LocalBlock& blk) {
                               ScalarBasis bt, bs;
                               const int nt = test.nodes_per_element(), ns = trial.nodes_per_element();
                               blk.K = MatX::Zero(nt, ns);
                               for (std::size_t q = 0; q < dom.num_qp(); ++q) {
                                   scalar_basis(test, e, q, bt);
                                   scalar_basis(trial, e, q, bs);
                                   const double w = dom.qp(e, q).w;
                                   for (int i = 0; i < nt; ++i)
                                       for (int j = 0; j < ns; ++j) blk.K(i, j) += w * kernel(e, q, bt, i, bs, j);
                               }
                               blk.rows.assign(bt.dof, bt.dof + nt);
                               blk.cols.assign(bs.dof, bs.dof + ns);
                           });
}

SpMat vector_form(const FeSpace& test, const FeSpace& trial, bool reduced,
                  const std::function<double(std::size_t, std::size_t, const VectorBasis&, int,
                                             const VectorBasis&, int)>& kernel)
{
    const SurfaceDomain& dom = *test.domain();
    const std::size_t nr = reduced ? test.reduced_dof_count() : test.dof_count();
    const std::size_t nc = reduced ? trial.reduced_dof_count() : trial.dof_count();
    return assemble_blocks(nr, nc, dom.num_elements(), [&](std::size_t e, LocalBlock& blk) {
        VectorBasis bt, bs;
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            vector_basis(test, e, q, reduced, bt);
            vector_basis(trial, e, q, reduced, bs);
            if (q == 0) blk.K = MatX::Zero(bt.n, bs.n);
            const double w = dom.qp(e, q).w;
            for (int i = 0; i < bt.n; ++i)
                for (int j = 0; j < bs.n; ++j) blk.K(i, j) += w * kernel(e, q, bt, i, bs, j);
        }
        blk.rows.assign(bt.dof, bt.dof + bt.n);
        blk.cols.assign(bs.dof, bs.dof + bs.n);
    });
}

// Like vector_form, with per-quadrature-point data computed once by prep(e, q).
template <class Prep, class Kernel>
SpMat vector_form_ctx(const FeSpace& test, const FeSpace& trial, bool reduced, Prep&& prep, Kernel&& kernel)
{
    const SurfaceDomain& dom = *test.domain();
    const std::size_t nr = reduced ? test.reduced_dof_count() : test.dof_count();
    const std::size_t nc = reduced ? trial.reduced_dof_count() : trial.dof_count();
    return assemble_blocks(nr, nc, dom.num_elements(), [&](std::size_t e, LocalBlock& blk) {
        VectorBasis bt, bs;
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            vector_basis(test, e, q, reduced, bt);
            vector_basis(trial, e, q, reduced, bs);
            if (q == 0) blk.K = MatX::Zero(bt.n, bs.n);
            const auto ctx = prep(e, q);
            const double w = dom.qp(e, q).w;
            for (int i = 0; i < bt.n; ++i)
                for (int j = 0; j < bs.n; ++j) blk.K(i, j) += w * kernel(ctx, bt, i, bs, j);
        }
        blk.rows.assign(bt.dof, bt.dof + bt.n);
        blk.cols.assign(bs.dof, bs.dof + bs.n);
    });
}

struct FieldAtQp {
    Vec3 u;
    Mat3 G;
};

double frob(const Mat3& a, const Mat3& b)
{
    return (a.array() * b.array()).sum();
}

} // namespace

AssembledForm assemble_m(const FeSpace& space)
{
    if (space.is_vector()) return assemble_vec_m(space);
    return make_form(FormTag::M, space,
                     scalar_form(space, space,
                                 [](std::size_t, std::size_t, const ScalarBasis& a, int i, const ScalarBasis& b,
                                    int j) { return a.val[i] * b.val[j]; }),
                     true);
}

AssembledForm assemble_a(const FeSpace& space)
{
    if (space.is_vector()) fail(ErrorCode::InvalidArgument, "assemble_a needs a scalar space");
    return make_form(FormTag::A, space,
                     scalar_form(space, space,
                                 [](std::size_t, std::size_t, const ScalarBasis& a, int i, const ScalarBasis& b,
                                    int j) { return a.grad[i].dot(b.grad[j]); }),
                     true);
}

AssembledForm assemble_weighted_m(const FeSpace& space, const QpScalar& weight)
{
    require_scalar(space);
    return make_form(FormTag::Custom, space,
                     scalar_form(space, space,
                                 [&](std::size_t e, std::size_t q, const ScalarBasis& a, int i,
                                     const ScalarBasis& b, int j) { return weight(e, q) * a.val[i] * b.val[j]; }),
                     true);
}

AssembledForm assemble_m_mixed(const FeSpace& test, const FeSpace& trial)
{
    require_scalar(test);
    require_scalar(trial);
    require_same_domain(test, trial);
    return make_form(FormTag::M, test,
                     scalar_form(test, trial,
                                 [](std::size_t, std::size_t, const ScalarBasis& a, int i, const ScalarBasis& b,
                                    int j) { return a.val[i] * b.val[j]; }),
                     false);
}

AssembledForm assemble_b(const FeSpace& space)
{
    require_scalar(space);
    const SurfaceDomain& dom = *space.domain();
    return make_form(FormTag::B, space,
                     scalar_form(space, space,
                                 [&](std::size_t e, std::size_t q, const ScalarBasis& a, int i,
                                     const ScalarBasis& b, int j) {
                                     const GeomSample& g = dom.qp(e, q).g;
                                     const Mat3 W = g.v_n * (g.H * g.proj - 2.0 * g.shape_op);
                                     return a.grad[i].dot(W * b.grad[j]);
                                 }),
                     true);
}

VecX assemble_load(const FeSpace& space, const QpScalar& f)
{
    require_scalar(space);
    const SurfaceDomain& dom = *space.domain();
    std::vector<std::pair<std::vector<int>, VecX>> parts(dom.num_elements());
    parallel_for(dom.num_elements(), [&](std::size_t e) {
        ScalarBasis b;
        VecX v = VecX::Zero(space.nodes_per_element());
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            scalar_basis(space, e, q, b);
            const double fw = f(e, q) * dom.qp(e, q).w;
            for (int i = 0; i < b.n; ++i) v[i] += fw * b.val[i];
        }
        parts[e].first.assign(b.dof, b.dof + b.n);
        parts[e].second = std::move(v);
    });
    return scatter_vector(space.dof_count(), parts);
}

AssembledForm assemble_vec_m(const FeSpace& space)
{
    require_vector(space);
    return make_form(FormTag::VecM, space,
                     vector_form(space, space, true,
                                 [](std::size_t, std::size_t, const VectorBasis& a, int i, const VectorBasis& b,
                                    int j) { return a.val[i].dot(b.val[j]); }),
                     true);
}

AssembledForm assemble_vec_weighted_m(const FeSpace& space, const QpScalar& weight)
{
    require_vector(space);
    return make_form(FormTag::VecM, space,
                     vector_form(space, space, true,
                                 [&](std::size_t e, std::size_t q, const VectorBasis& a, int i, const VectorBasis& b,
                                     int j) { return weight(e, q) * a.val[i].dot(b.val[j]); }),
                     true);
}

AssembledForm assemble_advection(const FeSpace& space, const FeFunction& velocity)
{
    require_scalar(space);
    require_same_domain(space, *velocity.space);
    std::vector<Vec3> uq(space.domain()->num_elements() * space.domain()->num_qp());
    const std::size_t nq = space.domain()->num_qp();
    parallel_for(space.domain()->num_elements(), [&](std::size_t e) {
        for (std::size_t q = 0; q < nq; ++q) uq[e * nq + q] = velocity.vector_value(e, q);
    });
    return make_form(FormTag::Custom, space,
                     scalar_form(space, space,
                                 [&](std::size_t e, std::size_t q, const ScalarBasis& a, int i, const ScalarBasis& b,
                                     int j) { return a.grad[i].dot(uq[e * nq + q]) * b.val[j]; }),
                     false);
}

AssembledForm assemble_vec_m_cartesian(const FeSpace& space)
{
    require_vector(space);
    return make_form(FormTag::VecM, space,
                     vector_form(space, space, false,
                                 [](std::size_t, std::size_t, const VectorBasis& a, int i, const VectorBasis& b,
                                    int j) { return a.val[i].dot(b.val[j]); }),
                     true);
}

AssembledForm assemble_vec_a(const FeSpace& space)
{
    return assemble_vec_a_weighted(space, [](std::size_t, std::size_t) { return 1.0; });
}

AssembledForm assemble_vec_a_weighted(const FeSpace& space, const QpScalar& weight)
{
    require_vector(space);
    AssembledForm f = make_form(FormTag::VecA, space,
                                vector_form(space, space, true,
                                            [&](std::size_t e, std::size_t q, const VectorBasis& a, int i,
                                                const VectorBasis& b, int j) {
                                                return 2.0 * weight(e, q) * frob(sym(a.grad[i]), sym(b.grad[j]));
                                            }),
                                true);
    return f;
}

AssembledForm assemble_vec_a_cartesian(const FeSpace& space)
{
    require_vector(space);
    return make_form(FormTag::VecA, space,
                     vector_form(space, space, false,
                                 [](std::size_t, std::size_t, const VectorBasis& a, int i, const VectorBasis& b,
                                    int j) { return 2.0 * frob(sym(a.grad[i]), sym(b.grad[j])); }),
                     true);
}

AssembledForm assemble_vec_h1(const FeSpace& space)
{
    require_vector(space);
    return make_form(FormTag::Custom, space,
                     vector_form(space, space, true,
                                 [](std::size_t, std::size_t, const VectorBasis& a, int i, const VectorBasis& b,
                                    int j) { return a.val[i].dot(b.val[j]) + frob(a.grad[i], b.grad[j]); }),
                     true);
}

AssembledForm assemble_a_hat(const FeFunction& eta_field, const FeSpace& u_space, const FeSpace& v_space)
{
    require_vector(u_space);
    require_vector(v_space);
    require_same_domain(u_space, v_space);
    require_same_domain(*eta_field.space, u_space);
    if (eta_field.space->is_vector()) fail(ErrorCode::InvalidArgument, "viscosity must be a scalar field");
    if (eta_field.coeffs.size() > 0 && !(eta_field.coeffs.minCoeff() > 0.0))
        fail(ErrorCode::ViscosityNonPositive, "viscosity field must be positive at every node");
    AssembledForm f = make_form(FormTag::AHat, v_space,
                                vector_form(v_space, u_space, true,
                                            [&](std::size_t e, std::size_t q, const VectorBasis& a, int i,
                                                const VectorBasis& b, int j) {
                                                return 2.0 * eta_field.value(e, q) *
                                                       frob(sym(a.grad[i]), sym(b.grad[j]));
                                            }),
                                &u_space == &v_space);
    return f;
}

AssembledForm assemble_l(const FeSpace& space)
{
    require_vector(space);
    const SurfaceDomain& dom = *space.domain();
    return make_form(FormTag::L, space,
                     vector_form(space, space, true,
                                 [&](std::size_t e, std::size_t q, const VectorBasis& a, int i,
                                     const VectorBasis& b, int j) {
                                     const GeomSample& g = dom.qp(e, q).g;
                                     return g.v_n * a.val[i].dot(g.shape_op * b.val[j]);
                                 }),
                     true);
}

AssembledForm assemble_d1(const FeFunction& utilde)
{
    const FeSpace& space = *utilde.space;
    require_vector(space);
    SpMat M = vector_form_ctx(
        space, space, true,
        [&](std::size_t e, std::size_t q) { return FieldAtQp{utilde.vector_value(e, q), utilde.vector_gradient(e, q)}; },
        [](const FieldAtQp& ut, const VectorBasis& a, int i, const VectorBasis& b, int j) {
            return (b.grad[j] * ut.u).dot(a.val[i]) + (ut.G * b.val[j]).dot(a.val[i]);
        });
    return make_form(FormTag::D1, space, std::move(M), false);
}

AssembledForm assemble_d2(const FeFunction& eta_field, const FeFunction& utilde)
{
    const FeSpace& space = *utilde.space;
    require_vector(space);
    require_same_domain(*eta_field.space, space);
    AssembledForm f;
    f.tag = FormTag::D2;
    f.t = space.domain()->t();
    const SurfaceDomain& dom = *space.domain();
    std::vector<std::pair<std::vector<int>, VecX>> parts(dom.num_elements());
    parallel_for(dom.num_elements(), [&](std::size_t e) {
        VectorBasis b;
        VecX v;
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            vector_basis(space, e, q, true, b);
            if (q == 0) v = VecX::Zero(b.n);
            const Mat3 E = sym(utilde.vector_gradient(e, q));
            const double s = 2.0 * eta_field.value(e, q) * dom.qp(e, q).w;
            for (int i = 0; i < b.n; ++i) v[i] += s * frob(E, sym(b.grad[i]));
        }
        parts[e].first.assign(b.dof, b.dof + b.n);
        parts[e].second = std::move(v);
    });
    f.vector = scatter_vector(space.reduced_dof_count(), parts);
    return f;
}

VecX assemble_vec_load(const FeSpace& space, const QpVector& fn)
{
    require_vector(space);
    const SurfaceDomain& dom = *space.domain();
    std::vector<std::pair<std::vector<int>, VecX>> parts(dom.num_elements());
    parallel_for(dom.num_elements(), [&](std::size_t e) {
        VectorBasis b;
        VecX v;
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            vector_basis(space, e, q, true, b);
            if (q == 0) v = VecX::Zero(b.n);
            const Vec3 F = fn(e, q) * dom.qp(e, q).w;
            for (int i = 0; i < b.n; ++i) v[i] += F.dot(b.val[i]);
        }
        parts[e].first.assign(b.dof, b.dof + b.n);
        parts[e].second = std::move(v);
    });
    return scatter_vector(space.reduced_dof_count(), parts);
}

double apply_c1(const FeFunction& u, const FeFunction& v, const FeFunction& w)
{
    require_same_domain(*u.space, *v.space);
    require_same_domain(*u.space, *w.space);
    const SurfaceDomain& dom = *u.space->domain();
    double s = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < dom.num_qp(); ++q)
            s += dom.qp(e, q).w * (u.vector_gradient(e, q) * v.vector_value(e, q)).dot(w.vector_value(e, q));
    return s;
}

AssembledForm assemble_c1_matrix(int frozen_slot, const FeFunction& field, const FeSpace& space)
{
    require_vector(space);
    require_same_domain(*field.space, space);
    if (frozen_slot < 1 || frozen_slot > 3) fail(ErrorCode::InvalidArgument, "c1 slot must be 1, 2 or 3");
    auto prep = [&](std::size_t e, std::size_t q) {
        return FieldAtQp{field.vector_value(e, q), frozen_slot == 1 ? field.vector_gradient(e, q) : Mat3::Zero()};
    };
    SpMat M = vector_form_ctx(space, space, true, prep,
                              [frozen_slot](const FieldAtQp& f, const VectorBasis& a, int i, const VectorBasis& b,
                                            int j) {
                                  switch (frozen_slot) {
                                  case 1: return (f.G * b.val[j]).dot(a.val[i]);
                                  case 2: return (b.grad[j] * f.u).dot(a.val[i]);
                                  default: return (b.grad[j] * a.val[i]).dot(f.u);
                                  }
                              });
    return make_form(FormTag::C1, space, std::move(M), false);
}

double apply_c2(const FeFunction& phi, const FeFunction& psi, const FeFunction& chi)
{
    require_same_domain(*phi.space, *psi.space);
    require_same_domain(*phi.space, *chi.space);
    const SurfaceDomain& dom = *phi.space->domain();
    double s = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < dom.num_qp(); ++q)
            s += dom.qp(e, q).w * phi.value(e, q) * psi.gradient(e, q).dot(chi.vector_value(e, q));
    return s;
}

double apply_c3(const FeFunction& phi, const FeFunction& psi, const FeFunction& chi)
{
    require_same_domain(*phi.space, *psi.space);
    require_same_domain(*phi.space, *chi.space);
    const SurfaceDomain& dom = *phi.space->domain();
    double s = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < dom.num_qp(); ++q)
            s += dom.qp(e, q).w * frob(outer(phi.gradient(e, q), psi.gradient(e, q)), chi.vector_gradient(e, q));
    return s;
}

AssembledForm divergence_matrix(const FeSpace& u_space, const FeSpace& q_space, DivergenceForm form)
{
    require_vector(u_space);
    require_scalar(q_space);
    require_same_domain(u_space, q_space);
    const SurfaceDomain& dom = *u_space.domain();
    SpMat M = assemble_blocks(q_space.dof_count(), u_space.reduced_dof_count(), dom.num_elements(),
                              [&](std::size_t e, LocalBlock& blk) {
                                  ScalarBasis bq;
                                  VectorBasis bu;
                                  for (std::size_t q = 0; q < dom.num_qp(); ++q) {
                                      scalar_basis(q_space, e, q, bq);
                                      vector_basis(u_space, e, q, true, bu);
                                      if (q == 0) blk.K = MatX::Zero(bq.n, bu.n);
                                      const double w = dom.qp(e, q).w;
                                      for (int i = 0; i < bq.n; ++i)
                                          for (int j = 0; j < bu.n; ++j)
                                              blk.K(i, j) += w * (form == DivergenceForm::Direct
                                                                      ? bq.val[i] * bu.grad[j].trace()
                                                                      : -bq.grad[i].dot(bu.val[j]));
                                  }
                                  blk.rows.assign(bq.dof, bq.dof + bq.n);
                                  blk.cols.assign(bu.dof, bu.dof + bu.n);
                              });
    return make_form(FormTag::Div, q_space, std::move(M), false);
}

double vec_b_finite_difference(const VecX& u, const VecX& v, FeFamily family, const SurfaceMesh& mesh,
                               const EvolvingSurface& surface, double dt_fd, int substeps)
{
    if (!(dt_fd > 0.0)) fail(ErrorCode::InvalidArgument, "dt_fd must be positive");
    auto energy = [&](double t) {
        const SurfaceMesh m = advect(mesh, surface, t, substeps);
        const SpacePtr s = FeSpace::make(SurfaceDomain::make(m, surface), family);
        if (static_cast<std::size_t>(u.size()) != s->dof_count() || static_cast<std::size_t>(v.size()) != s->dof_count())
            fail(ErrorCode::MeshMismatch, "coefficient length does not match the advected space");
        const SpMat A = assemble_vec_a_cartesian(*s).matrix;
        return u.dot(A * v);
    };
    return (energy(mesh.t + dt_fd) - energy(mesh.t - dt_fd)) / (2.0 * dt_fd);
}

double integrate(const FeFunction& f)
{
    const SurfaceDomain& dom = *f.space->domain();
    double s = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < dom.num_qp(); ++q) s += dom.qp(e, q).w * f.value(e, q);
    return s;
}

double l2_norm(const FeFunction& f)
{
    if (f.space->is_vector()) return vec_l2_norm(f);
    const SurfaceDomain& dom = *f.space->domain();
    double s = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            const double v = f.value(e, q);
            s += dom.qp(e, q).w * v * v;
        }
    return std::sqrt(s);
}

double h1_seminorm(const FeFunction& f)
{
    const SurfaceDomain& dom = *f.space->domain();
    double s = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            if (f.space->is_vector())
                s += dom.qp(e, q).w * f.vector_gradient(e, q).squaredNorm();
            else
                s += dom.qp(e, q).w * f.gradient(e, q).squaredNorm();
        }
    return std::sqrt(s);
}

double vec_l2_norm(const FeFunction& u)
{
    const SurfaceDomain& dom = *u.space->domain();
    double s = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < dom.num_qp(); ++q) s += dom.qp(e, q).w * u.vector_value(e, q).squaredNorm();
    return std::sqrt(s);
}

double strain_norm(const FeFunction& u)
{
    const SurfaceDomain& dom = *u.space->domain();
    double s = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < dom.num_qp(); ++q)
            s += dom.qp(e, q).w * sym(u.vector_gradient(e, q)).squaredNorm();
    return std::sqrt(s);
}

double mean_value(const FeFunction& f)
{
    return integrate(f) / f.space->domain()->area();
}

} // namespace surfnsch
