// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/diagnostics.hpp"

#include "surfnsch/error.hpp"
#include "surfnsch/forms.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace surfnsch {

const std::vector<std::string>& diagnostics_columns()
{
    static const std::vector<std::string> cols = {"t",     "area",         "mass",         "E_ch",
                                                  "E_kin", "grad_mu_norm", "strain_norm",  "div_residual",
                                                  "max_abs_phi", "p_mean"};
    return cols;
}

std::vector<double> diagnostics_values(const DiagnosticsRow& r)
{
    return {r.t, r.area, r.mass, r.E_ch, r.E_kin, r.grad_mu_norm, r.strain_norm, r.div_residual, r.max_abs_phi,
            r.p_mean};
}

DiagnosticsRow energy_row(const SolverState& s, const PotentialSpec& pot)
{
    const SurfaceDomain& dom = *s.domain();
    DiagnosticsRow r;
    r.t = s.t;
    r.area = dom.area();
    double mass = 0.0, ech = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            const double w = dom.qp(e, q).w;
            const double v = s.phi.value(e, q);
            mass += w * v;
            ech += w * (0.5 * pot.epsilon * s.phi.gradient(e, q).squaredNorm() + F(pot, v) / pot.epsilon);
        }
    r.mass = mass;
    r.E_ch = ech;
    const double un = vec_l2_norm(s.u);
    r.E_kin = 0.5 * un * un;
    r.grad_mu_norm = h1_seminorm(s.mu);
    r.strain_norm = strain_norm(s.u);
    r.div_residual = s.stats.div_residual;
    r.max_abs_phi = s.phi.coeffs.size() ? s.phi.coeffs.cwiseAbs().maxCoeff() : 0.0;
    r.p_mean = s.p.coeffs.size() ? mean_value(s.p) : 0.0;
    return r;
}

EnergyBudget energy_budget(const std::vector<DiagnosticsRow>& rows, double eta_star, double slack)
{
    EnergyBudget b;
    if (rows.empty()) return b;
    b.initial_energy = rows.front().energy();
    b.sup_energy = b.initial_energy;
    const double tol = slack * std::abs(b.initial_energy);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double dt = rows[i].t - rows[i - 1].t;
        b.dissipation += 0.5 * dt *
                         (eta_star * rows[i].strain_norm * rows[i].strain_norm +
                          rows[i].grad_mu_norm * rows[i].grad_mu_norm);
        b.sup_energy = std::max(b.sup_energy, rows[i].energy());
        const double inc = rows[i].energy() - rows[i - 1].energy();
        b.worst_increase = std::max(b.worst_increase, inc);
        if (inc > tol && b.monotone) {
            b.monotone = false;
            b.first_violation = static_cast<long>(i);
        }
    }
    b.final_energy = rows.back().energy();
    b.bounded = std::isfinite(b.sup_energy) && std::isfinite(b.dissipation) &&
                b.sup_energy + b.dissipation <= 1e6 * std::max(1.0, std::abs(b.initial_energy));
    return b;
}

namespace {

FeFunction l2_project(const SpacePtr& space, const QpScalar& f)
{
    const SpMat M = assemble_m(*space).matrix;
    Eigen::SimplicialLDLT<SpMat> ldlt(M);
    return FeFunction(space, ldlt.solve(assemble_load(*space, f)));
}

double time_scale(const EvolvingSurface& surface)
{
    return surface.period() > 0.0 ? surface.period() : 1.0;
}

} // namespace

FeFunction normal_force_recovery(const SolverState& s, const EvolvingSurface& surface, const PotentialSpec& pot,
                                 const ViscositySpec& visc)
{
    const SurfaceDomain& dom = *s.domain();
    const double delta = 1e-4 * time_scale(surface);
    const bool moving = !surface.is_static();
    const SurfaceFrame fp = surface.at(s.t + delta), fm = surface.at(s.t - delta);
    const SurfaceFrame f0 = surface.at(s.t);
    const std::size_t nq = dom.num_qp();
    std::vector<double> vals(dom.num_elements() * nq);
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < nq; ++q) {
            const QuadPoint& Q = dom.qp(e, q);
            const GeomSample& g = Q.g;
            const Vec3 u = s.u.vector_value(e, q);
            const Mat3 Gu = s.u.vector_gradient(e, q);
            const Vec3 gphi = s.phi.gradient(e, q);
            const double phi = s.phi.value(e, q);
            double dvn = 0.0, u_grad_vn = 0.0;
            if (moving) {
                const Vec3 vel = g.v_n * g.nu + u;
                const double vp = fp.normal_velocity(fp.closest_point(Q.p + delta * vel));
                const double vm = fm.normal_velocity(fm.closest_point(Q.p - delta * vel));
                dvn = (vp - vm) / (2.0 * delta);
                // Tangential gradient of V_N by central differences on Gamma(t).
                const double h = 1e-6;
                const Mat3 P = g.proj;
                Vec3 grad = Vec3::Zero();
                for (int a = 0; a < 3; ++a) {
                    const Vec3 d = P.col(a);
                    const double v1 = f0.normal_velocity(f0.closest_point(Q.p + h * d));
                    const double v2 = f0.normal_velocity(f0.closest_point(Q.p - h * d));
                    grad[a] = (v1 - v2) / (2.0 * h);
                }
                u_grad_vn = u.dot(P * grad);
            }
            const Mat3& Hs = g.shape_op;
            const double visc_term =
                2.0 * eta(visc, phi) * ((Hs * Gu).trace() - g.v_n * (Hs * Hs).trace());
            vals[e * nq + q] = dvn + visc_term - u.dot(Hs * u) + u_grad_vn - s.p.value(e, q) * g.H +
                               pot.epsilon * gphi.dot(Hs * gphi);
        }
    return l2_project(s.phi.space, [&](std::size_t e, std::size_t q) { return vals[e * nq + q]; });
}

FeFunction p1_lagrange(const SolverState& s, const FeFunction& Fnu)
{
    const FeSpace& S = *s.p.space;
    const SurfaceFrame frame = s.domain()->surface().at(s.t);
    FeFunction out(s.p.space);
    for (std::size_t i = 0; i < S.num_nodes(); ++i) {
        const double H = frame.sample(S.node_point(i)).H;
        out.coeffs[i] = Fnu.coeffs[i] + s.p.coeffs[i] * H;
    }
    return out;
}

ModifiedPressure modified_pressure(const SolverState& s, const PotentialSpec& pot)
{
    const FeSpace& S = *s.phi.space;
    const SurfaceDomain& dom = *S.domain();
    std::vector<Vec3> g(S.num_nodes(), Vec3::Zero());
    std::vector<double> wsum(S.num_nodes(), 0.0);
    for (std::size_t e = 0; e < dom.num_elements(); ++e) {
        Vec3 ge = Vec3::Zero();
        double ae = 0.0;
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            ge += dom.qp(e, q).w * s.phi.gradient(e, q);
            ae += dom.qp(e, q).w;
        }
        const int* nodes = S.element_nodes(e);
        for (int k = 0; k < S.nodes_per_element(); ++k) {
            g[nodes[k]] += ge;
            wsum[nodes[k]] += ae;
        }
    }
    ModifiedPressure out;
    out.correction = FeFunction(s.phi.space);
    for (std::size_t i = 0; i < S.num_nodes(); ++i) {
        const Vec3 nu = S.node_normal(i);
        const Vec3 gi = (g[i] - nu.dot(g[i]) * nu) / wsum[i];
        out.correction.coeffs[i] =
            0.5 * pot.epsilon * gi.squaredNorm() + F(pot, s.phi.coeffs[i]) / pot.epsilon;
    }
    out.p_tilde = FeFunction(s.p.space, s.p.coeffs + out.correction.coeffs);
    return out;
}

StressField cauchy_stress(const SolverState& s, const PotentialSpec& pot, const ViscositySpec& visc)
{
    const SurfaceDomain& dom = *s.domain();
    StressField out;
    out.T.resize(dom.num_elements());
    for (std::size_t e = 0; e < dom.num_elements(); ++e) {
        Mat3 T = Mat3::Zero();
        double a = 0.0;
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            const GeomSample& g = dom.qp(e, q).g;
            const Mat3 G = s.u.vector_gradient(e, q);
            const Mat3 E = 0.5 * (G + G.transpose());
            const Vec3 gp = s.phi.gradient(e, q);
            const Mat3 Tq = -s.p.value(e, q) * g.proj + 2.0 * eta(visc, s.phi.value(e, q)) * E -
                            pot.epsilon * outer(gp, gp);
            T += dom.qp(e, q).w * Tq;
            a += dom.qp(e, q).w;
        }
        T /= a;
        out.T[e] = T;
        out.max_asymmetry = std::max(out.max_asymmetry, (T - T.transpose()).cwiseAbs().maxCoeff());
    }
    return out;
}

double stability_metric(const SolverState& a, const SolverState& b)
{
    if (a.phi.space->num_nodes() != b.phi.space->num_nodes() || std::abs(a.t - b.t) > 1e-12)
        fail(ErrorCode::MeshMismatch, "states are not on the same mesh and time");
    const double ma = mean_value(a.phi), mb = mean_value(b.phi);
    if (std::abs(ma - mb) > 1e-8) {
        std::ostringstream os;
        os << "phase means differ by " << std::abs(ma - mb) << " (> 1e-8)";
        fail(ErrorCode::MeanMismatch, os.str());
    }
    const FeFunction dphi = remove_mean(FeFunction(a.phi.space, a.phi.coeffs - b.phi.coeffs));
    const FeFunction du(a.u.space, a.u.coeffs - b.u.coeffs);
    const double h = h_minus1_norm(dphi);
    const double sn = s_norm(du);
    return sn * sn + h * h;
}

double bihari_bound(double k, double K, double gamma, double q)
{
    if (!(q > 1.0)) fail(ErrorCode::OutOfDomain, "Bihari bound needs q > 1");
    if (!(k >= 0.0) || !(gamma >= 0.0) || !std::isfinite(K))
        fail(ErrorCode::OutOfDomain, "Bihari bound needs k >= 0, gamma >= 0 and finite K");
    if (k == 0.0) return 0.0;
    const double s = 0.5 * (q - 1.0);
    // Omega^{-1}(Omega(k) + K) = [(gamma + k^{-s}) e^{-s K} - gamma]^{-1/s}
    const double base = (gamma + std::pow(k, -s)) * std::exp(-s * K) - gamma;
    if (!(base > 0.0)) {
        std::ostringstream os;
        os << "Omega(k) + K lies outside the range of Omega (k = " << k << ", K = " << K << ", gamma = " << gamma
           << ")";
        fail(ErrorCode::OutOfDomain, os.str());
    }
    return std::pow(base, -1.0 / s);
}

const char* to_string(InequalityKind k)
{
    switch (k) {
    case InequalityKind::Poincare: return "poincare";
    case InequalityKind::Korn: return "korn";
    case InequalityKind::Ladyzhenskaya: return "ladyzhenskaya";
    case InequalityKind::BrezisGallouet: return "brezis_gallouet";
    }
    return "?";
}

namespace {

double l4_norm(const FeFunction& f)
{
    const SurfaceDomain& dom = *f.space->domain();
    double s = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            const double v = f.space->is_vector() ? f.vector_value(e, q).squaredNorm()
                                                  : f.value(e, q) * f.value(e, q);
            s += dom.qp(e, q).w * v * v;
        }
    return std::pow(s, 0.25);
}

double l2(const FeFunction& f)
{
    return f.space->is_vector() ? vec_l2_norm(f) : l2_norm(f);
}

double grad_norm(const FeFunction& f)
{
    if (!f.space->is_vector()) return h1_seminorm(f);
    const SurfaceDomain& dom = *f.space->domain();
    double s = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < dom.num_qp(); ++q) s += dom.qp(e, q).w * f.vector_gradient(e, q).squaredNorm();
    return std::sqrt(s);
}

double ratio(double num, double den)
{
    if (!(den > 1e-300)) fail(ErrorCode::ZeroDenominator, "inequality probe denominator vanishes");
    return num / den;
}

} // namespace

double inequality_probe(InequalityKind kind, const FeFunction& f)
{
    switch (kind) {
    case InequalityKind::Poincare: {
        if (f.space->is_vector()) fail(ErrorCode::InvalidArgument, "Poincare probe needs a scalar field");
        const double g = h1_seminorm(f);
        if (g <= 1e-14 * std::max(1.0, l2_norm(f))) fail(ErrorCode::ZeroDenominator, "field is constant");
        return ratio(l2_norm(remove_mean(f)), g);
    }
    case InequalityKind::Korn: {
        if (!f.space->is_vector()) fail(ErrorCode::InvalidArgument, "Korn probe needs a vector field");
        const double n = vec_l2_norm(f), gn = grad_norm(f);
        return ratio(std::sqrt(n * n + gn * gn), n + strain_norm(f));
    }
    case InequalityKind::Ladyzhenskaya: {
        const double n = l2(f), gn = grad_norm(f);
        return ratio(l4_norm(f), std::sqrt(n) * std::pow(n * n + gn * gn, 0.25));
    }
    case InequalityKind::BrezisGallouet: {
        if (f.space->is_vector()) fail(ErrorCode::InvalidArgument, "Brezis-Gallouet probe needs a scalar field");
        const double n = l2_norm(f), gn = h1_seminorm(f);
        const double h1 = std::sqrt(n * n + gn * gn);
        const SpMat A = assemble_a(*f.space).matrix;
        const SpMat M = assemble_m(*f.space).matrix;
        const VecX lumped = M * VecX::Ones(M.rows());
        const VecX lap = (A * f.coeffs).cwiseQuotient(lumped);
        const double lap_norm = std::sqrt(lap.dot(lumped.cwiseProduct(lap)));
        const double h2 = std::sqrt(h1 * h1 + lap_norm * lap_norm);
        const double linf = f.coeffs.cwiseAbs().maxCoeff();
        if (!(h1 > 1e-300)) fail(ErrorCode::ZeroDenominator, "field vanishes");
        return ratio(linf, h1 * std::sqrt(1.0 + std::log(1.0 + h2 / h1)));
    }
    }
    return 0.0;
}

} // namespace surfnsch
