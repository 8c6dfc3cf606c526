// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/solver.hpp"

#include "surfnsch/error.hpp"
#include "surfnsch/forms.hpp"
#include "surfnsch/linalg.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace surfnsch {

struct OperatorCache {
    DomainPtr dom;
    SpacePtr S, V;       // phase / pressure space (P1) and velocity space
    SpMat M, A;          // scalar mass and stiffness
    SpMat Mv, M3;        // vector mass, reduced and Cartesian
    SpMat B;             // -int grad q . v
    SpMat L, W;          // l-form and int H V_N u . v (zero on static surfaces)
    SpMat Sp;            // pressure stabilization (P1P1 only)
    VecX one;            // m(1, q)
    VecX div_data;
};

const char* to_string(Splitting s)
{
    return s == Splitting::ConvexConcave ? "convex_concave" : "newton_implicit";
}

const char* to_string(PressurePair p)
{
    return p == PressurePair::TaylorHood ? "taylor_hood" : "p1p1_stabilized";
}

Splitting parse_splitting(const std::string& s)
{
    if (s == "convex_concave") return Splitting::ConvexConcave;
    if (s == "newton_implicit") return Splitting::NewtonImplicit;
    fail(ErrorCode::ValidationError, "splitting: unknown value '" + s + "'");
}

PressurePair parse_pressure_pair(const std::string& s)
{
    if (s == "taylor_hood") return PressurePair::TaylorHood;
    if (s == "p1p1_stabilized") return PressurePair::P1P1Stabilized;
    fail(ErrorCode::ValidationError, "pressure_pair: unknown value '" + s + "'");
}

ForceFn ForceSpec::function() const
{
    if (kind == Kind::None || amplitude == 0.0) return {};
    const double a = amplitude;
    return [a](const Vec3& x, double) { return Vec3(a * Vec3::UnitZ().cross(x)); };
}

void SchemeConfig::validate() const
{
    auto bad = [](const std::string& m) { fail(ErrorCode::ValidationError, m); };
    if (!(dt > 0.0)) bad("dt must be positive");
    if (!(t_end >= 0.0)) bad("t_end must be non-negative");
    if (picard_iters < 0) bad("picard_iters must be >= 0");
    if (pressure_pair == PressurePair::P1P1Stabilized && !(stab_param > 0.0))
        bad("stab_param must be positive for p1p1_stabilized");
    if (!(lin_tol > 0.0)) bad("lin_tol must be positive");
    if (!(nonlin_tol > 0.0)) bad("nonlin_tol must be positive");
    if (substeps_mesh < 1) bad("substeps_mesh must be >= 1");
    if (newton_max_iters < 1) bad("newton_max_iters must be >= 1");
    if (quad_degree < 1 || quad_degree > 20) bad("quad_degree must lie in [1, 20]");
    if (!enforce_phase_bound && potential.variant == PotentialKind::Logarithmic)
        bad("enforce_phase_bound cannot be disabled for the logarithmic potential");
    potential.validate();
    viscosity.validate();
}

SpacePtr scalar_space(const DomainPtr& dom)
{
    return FeSpace::make(dom, FeFamily::P1Scalar);
}

SpacePtr velocity_space(const DomainPtr& dom, const SchemeConfig& config)
{
    return FeSpace::make(dom, config.pressure_pair == PressurePair::TaylorHood ? FeFamily::P2VectorTangential
                                                                                : FeFamily::P1VectorTangential);
}

VecX divergence_data(const FeSpace& p_space)
{
    const SurfaceDomain& dom = *p_space.domain();
    const VecX one = assemble_load(p_space, [](std::size_t, std::size_t) { return 1.0; });
    const VecX hv = assemble_load(p_space, [&](std::size_t e, std::size_t q) {
        const GeomSample& g = dom.qp(e, q).g;
        return g.H * g.v_n;
    });
    return -(hv - (hv.sum() / one.sum()) * one);
}

double divergence_residual(const FeFunction& u, const SpacePtr& p_space)
{
    const SurfaceDomain& dom = *p_space->domain();
    const SpMat B = divergence_matrix(*u.space, *p_space, DivergenceForm::IntegratedByParts).matrix;
    const VecX hv = assemble_load(*p_space, [&](std::size_t e, std::size_t q) {
        const GeomSample& g = dom.qp(e, q).g;
        return g.H * g.v_n;
    });
    const SpMat Mp = assemble_m(*p_space).matrix;
    return dual_norm(Mp, B * u.space->to_reduced(u.coeffs) + hv);
}

namespace {

std::shared_ptr<const OperatorCache> build_cache(const DomainPtr& dom, const SchemeConfig& cfg)
{
    auto c = std::make_shared<OperatorCache>();
    c->dom = dom;
    c->S = scalar_space(dom);
    c->V = velocity_space(dom, cfg);
    c->M = assemble_m(*c->S).matrix;
    c->A = assemble_a(*c->S).matrix;
    c->Mv = assemble_vec_m(*c->V).matrix;
    c->M3 = assemble_vec_m_cartesian(*c->V).matrix;
    c->B = divergence_matrix(*c->V, *c->S, DivergenceForm::IntegratedByParts).matrix;
    const std::size_t nu = c->V->reduced_dof_count(), np = c->S->dof_count();
    if (dom->surface().is_static()) {
        c->L = SpMat(nu, nu);
        c->W = SpMat(nu, nu);
    } else {
        c->L = assemble_l(*c->V).matrix;
        c->W = assemble_vec_weighted_m(*c->V, [&](std::size_t e, std::size_t q) {
                   const GeomSample& g = dom->qp(e, q).g;
                   return g.H * g.v_n;
               }).matrix;
    }
    if (cfg.pressure_pair == PressurePair::P1P1Stabilized) {
        const double h = dom->h();
        c->Sp = cfg.stab_param * h * h * c->A;
    } else {
        c->Sp = SpMat(np, np);
    }
    c->one = c->M * VecX::Ones(np);
    c->div_data = divergence_data(*c->S);
    return c;
}

double max_abs(const VecX& v)
{
    return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

void check_phase_bound(const PotentialSpec& pot, const VecX& phi, double t)
{
    if (!pot.is_log()) return;
    const double m = max_abs(phi);
    if (!(m < 1.0)) {
        std::ostringstream os;
        os << "max|phi| = " << m << " >= 1 at t = " << t << " (reduce dt)";
        fail(ErrorCode::PhaseBoundViolation, os.str());
    }
}

// mu = eps A phi + (1/eps) F'(phi) in the mass-matrix sense.
VecX chemical_potential(const OperatorCache& c, const PotentialSpec& pot, const VecX& phi)
{
    const FeFunction f(c.S, phi);
    const VecX rhs = pot.epsilon * (c.A * phi) +
                     assemble_load(*c.S, [&](std::size_t e, std::size_t q) { return dF(pot, f.value(e, q)); }) /
                         pot.epsilon;
    Eigen::SimplicialLDLT<SpMat> ldlt(c.M);
    return ldlt.solve(rhs);
}

struct ChResult {
    VecX phi, mu;
    int iters = 0;
    double residual = 0.0;
};

ChResult solve_ch(const OperatorCache& c, const SchemeConfig& cfg, const VecX& mass_old, const VecX& phi_old,
                  const VecX& phi_guess, const VecX& mu_guess, const FeFunction& velocity)
{
    const PotentialSpec& pot = cfg.potential;
    const double dt = cfg.dt, eps = pot.epsilon;
    const std::size_t n = c.S->dof_count();
    const SpMat Ct = assemble_advection(*c.S, velocity).matrix;
    const SpMat J11 = c.M - dt * Ct;
    const SpMat J12 = dt * c.A;
    const bool split = cfg.splitting == Splitting::ConvexConcave;

    const FeFunction fold(c.S, phi_old);
    const VecX explicit_part =
        split ? VecX(assemble_load(*c.S, [&](std::size_t e, std::size_t q) { return dF2(pot, fold.value(e, q)); }))
              : VecX(VecX::Zero(n));

    auto residual = [&](const VecX& phi, const VecX& mu) {
        const FeFunction f(c.S, phi);
        const VecX N = assemble_load(*c.S, [&](std::size_t e, std::size_t q) {
            const double v = f.value(e, q);
            return split ? dF1(pot, v) : dF(pot, v);
        });
        VecX R(2 * n);
        R.head(n) = J11 * phi - mass_old + J12 * mu;
        R.tail(n) = c.M * mu - eps * (c.A * phi) - (N + explicit_part) / eps;
        return R;
    };
    auto admissible = [&](const VecX& phi) { return pot.variant != PotentialKind::Logarithmic || max_abs(phi) < 1.0; };

    ChResult r;
    r.phi = phi_guess;
    r.mu = mu_guess;
    VecX R = residual(r.phi, r.mu);
    for (int it = 0; it < cfg.newton_max_iters; ++it) {
        const FeFunction f(c.S, r.phi);
        const SpMat D = assemble_weighted_m(*c.S, [&](std::size_t e, std::size_t q) {
                            const double v = f.value(e, q);
                            return split ? d2F1(pot, v) : d2F(pot, v);
                        }).matrix;
        const SpMat J21 = -eps * c.A - D / eps;
        const SpMat J = block_matrix({{J11, J12}, {J21, c.M}});
        LinearSolver solver(J, cfg.lin_tol);
        const VecX d = solver.solve(-R);
        r.residual = std::max(r.residual, solver.last_residual());
        if (!std::isfinite(d.squaredNorm())) break;
        // Backtracking on the residual norm; the log potential also needs |phi| < 1.
        const double r0 = R.norm();
        double alpha = 1.0;
        VecX R_trial;
        for (int halvings = 0;; ++halvings) {
            if (halvings > 60) fail(ErrorCode::NewtonDivergence, "line search found no decrease");
            const VecX phi_trial = r.phi + alpha * d.head(n);
            if (admissible(phi_trial)) {
                R_trial = residual(phi_trial, r.mu + alpha * d.tail(n));
                // Near the solution the residual sits at roundoff; accept full steps there.
                if (R_trial.norm() <= (1.0 - 1e-4 * alpha) * r0 || (alpha == 1.0 && R_trial.norm() <= 1e-12 * (1.0 + r0)))
                    break;
            }
            alpha *= 0.5;
        }
        r.phi += alpha * d.head(n);
        r.mu += alpha * d.tail(n);
        R = R_trial;
        r.iters = it + 1;
        const double scale = std::max(1.0, std::max(max_abs(r.phi), max_abs(r.mu)));
        if (alpha == 1.0 && max_abs(d) <= 1e-13 * scale) return r;
        // A linear system converges in one step; one extra step confirms.
        if (alpha == 1.0 && max_abs(d) <= 1e-11 * scale && it >= 1) return r;
    }
    std::ostringstream os;
    os << "Newton did not converge in " << cfg.newton_max_iters << " iterations";
    fail(ErrorCode::NewtonDivergence, os.str());
}

struct NsResult {
    VecX u_reduced, p;
    double residual = 0.0;
};

NsResult solve_ns(const OperatorCache& c, const SchemeConfig& cfg, double t_new, const VecX& mom_old,
                  const FeFunction& w, const VecX& phi, const VecX& mu)
{
    const double dt = cfg.dt;
    const std::size_t nu = c.V->reduced_dof_count(), np = c.S->dof_count();
    const FeFunction fphi(c.S, phi), fmu(c.S, mu);
    FeFunction eta_field(c.S);
    for (std::size_t i = 0; i < np; ++i) eta_field.coeffs[i] = eta(cfg.viscosity, phi[i]);
    const SpMat Ahat = assemble_a_hat(eta_field, *c.V, *c.V).matrix;
    const SpMat C2 = assemble_c1_matrix(2, w, *c.V).matrix;
    const SpMat K = SpMat(c.Mv / dt) + Ahat + SpMat(0.5 * (C2 - SpMat(C2.transpose()))) + c.L - SpMat(0.5 * c.W);

    const ForceFn force = cfg.force.function();
    const SurfaceDomain& dom = *c.dom;
    VecX f = mom_old / dt + assemble_vec_load(*c.V, [&](std::size_t e, std::size_t q) {
                 Vec3 v = -fphi.value(e, q) * fmu.gradient(e, q);
                 if (force) v += force(dom.qp(e, q).p, t_new);
                 return v;
             });

    const SpMat Kfull = block_matrix({{K, SpMat(-SpMat(c.B.transpose()))}, {c.B, c.Sp}});
    VecX z = VecX::Zero(nu + np), border = VecX::Zero(nu + np);
    z.tail(np).setOnes();
    border.tail(np) = c.one;
    VecX rhs = VecX::Zero(nu + np + 1);
    rhs.head(nu) = f;
    rhs.segment(nu, np) = c.div_data;
    BorderedSolver solver(Kfull, z, border, cfg.lin_tol);
    const VecX x = solver.solve(rhs);
    NsResult r;
    r.u_reduced = x.head(nu);
    r.p = x.segment(nu, np);
    r.residual = solver.last_residual();
    return r;
}

} // namespace

FeFunction initial_phase(const SpacePtr& space, const InitialPhase& spec)
{
    FeFunction phi(space);
    std::mt19937_64 rng(spec.seed);
    std::mt19937_64 noise(spec.perturbation_seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (std::size_t i = 0; i < space->num_nodes(); ++i) {
        const Vec3 x = space->node_point(i).normalized();
        double v = spec.mean;
        switch (spec.kind) {
        case InitialPhase::Kind::Constant: break;
        case InitialPhase::Kind::Harmonic:
            v += spec.amplitude * (spec.degree == 2 ? 0.5 * (3.0 * x.z() * x.z() - 1.0) : x.z());
            break;
        case InitialPhase::Kind::Random: v += spec.amplitude * U(rng); break;
        }
        if (spec.perturbation != 0.0) v += spec.perturbation * U(noise);
        phi.coeffs[i] = v;
    }
    if (spec.kind != InitialPhase::Kind::Constant || spec.perturbation != 0.0) phi.coeffs.array() += spec.mean - mean_value(phi);
    return phi;
}

SolverState initialize(const SurfaceMesh& mesh, const EvolvingSurface& surface, const InitialPhase& phi0,
                       const InitialVelocity& u0, const SchemeConfig& config)
{
    config.validate();
    const DomainPtr dom = SurfaceDomain::make(mesh, surface, config.quad_degree);
    auto cache = build_cache(dom, config);
    SolverState s;
    s.t = mesh.t;
    s.mesh = mesh;
    s.cache = cache;
    s.phi = initial_phase(cache->S, phi0);
    if (config.potential.is_log()) {
        const double mean = mean_value(s.phi);
        const double mx = max_abs(s.phi.coeffs);
        if (!(std::abs(mean) < 1.0) || !(mx <= 1.0 - 1e-6)) {
            std::ostringstream os;
            os << "initial phase field is not admissible for the logarithmic potential (mean " << mean
               << ", max|phi| " << mx << "; need |mean| < 1 and max|phi| <= 1 - 1e-6)";
            fail(ErrorCode::InadmissibleInitialData, os.str());
        }
    }
    s.mu = FeFunction(cache->S, chemical_potential(*cache, config.potential, s.phi.coeffs));

    FeFunction u(cache->V);
    if (u0.kind == InitialVelocity::Kind::Rotation && u0.omega != 0.0) {
        const double w = u0.omega;
        u = interpolate_vector(cache->V, [w](const Vec3& x) { return Vec3(w * Vec3::UnitZ().cross(x)); });
    }
    s.u = stokes_projection(u, cache->S, cache->div_data);
    s.p = FeFunction(cache->S);
    s.stats.div_residual = divergence_residual(s.u, cache->S);
    return s;
}

SolverState step(const SolverState& state, const EvolvingSurface& surface, const SchemeConfig& config)
{
    const double t1 = state.t + config.dt;
    const OperatorCache& old = *state.cache;

    SolverState next;
    next.t = t1;
    next.step_index = state.step_index + 1;
    if (surface.moves_mesh()) {
        next.mesh = advect(state.mesh, surface, t1, config.substeps_mesh);
    } else {
        next.mesh = state.mesh;
        next.mesh.t = t1;
    }
    if (surface.is_static())
        next.cache = state.cache;
    else
        next.cache = build_cache(SurfaceDomain::make(next.mesh, surface, config.quad_degree), config);
    const OperatorCache& c = *next.cache;

    // Coefficients carry over through the vertex (and edge) identification of the moving mesh.
    const VecX mass_old = old.M * state.phi.coeffs;
    const VecX mom_old = c.V->tangent_basis().transpose() * (old.M3 * state.u.coeffs);
    const FeFunction w(c.V, c.V->project_tangential(state.u.coeffs));

    VecX phi = state.phi.coeffs, mu = state.mu.coeffs;
    FeFunction u = w;
    VecX p;
    StepStats st;
    for (int sweep = 0; sweep <= config.picard_iters; ++sweep) {
        const ChResult ch = solve_ch(c, config, mass_old, state.phi.coeffs, phi, mu, u);
        if (config.enforce_phase_bound) check_phase_bound(config.potential, ch.phi, t1);
        const NsResult ns = solve_ns(c, config, t1, mom_old, w, ch.phi, ch.mu);
        const VecX u_new = c.V->from_reduced(ns.u_reduced);
        const double incr = std::max(max_abs(ch.phi - phi), max_abs(u_new - u.coeffs));
        phi = ch.phi;
        mu = ch.mu;
        u.coeffs = u_new;
        p = ns.p;
        st.picard_sweeps = sweep + 1;
        st.newton_iters += ch.iters;
        st.coupling_increment = incr;
        st.linear_residual = std::max({st.linear_residual, ch.residual, ns.residual});
        if (sweep > 0 && incr <= config.nonlin_tol) break;
    }

    next.phi = FeFunction(c.S, phi);
    next.mu = FeFunction(c.S, mu);
    next.u = u;
    // The solved multiplier is p - phi mu (adjoint capillary form).
    FeFunction pf(c.S, p + VecX(phi.array() * mu.array()));
    pf.coeffs.array() -= c.one.dot(pf.coeffs) / c.one.sum();
    next.p = pf;
    st.div_residual = divergence_residual(u, c.S);
    next.stats = st;
    return next;
}

RunSummary run(const SchemeConfig& config, const EvolvingSurface& surface, const SurfaceMesh& mesh,
               const InitialPhase& phi0, const InitialVelocity& u0, const StepObserver& observer)
{
    RunSummary out;
    SolverState s = initialize(mesh, surface, phi0, u0, config);
    if (observer) observer(s);
    const double t0 = s.t;
    const long n = config.t_end > 0.0 ? static_cast<long>(std::ceil(config.t_end / config.dt - 1e-9)) : 0;
    for (long k = 0; k < n; ++k) {
        SchemeConfig c = config;
        c.dt = std::min(config.dt, t0 + config.t_end - s.t);
        s = step(s, surface, c);
        if (observer) observer(s);
    }
    out.steps = static_cast<int>(n);
    out.t_final = s.t;
    out.final_state = std::move(s);
    return out;
}

DeltaStudy delta_continuation_study(const SchemeConfig& config, const EvolvingSurface& surface,
                                    const SurfaceMesh& mesh, const InitialPhase& phi0, const InitialVelocity& u0,
                                    const std::vector<double>& deltas, double reference_delta)
{
    // The regularized problems are posed on the whole real line, so the runs are not
    // stopped at |phi| = 1; the excursions are reported instead.
    auto final_phi = [&](double delta, double& max_phi) {
        SchemeConfig c = config;
        c.potential.variant = PotentialKind::RegularizedLog;
        c.potential.delta = delta;
        c.enforce_phase_bound = false;
        max_phi = 0.0;
        return run(c, surface, mesh, phi0, u0, [&max_phi](const SolverState& s) {
                   max_phi = std::max(max_phi, max_abs(s.phi.coeffs));
               }).final_state.phi;
    };
    DeltaStudy out;
    out.reference_delta = reference_delta;
    const FeFunction ref = final_phi(reference_delta, out.reference_max_abs_phi);
    std::vector<double> ds = deltas;
    std::sort(ds.begin(), ds.end(), std::greater<double>());
    for (double d : ds) {
        double mx = 0.0;
        const FeFunction f = final_phi(d, mx);
        out.deltas.push_back(d);
        out.errors.push_back(l2_norm(FeFunction(ref.space, f.coeffs - ref.coeffs)));
        out.max_abs_phi.push_back(mx);
    }
    out.monotone = true;
    for (std::size_t i = 1; i < out.errors.size(); ++i)
        if (!(out.errors[i] < out.errors[i - 1])) out.monotone = false;
    return out;
}

} // namespace surfnsch
