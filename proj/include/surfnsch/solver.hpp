// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include "surfnsch/elliptic.hpp"
#include "surfnsch/fe_space.hpp"
#include "surfnsch/mesh.hpp"
#include "surfnsch/potentials.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace surfnsch {

enum class Splitting { ConvexConcave, NewtonImplicit };
enum class PressurePair { TaylorHood, P1P1Stabilized };

const char* to_string(Splitting s);
const char* to_string(PressurePair p);
Splitting parse_splitting(const std::string& s);
PressurePair parse_pressure_pair(const std::string& s);

/// Tangential body force F_T(x, t).
struct ForceSpec {
    enum class Kind { None, Rotation } kind = Kind::None;
    double amplitude = 0.0; // Rotation: amplitude * e_z x x
    ForceFn function() const;
};

struct SchemeConfig {
    double dt = 1e-3;
    double t_end = 1e-2;
    PotentialSpec potential;
    ViscositySpec viscosity;
    ForceSpec force;
    Splitting splitting = Splitting::ConvexConcave;
    int picard_iters = 0;
    PressurePair pressure_pair = PressurePair::TaylorHood;
    double stab_param = 0.1;
    double lin_tol = 1e-10;
    double nonlin_tol = 1e-10;
    int substeps_mesh = 4;
    int newton_max_iters = 50;
    int quad_degree = 6;     // quadrature degree on the lifted elements
    // Abort with PhaseBoundViolation when a log-type run leaves (-1, 1). Only the regularized
    // potential may switch this off: its solutions live on the whole real line.
    bool enforce_phase_bound = true;

    void validate() const;
};

struct InitialPhase {
    enum class Kind { Constant, Harmonic, Random } kind = Kind::Constant;
    double mean = 0.0;
    double amplitude = 0.0;
    int degree = 1;            // Harmonic: zonal degree 1 or 2 in z/|x|
    std::uint64_t seed = 1;
    // Extra uniform noise of this size from an independent stream; the mean is restored afterwards.
    double perturbation = 0.0;
    std::uint64_t perturbation_seed = 2;
};

struct InitialVelocity {
    enum class Kind { Zero, Rotation } kind = Kind::Zero;
    double omega = 0.0; // Rotation: omega * e_z x x before the Stokes projection
};

struct StepStats {
    int picard_sweeps = 0;
    int newton_iters = 0;
    double coupling_increment = 0.0;
    double div_residual = 0.0;     // dual norm of B u + m(., H V_N)
    double linear_residual = 0.0;  // worst relative residual of the linear solves
};

/// Operators that depend only on the domain; shared between steps on static surfaces.
struct OperatorCache;

struct SolverState {
    double t = 0.0;
    SurfaceMesh mesh;
    FeFunction phi, mu;
    FeFunction u;
    FeFunction p;
    int step_index = 0;
    StepStats stats;
    std::shared_ptr<const OperatorCache> cache;

    const DomainPtr& domain() const { return phi.space->domain(); }
};

/// Nodal phase field of the requested kind on the scalar space; random data is
/// shifted so that its discrete mean equals `mean` exactly.
FeFunction initial_phase(const SpacePtr& space, const InitialPhase& spec);

SolverState initialize(const SurfaceMesh& mesh, const EvolvingSurface& surface, const InitialPhase& phi0,
                       const InitialVelocity& u0, const SchemeConfig& config);

SolverState step(const SolverState& state, const EvolvingSurface& surface, const SchemeConfig& config);

/// Velocity and pressure spaces of a configuration on one domain.
SpacePtr velocity_space(const DomainPtr& dom, const SchemeConfig& config);
SpacePtr scalar_space(const DomainPtr& dom);

/// Continuity data -m(q, H V_N - mean) over the pressure space.
VecX divergence_data(const FeSpace& p_space);
/// Dual norm (pressure mass) of B u + m(., H V_N).
double divergence_residual(const FeFunction& u, const SpacePtr& p_space);

struct RunSummary {
    int steps = 0;
    double t_final = 0.0;
    SolverState final_state;
};

using StepObserver = std::function<void(const SolverState&)>;

/// Steps from t = 0 to t_end; the observer sees the initial state and every step.
RunSummary run(const SchemeConfig& config, const EvolvingSurface& surface, const SurfaceMesh& mesh,
               const InitialPhase& phi0, const InitialVelocity& u0, const StepObserver& observer = {});

struct DeltaStudy {
    std::vector<double> deltas;
    std::vector<double> errors; // L2 distance of the final phase field to the reference run
    std::vector<double> max_abs_phi; // largest nodal |phi| over each run, same order as deltas
    double reference_max_abs_phi = 0.0;
    double reference_delta = 0.0;
    bool monotone = false;      // errors strictly decrease as delta decreases
};

DeltaStudy delta_continuation_study(const SchemeConfig& config, const EvolvingSurface& surface,
                                    const SurfaceMesh& mesh, const InitialPhase& phi0, const InitialVelocity& u0,
                                    const std::vector<double>& deltas, double reference_delta);

} // namespace surfnsch
