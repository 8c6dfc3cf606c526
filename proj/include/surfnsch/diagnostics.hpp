// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include "surfnsch/solver.hpp"

#include <map>
#include <string>
#include <vector>

namespace surfnsch {

struct DiagnosticsRow {
    double t = 0.0;
    double area = 0.0;
    double mass = 0.0;          // m(phi, 1)
    double E_ch = 0.0;          // int eps/2 |grad phi|^2 + F(phi)/eps
    double E_kin = 0.0;         // 1/2 |u|^2 (unit density)
    double grad_mu_norm = 0.0;
    double strain_norm = 0.0;   // |E(u)|
    double div_residual = 0.0;
    double max_abs_phi = 0.0;
    double p_mean = 0.0;
    std::map<std::string, double> extra;

    double energy() const { return E_ch + E_kin; }
};

/// Fixed CSV column order; `extra` columns are not part of the schema.
const std::vector<std::string>& diagnostics_columns();
std::vector<double> diagnostics_values(const DiagnosticsRow& row);

DiagnosticsRow energy_row(const SolverState& state, const PotentialSpec& potential);

struct EnergyBudget {
    double initial_energy = 0.0;
    double sup_energy = 0.0;
    double final_energy = 0.0;
    double dissipation = 0.0;   // int 1/2 (eta_* |E(u)|^2 + |grad mu|^2) dt, right-endpoint rule
    bool bounded = false;       // sup energy + dissipation <= 1e6 * max(1, initial)
    bool monotone = true;       // per-step E_kin + E_ch non-increasing within the slack
    double worst_increase = 0.0;
    long first_violation = -1;  // row index of the first increase beyond the slack
};

/// `slack` is relative to the initial energy.
EnergyBudget energy_budget(const std::vector<DiagnosticsRow>& rows, double eta_star, double slack = 1e-10);

/// Normal force F_nu from the normal momentum balance (unit density), L2-projected onto the
/// phase-field space. The normal velocity material derivative is a central difference along
/// x +- delta (V_N nu + u) mapped to Gamma(t +- delta), delta = 1e-4 T.
FeFunction normal_force_recovery(const SolverState& state, const EvolvingSurface& surface,
                                 const PotentialSpec& potential, const ViscositySpec& viscosity = {});

/// p1 = F_nu + p H at the nodes.
FeFunction p1_lagrange(const SolverState& state, const FeFunction& Fnu);

struct ModifiedPressure {
    FeFunction p_tilde;
    FeFunction correction; // eps/2 |grad phi|^2 + F(phi)/eps with area-averaged nodal gradients
};

ModifiedPressure modified_pressure(const SolverState& state, const PotentialSpec& potential);

struct StressField {
    std::vector<Mat3> T;  // element averages over the quadrature points
    double max_asymmetry = 0.0;
};

/// T = -p P + 2 eta(phi) E(u) - eps grad phi (x) grad phi.
StressField cauchy_stress(const SolverState& state, const PotentialSpec& potential, const ViscositySpec& viscosity);

/// |uA - uB|_S^2 + |phiA - phiB|_{-1}^2 on a shared mesh.
double stability_metric(const SolverState& a, const SolverState& b);

/// Bihari-LaSalle bound for X' <= K (X + gamma X^{(q+1)/2}), X(0) <= k.
double bihari_bound(double k, double K_integral, double gamma, double q);

enum class InequalityKind { Poincare, Korn, Ladyzhenskaya, BrezisGallouet };
const char* to_string(InequalityKind k);

/// LHS / RHS of the inequality with the constant removed:
///   Poincare:       |f - mean| / |grad f|
///   Korn:           |u|_{H1} / (|u| + |E(u)|)        (vector fields)
///   Ladyzhenskaya:  |f|_{L4} / (|f|^{1/2} |f|_{H1}^{1/2})
///   BrezisGallouet: |f|_inf / (|f|_{H1} (1 + log(1 + |f|_{H2} / |f|_{H1}))^{1/2}),
///                   with |f|_{H2} built from the lumped discrete Laplacian.
double inequality_probe(InequalityKind kind, const FeFunction& field);

} // namespace surfnsch
