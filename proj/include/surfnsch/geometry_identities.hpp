// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include "surfnsch/domain.hpp"

namespace surfnsch {

/// int H V_N over Gamma(t) by lifted quadrature on `mesh`.
double area_conservation_residual(const EvolvingSurface& surface, const SurfaceMesh& mesh, double t);
double area_conservation_residual(const SurfaceDomain& domain);

/// int K dA - 2 pi chi(mesh).
double gauss_bonnet_defect(const EvolvingSurface& surface, const SurfaceMesh& mesh, double t);
double gauss_bonnet_defect(const SurfaceDomain& domain);

/// 2 gamma |Gamma| + (2 gamma^3 / 3) int K. Throws GammaTooLarge beyond the tube radius.
double tube_volume(const EvolvingSurface& surface, const SurfaceMesh& mesh, double t, double gamma);
double tube_volume(const SurfaceDomain& domain, double gamma);

/// Quadrature area of Gamma(t).
double surface_area(const EvolvingSurface& surface, const SurfaceMesh& mesh, double t, int quad_degree = 4);

} // namespace surfnsch
