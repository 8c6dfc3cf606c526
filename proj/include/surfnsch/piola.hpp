// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include "surfnsch/fe_space.hpp"

namespace surfnsch {

/// Per-element discrete Piola data between Gamma(0) (mesh.ref_vertices) and Gamma(t).
struct PiolaMapData {
    double t = 0.0;
    std::vector<Mat3> D, D_inv;  // tangent(0) -> tangent(t) and back
    std::vector<double> J;       // current / reference flat area
    std::vector<Mat3> A, A_inv;  // J^-1 D + nu_t (x) nu_0 and J D^-1 + nu_0 (x) nu_t
    // Frame representation: D = b M a^T with orthonormal tangent frames a (t=0) and b (t).
    std::vector<Eigen::Matrix<double, 3, 2>> frame0, frame_t;
    std::vector<Eigen::Matrix2d> M;
    std::vector<double> ref_area;
    // Nodal differential (3x3, tangent(0) -> R^3) from a quadratic least-squares fit of the
    // vertex motion over the two-ring; vertices first, then edge midpoints for P2 spaces.
    std::vector<Mat3> node_D;
};

PiolaMapData piola_maps(const SurfaceMesh& mesh_t, const EvolvingSurface& surface, double t);

/// Nodal push-forward of a tangential field on Gamma(0) into `target` (same family and topology on Gamma(t)).
FeFunction piola_push(const FeFunction& field0, const PiolaMapData& maps, const SpacePtr& target);
/// Inverse of piola_push.
FeFunction piola_pull(const FeFunction& field_t, const PiolaMapData& maps, const SpacePtr& reference);

} // namespace surfnsch
