// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include "surfnsch/geometry.hpp"
#include "surfnsch/types.hpp"

#include <string>
#include <vector>

namespace surfnsch {

struct SurfaceMesh {
    std::vector<Vec3> vertices;
    std::vector<Tri> triangles;
    double t = 0.0;
    /// Vertex positions at t = 0; vertex i of every advected mesh is the
    /// image of ref_vertices[i] under the normal flow.
    std::vector<Vec3> ref_vertices;

    std::size_t num_vertices() const { return vertices.size(); }
    std::size_t num_triangles() const { return triangles.size(); }
};

struct MeshTopology {
    std::vector<std::array<int, 2>> edges;      // sorted vertex pairs
    std::vector<std::array<int, 3>> tri_edges;  // local edges (0,1), (1,2), (2,0)
    int euler_characteristic = 0;
    bool watertight = false;  // every edge has exactly two triangles
    bool oriented = false;    // and they traverse it in opposite directions
};

MeshTopology build_topology(const SurfaceMesh& mesh);

/// Subdivided icosahedron on the unit sphere; level in [0, 7].
SurfaceMesh icosphere(int level);

/// Structured torus triangulation with outward orientation.
SurfaceMesh torus_mesh(double major, double minor, int n_major, int n_minor);

/// Initial mesh conforming to Gamma(t): icosphere scaled to the ellipsoid or
/// sphere axes and projected, or a torus grid with 10 * 2^level by 5 * 2^level cells.
SurfaceMesh mesh_for_surface(const EvolvingSurface& surface, int level, double t = 0.0);

/// Moves vertices along V_N nu by classical RK4 with `substeps` steps, then
/// projects them onto Gamma(t_new). t_new < mesh.t integrates backwards.
SurfaceMesh advect(const SurfaceMesh& mesh, const EvolvingSurface& surface, double t_new, int substeps);

double min_angle_degrees(const SurfaceMesh& mesh);
double max_edge_length(const SurfaceMesh& mesh);
double flat_area(const SurfaceMesh& mesh);
double max_level_residual(const SurfaceMesh& mesh, const EvolvingSurface& surface);

/// Throws MeshQualityDegraded / ProjectionFailed when an invariant is broken.
void check_mesh(const SurfaceMesh& mesh, const EvolvingSurface& surface);

SurfaceMesh read_off(const std::string& path);
void write_off(const SurfaceMesh& mesh, const std::string& path);

} // namespace surfnsch
