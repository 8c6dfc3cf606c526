// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include "surfnsch/geometry.hpp"
#include "surfnsch/mesh.hpp"
#include "surfnsch/solver.hpp"

#include <cstdint>
#include <string>

namespace surfnsch {

struct SurfaceConfig {
    std::string kind = "static_sphere"; // static_sphere | static_ellipsoid | static_torus |
                                        // area_preserving_ellipsoid | dilating_sphere
    double radius = 1.0;
    double a = 1.0, b = 1.0, c = 1.2;   // static ellipsoid axes
    double major = 1.0, minor = 0.4;    // torus radii
    double period = 1.0;                // T
    double a0 = 1.0, c0 = 1.2, amplitude = 0.2;
    double rate = 0.1;                  // dilating sphere
};

struct MeshConfig {
    int level = 3;
    std::string off_path;  // when set, overrides level
};

struct OutputConfig {
    std::string directory = "out";
    int snapshot_stride = 0;  // 0: initial and final snapshots only
    std::string csv = "diagnostics.csv";
};

/// Key = value text with [surface], [mesh], [scheme], [potential], [viscosity],
/// [force], [initial], [output] sections; `seed` may appear before any section.
struct RunConfig {
    SurfaceConfig surface;
    MeshConfig mesh;
    SchemeConfig scheme;
    InitialPhase phi0;
    InitialVelocity u0;
    OutputConfig output;
    std::uint64_t seed = 1;

    bool operator==(const RunConfig& other) const;
};

/// Parses and validates; unknown sections or keys raise ParseError with the line number,
/// out-of-range values raise ValidationError naming the field.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
void validate(const RunConfig& cfg);
/// Normalized text with every key, numbers at 17 significant digits.
std::string emit_config(const RunConfig& cfg);

EvolvingSurface make_surface(const RunConfig& cfg);
SurfaceMesh make_mesh(const RunConfig& cfg, const EvolvingSurface& surface);

} // namespace surfnsch
