// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include "surfnsch/types.hpp"

#include <functional>
#include <memory>
#include <string>

namespace surfnsch {

enum class SurfaceKind { StaticSphere, StaticLevelSet, AreaPreservingEllipsoid, DilatingSphere };
enum class LevelShape { Sphere, Ellipsoid, Torus };

/// Pointwise geometry at a point of (or near) the surface.
struct GeomSample {
    Vec3 nu = Vec3::Zero();
    double H = 0.0;
    Mat3 shape_op = Mat3::Zero();
    double K = 0.0;
    double v_n = 0.0;
    Mat3 proj = Mat3::Identity();
};

using NormalVelocityFn = std::function<double(const Vec3&, double)>;

class EvolvingSurface;

/// Time-frozen view of a surface. All time-dependent shape parameters
/// (including the root solve of the area-preserving family) are resolved once.
class SurfaceFrame {
public:
    double t = 0.0;
    Vec3 axes = Vec3::Ones();      // semi-axes (ellipsoid) or radius in axes[0]
    Vec3 axes_rate = Vec3::Zero(); // d/dt of axes
    double major = 0.0, minor = 0.0; // torus radii

    double level(const Vec3& x) const;
    Vec3 gradient(const Vec3& x) const;
    Mat3 hessian(const Vec3& x) const;
    double time_derivative(const Vec3& x) const;

    GeomSample sample(const Vec3& x) const;
    Vec3 closest_point(const Vec3& x) const;
    /// Normal velocity alone (cheaper than a full sample).
    double normal_velocity(const Vec3& x) const;

private:
    friend class EvolvingSurface;
    LevelShape shape_ = LevelShape::Sphere;
    std::shared_ptr<const NormalVelocityFn> vn_override_;
};

class EvolvingSurface {
public:
    static EvolvingSurface static_sphere(double radius = 1.0);
    static EvolvingSurface static_ellipsoid(double a, double b, double c);
    static EvolvingSurface static_torus(double major, double minor);
    /// Axisymmetric (a,a,c) ellipsoid with a(t) = a0 (1 + amplitude sin(2 pi t / period))
    /// and c(t) fixed by |Gamma(t)| = area(a0, c0).
    static EvolvingSurface area_preserving_ellipsoid(double period, double a0 = 1.0, double c0 = 1.2,
                                                     double amplitude = 0.2);
    /// Sphere of radius r0 + rate t. Not area preserving; used as a test fixture.
    static EvolvingSurface dilating_sphere(double r0, double rate);

    /// Same geometry, but sample() reports v_n = fn(x, t). Meshes do not move.
    EvolvingSurface with_normal_velocity(NormalVelocityFn fn) const;

    SurfaceKind kind() const { return kind_; }
    LevelShape shape() const { return shape_; }
    bool is_static() const;
    bool moves_mesh() const;
    double period() const { return period_; }
    double area0() const { return area0_; }
    int euler_characteristic() const { return shape_ == LevelShape::Torus ? 0 : 2; }
    const Vec3& base_axes() const { return axes0_; }
    double amplitude() const { return amplitude_; }
    double torus_major() const { return major_; }
    double torus_minor() const { return minor_; }
    bool has_synthetic_velocity() const { return static_cast<bool>(vn_override_); }

    SurfaceFrame at(double t) const;
    double level(const Vec3& x, double t) const { return at(t).level(x); }

    /// Exact area of Gamma(t) from the analytic description.
    double exact_area(double t) const;
    /// Smallest principal curvature radius of Gamma(t).
    double min_curvature_radius(double t) const;
    /// 0.4 times the smallest curvature radius over t in [0, period] (or t = 0 when static).
    double tube_radius() const;

    std::string describe() const;

private:
    SurfaceKind kind_ = SurfaceKind::StaticSphere;
    LevelShape shape_ = LevelShape::Sphere;
    Vec3 axes0_ = Vec3::Ones();
    double major_ = 0.0, minor_ = 0.0;
    double period_ = 1.0, amplitude_ = 0.0, rate_ = 0.0;
    double area0_ = 0.0;
    std::shared_ptr<const NormalVelocityFn> vn_override_;
};

GeomSample sample(const EvolvingSurface& surface, const Vec3& x, double t);
Vec3 closest_point(const EvolvingSurface& surface, const Vec3& x, double t);

/// Area of the (a, a, c) spheroid by adaptive quadrature of the parametric area element.
double spheroid_area(double a, double c);
/// Partial derivatives of spheroid_area with respect to a and c.
void spheroid_area_gradient(double a, double c, double& dA_da, double& dA_dc);
/// Area of a general (a, b, c) ellipsoid by nested adaptive quadrature.
double ellipsoid_area(double a, double b, double c);

} // namespace surfnsch
