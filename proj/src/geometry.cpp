// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/geometry.hpp"

#include "surfnsch/error.hpp"
#include "surfnsch/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>

namespace surfnsch {

namespace {

constexpr double kPi = std::numbers::pi;

double spheroid_integrand(double a, double c, double th)
{
    const double s = std::sin(th), co = std::cos(th);
    return 2.0 * kPi * a * s * std::sqrt(c * c * s * s + a * a * co * co);
}

// c such that spheroid_area(a, c) == target, by Newton from a Thomsen-type guess.
double solve_polar_axis(double a, double target, double guess)
{
    double c = guess;
    if (!(c > 0.0)) {
        const double p = 1.6075;
        const double q = std::pow(target / (4.0 * kPi), p);
        const double base = (3.0 * q - std::pow(a, 2.0 * p)) / (2.0 * std::pow(a, p));
        c = base > 0.0 ? std::pow(base, 1.0 / p) : 0.5 * a;
    }
    for (int it = 0; it < 60; ++it) {
        const double r = spheroid_area(a, c) - target;
        double da, dc;
        spheroid_area_gradient(a, c, da, dc);
        double step = r / dc;
        while (c - step <= 0.0) step *= 0.5;
        c -= step;
        if (std::abs(step) <= 1e-15 * c) return c;
    }
    if (std::abs(spheroid_area(a, c) - target) > 1e-12 * target)
        fail(ErrorCode::NoConvergence, "area-preserving axis solve did not converge");
    return c;
}

} // namespace

double spheroid_area(double a, double c)
{
    return integrate_adaptive([&](double th) { return spheroid_integrand(a, c, th); }, 0.0, kPi);
}

void spheroid_area_gradient(double a, double c, double& dA_da, double& dA_dc)
{
    dA_da = integrate_adaptive(
        [&](double th) {
            const double s = std::sin(th), co = std::cos(th);
            const double w = std::sqrt(c * c * s * s + a * a * co * co);
            return 2.0 * kPi * s * (w + a * a * co * co / w);
        },
        0.0, kPi);
    dA_dc = integrate_adaptive(
        [&](double th) {
            const double s = std::sin(th), co = std::cos(th);
            const double w = std::sqrt(c * c * s * s + a * a * co * co);
            return 2.0 * kPi * a * s * c * s * s / w;
        },
        0.0, kPi);
}

double ellipsoid_area(double a, double b, double c)
{
    return integrate_adaptive(
        [&](double th) {
            return integrate_adaptive(
                [&](double ph) {
                    const double st = std::sin(th), ct = std::cos(th);
                    const double sp = std::sin(ph), cp = std::cos(ph);
                    const Vec3 dth(a * ct * cp, b * ct * sp, -c * st);
                    const Vec3 dph(-a * st * sp, b * st * cp, 0.0);
                    return dth.cross(dph).norm();
                },
                0.0, 2.0 * kPi, 1e-13);
        },
        0.0, kPi, 1e-13);
}

// ---------------------------------------------------------------------------
// SurfaceFrame

double SurfaceFrame::level(const Vec3& x) const
{
    switch (shape_) {
    case LevelShape::Sphere:
        return x.norm() - axes[0];
    case LevelShape::Ellipsoid:
        return x[0] * x[0] / (axes[0] * axes[0]) + x[1] * x[1] / (axes[1] * axes[1]) +
               x[2] * x[2] / (axes[2] * axes[2]) - 1.0;
    case LevelShape::Torus: {
        const double rho = std::hypot(x[0], x[1]);
        return std::hypot(rho - major, x[2]) - minor;
    }
    }
    return 0.0;
}

Vec3 SurfaceFrame::gradient(const Vec3& x) const
{
    switch (shape_) {
    case LevelShape::Sphere: {
        const double n = x.norm();
        if (n < 1e-300) return Vec3::Zero();
        return x / n;
    }
    case LevelShape::Ellipsoid:
        return Vec3(2.0 * x[0] / (axes[0] * axes[0]), 2.0 * x[1] / (axes[1] * axes[1]),
                    2.0 * x[2] / (axes[2] * axes[2]));
    case LevelShape::Torus: {
        const double rho = std::hypot(x[0], x[1]);
        if (rho < 1e-300) return Vec3::Zero();
        const Vec3 q((rho - major) * x[0] / rho, (rho - major) * x[1] / rho, x[2]);
        const double s = q.norm();
        if (s < 1e-300) return Vec3::Zero();
        return q / s;
    }
    }
    return Vec3::Zero();
}

Mat3 SurfaceFrame::hessian(const Vec3& x) const
{
    switch (shape_) {
    case LevelShape::Sphere: {
        const double n = x.norm();
        const Vec3 u = x / n;
        return (Mat3::Identity() - u * u.transpose()) / n;
    }
    case LevelShape::Ellipsoid:
        return Vec3(2.0 / (axes[0] * axes[0]), 2.0 / (axes[1] * axes[1]), 2.0 / (axes[2] * axes[2]))
            .asDiagonal();
    case LevelShape::Torus: {
        const double rho = std::hypot(x[0], x[1]);
        const Vec3 q((rho - major) * x[0] / rho, (rho - major) * x[1] / rho, x[2]);
        const double s = q.norm();
        const Vec3 qh = q / s;
        Mat3 jq = Mat3::Zero();
        const double r3 = rho * rho * rho;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                jq(i, j) = (i == j ? 1.0 - major / rho : 0.0) + major * x[i] * x[j] / r3;
        jq(2, 2) = 1.0;
        Mat3 h = (Mat3::Identity() - qh * qh.transpose()) * jq / s;
        return 0.5 * (h + h.transpose());
    }
    }
    return Mat3::Zero();
}

double SurfaceFrame::time_derivative(const Vec3& x) const
{
    switch (shape_) {
    case LevelShape::Sphere:
        return -axes_rate[0];
    case LevelShape::Ellipsoid: {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) s += -2.0 * x[i] * x[i] * axes_rate[i] / std::pow(axes[i], 3);
        return s;
    }
    case LevelShape::Torus:
        return 0.0;
    }
    return 0.0;
}

double SurfaceFrame::normal_velocity(const Vec3& x) const
{
    if (vn_override_) return (*vn_override_)(x, t);
    const double dt = time_derivative(x);
    if (dt == 0.0) return 0.0;
    const double g = gradient(x).norm();
    if (g < 1e-8) fail(ErrorCode::DegenerateGradient, "level gradient vanishes");
    return -dt / g;
}

GeomSample SurfaceFrame::sample(const Vec3& x) const
{
    const Vec3 g = gradient(x);
    const double gn = g.norm();
    if (gn < 1e-8) fail(ErrorCode::DegenerateGradient, "level gradient vanishes");
    GeomSample s;
    s.nu = g / gn;
    s.proj = tangent_projector(s.nu);
    Mat3 h = s.proj * hessian(x) * s.proj / gn;
    s.shape_op = 0.5 * (h + h.transpose());
    s.H = s.shape_op.trace();
    // Product of the two tangential eigenvalues; the normal eigenvalue is zero.
    s.K = 0.5 * (s.H * s.H - (s.shape_op * s.shape_op).trace());
    s.v_n = vn_override_ ? (*vn_override_)(x, t) : -time_derivative(x) / gn;
    return s;
}

Vec3 SurfaceFrame::closest_point(const Vec3& x) const
{
    switch (shape_) {
    case LevelShape::Sphere: {
        const double n = x.norm();
        if (n < 1e-8) fail(ErrorCode::DegenerateGradient, "closest point undefined at the centre");
        return axes[0] * x / n;
    }
    case LevelShape::Torus: {
        const Vec3 g = gradient(x);
        if (g.norm() < 0.5) fail(ErrorCode::DegenerateGradient, "closest point undefined on the core circle");
        return x - level(x) * g;
    }
    case LevelShape::Ellipsoid:
        break;
    }
    // Newton on [p - x + lambda grad L(p); L(p)] = 0.
    Vec3 p = x;
    Vec3 g0 = gradient(x);
    double lam = level(x) / std::max(g0.squaredNorm(), 1e-300);
    p = x - lam * g0;
    for (int it = 0; it < 50; ++it) {
        const Vec3 g = gradient(p);
        const double L = level(p);
        Eigen::Vector4d r;
        r.head<3>() = p - x + lam * g;
        r[3] = L;
        Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
        J.topLeftCorner<3, 3>() = Mat3::Identity() + lam * hessian(p);
        J.block<3, 1>(0, 3) = g;
        J.block<1, 3>(3, 0) = g.transpose();
        const Eigen::Vector4d d = J.partialPivLu().solve(-r);
        p += d.head<3>();
        lam += d[3];
        if (d.head<3>().norm() <= 1e-15 * (1.0 + p.norm()) && std::abs(level(p)) <= 1e-14) return p;
        if (!p.allFinite()) break;
    }
    if (p.allFinite() && std::abs(level(p)) <= 1e-12) return p;
    fail(ErrorCode::NoConvergence, "closest point Newton did not converge in 50 iterations");
}

// ---------------------------------------------------------------------------
// EvolvingSurface

EvolvingSurface EvolvingSurface::static_sphere(double radius)
{
    if (!(radius > 0.0)) fail(ErrorCode::ValidationError, "sphere radius must be positive");
    EvolvingSurface s;
    s.kind_ = SurfaceKind::StaticSphere;
    s.shape_ = LevelShape::Sphere;
    s.axes0_ = Vec3::Constant(radius);
    s.area0_ = 4.0 * kPi * radius * radius;
    return s;
}

EvolvingSurface EvolvingSurface::static_ellipsoid(double a, double b, double c)
{
    if (!(a > 0.0 && b > 0.0 && c > 0.0)) fail(ErrorCode::ValidationError, "ellipsoid axes must be positive");
    EvolvingSurface s;
    s.kind_ = SurfaceKind::StaticLevelSet;
    s.shape_ = LevelShape::Ellipsoid;
    s.axes0_ = Vec3(a, b, c);
    s.area0_ = (a == b) ? spheroid_area(a, c) : ellipsoid_area(a, b, c);
    return s;
}

EvolvingSurface EvolvingSurface::static_torus(double major, double minor)
{
    if (!(minor > 0.0 && major > minor)) fail(ErrorCode::ValidationError, "torus needs major > minor > 0");
    EvolvingSurface s;
    s.kind_ = SurfaceKind::StaticLevelSet;
    s.shape_ = LevelShape::Torus;
    s.major_ = major;
    s.minor_ = minor;
    s.area0_ = 4.0 * kPi * kPi * major * minor;
    return s;
}

EvolvingSurface EvolvingSurface::area_preserving_ellipsoid(double period, double a0, double c0,
                                                           double amplitude)
{
    if (!(period > 0.0)) fail(ErrorCode::ValidationError, "period must be positive");
    if (!(a0 > 0.0 && c0 > 0.0)) fail(ErrorCode::ValidationError, "ellipsoid axes must be positive");
    if (!(std::abs(amplitude) < 1.0)) fail(ErrorCode::ValidationError, "amplitude must lie in (-1, 1)");
    EvolvingSurface s;
    s.kind_ = SurfaceKind::AreaPreservingEllipsoid;
    s.shape_ = LevelShape::Ellipsoid;
    s.axes0_ = Vec3(a0, a0, c0);
    s.period_ = period;
    s.amplitude_ = amplitude;
    s.area0_ = spheroid_area(a0, c0);
    return s;
}

EvolvingSurface EvolvingSurface::dilating_sphere(double r0, double rate)
{
    if (!(r0 > 0.0)) fail(ErrorCode::ValidationError, "sphere radius must be positive");
    EvolvingSurface s;
    s.kind_ = SurfaceKind::DilatingSphere;
    s.shape_ = LevelShape::Sphere;
    s.axes0_ = Vec3::Constant(r0);
    s.rate_ = rate;
    s.area0_ = 4.0 * kPi * r0 * r0;
    return s;
}

EvolvingSurface EvolvingSurface::with_normal_velocity(NormalVelocityFn fn) const
{
    EvolvingSurface s = *this;
    s.vn_override_ = std::make_shared<const NormalVelocityFn>(std::move(fn));
    return s;
}

bool EvolvingSurface::is_static() const
{
    return (kind_ == SurfaceKind::StaticSphere || kind_ == SurfaceKind::StaticLevelSet) && !vn_override_;
}

bool EvolvingSurface::moves_mesh() const
{
    return kind_ == SurfaceKind::AreaPreservingEllipsoid || kind_ == SurfaceKind::DilatingSphere;
}

SurfaceFrame EvolvingSurface::at(double t) const
{
    SurfaceFrame f;
    f.t = t;
    f.shape_ = shape_;
    f.vn_override_ = vn_override_;
    f.axes = axes0_;
    f.major = major_;
    f.minor = minor_;
    switch (kind_) {
    case SurfaceKind::StaticSphere:
    case SurfaceKind::StaticLevelSet:
        break;
    case SurfaceKind::DilatingSphere:
        f.axes = Vec3::Constant(axes0_[0] + rate_ * t);
        f.axes_rate = Vec3::Constant(rate_);
        if (!(f.axes[0] > 0.0)) fail(ErrorCode::DomainViolation, "dilating sphere radius became non-positive");
        break;
    case SurfaceKind::AreaPreservingEllipsoid: {
        const double w = 2.0 * kPi / period_;
        const double a = axes0_[0] * (1.0 + amplitude_ * std::sin(w * t));
        const double da = axes0_[0] * amplitude_ * w * std::cos(w * t);
        const double c = (t == 0.0) ? axes0_[2] : solve_polar_axis(a, area0_, -1.0);
        double dA_da, dA_dc;
        spheroid_area_gradient(a, c, dA_da, dA_dc);
        const double dc = -da * dA_da / dA_dc;
        f.axes = Vec3(a, a, c);
        f.axes_rate = Vec3(da, da, dc);
        break;
    }
    }
    return f;
}

double EvolvingSurface::exact_area(double t) const
{
    const SurfaceFrame f = at(t);
    switch (shape_) {
    case LevelShape::Sphere:
        return 4.0 * kPi * f.axes[0] * f.axes[0];
    case LevelShape::Ellipsoid:
        if (f.axes[0] == f.axes[1]) return spheroid_area(f.axes[0], f.axes[2]);
        return ellipsoid_area(f.axes[0], f.axes[1], f.axes[2]);
    case LevelShape::Torus:
        return 4.0 * kPi * kPi * major_ * minor_;
    }
    return 0.0;
}

double EvolvingSurface::min_curvature_radius(double t) const
{
    const SurfaceFrame f = at(t);
    switch (shape_) {
    case LevelShape::Sphere:
        return f.axes[0];
    case LevelShape::Ellipsoid: {
        const double amax = f.axes.maxCoeff(), amin = f.axes.minCoeff();
        return amin * amin / amax;
    }
    case LevelShape::Torus:
        return std::min(minor_, major_ - minor_);
    }
    return 0.0;
}

double EvolvingSurface::tube_radius() const
{
    double r = min_curvature_radius(0.0);
    if (kind_ == SurfaceKind::AreaPreservingEllipsoid) {
        for (int k = 1; k <= 32; ++k) r = std::min(r, min_curvature_radius(period_ * k / 32.0));
    }
    return 0.4 * r;
}

std::string EvolvingSurface::describe() const
{
    std::ostringstream os;
    switch (kind_) {
    case SurfaceKind::StaticSphere: os << "static sphere R=" << axes0_[0]; break;
    case SurfaceKind::StaticLevelSet:
        if (shape_ == LevelShape::Torus)
            os << "static torus R=" << major_ << " r=" << minor_;
        else
            os << "static ellipsoid (" << axes0_[0] << "," << axes0_[1] << "," << axes0_[2] << ")";
        break;
    case SurfaceKind::AreaPreservingEllipsoid:
        os << "area-preserving ellipsoid a0=" << axes0_[0] << " c0=" << axes0_[2] << " T=" << period_;
        break;
    case SurfaceKind::DilatingSphere: os << "dilating sphere R0=" << axes0_[0] << " rate=" << rate_; break;
    }
    if (vn_override_) os << " (synthetic V_N)";
    return os.str();
}

GeomSample sample(const EvolvingSurface& surface, const Vec3& x, double t)
{
    return surface.at(t).sample(x);
}

Vec3 closest_point(const EvolvingSurface& surface, const Vec3& x, double t)
{
    return surface.at(t).closest_point(x);
}

} // namespace surfnsch
