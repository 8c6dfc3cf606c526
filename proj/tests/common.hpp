// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
// Closed-form fields and quadrature-based oracles shared by the unit tests.
#pragma once

#include "surfnsch/fe_space.hpp"

#include <cmath>
#include <functional>

namespace testing_support {

using surfnsch::Vec3;

inline constexpr double kPi = 3.14159265358979323846;

inline double y10(const Vec3& x)
{
    return x.normalized().z();
}

inline double y20(const Vec3& x)
{
    const double z = x.normalized().z();
    return 0.5 * (3.0 * z * z - 1.0);
}

inline Vec3 rotation(const Vec3& x)
{
    return Vec3::UnitZ().cross(x);
}

/// Integral over the lifted quadrature of a function of the exact surface point.
inline double integrate_exact(const surfnsch::SurfaceDomain& dom, const std::function<double(const Vec3&)>& f)
{
    double s = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < dom.num_qp(); ++q) s += dom.qp(e, q).w * f(dom.qp(e, q).p);
    return s;
}

/// Relative L2 distance of a discrete scalar field to a closed-form function.
inline double rel_l2(const surfnsch::FeFunction& f, const std::function<double(const Vec3&)>& exact)
{
    const surfnsch::SurfaceDomain& dom = *f.space->domain();
    double num = 0.0, den = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            const auto& qp = dom.qp(e, q);
            const double ex = exact(qp.p), d = f.value(e, q) - ex;
            num += qp.w * d * d;
            den += qp.w * ex * ex;
        }
    return std::sqrt(num / den);
}

/// Relative L2 distance of a discrete vector field to a closed-form one.
inline double rel_l2_vec(const surfnsch::FeFunction& f, const std::function<Vec3(const Vec3&)>& exact)
{
    const surfnsch::SurfaceDomain& dom = *f.space->domain();
    double num = 0.0, den = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            const auto& qp = dom.qp(e, q);
            const Vec3 ex = exact(qp.p);
            num += qp.w * (f.vector_value(e, q) - ex).squaredNorm();
            den += qp.w * ex.squaredNorm();
        }
    return std::sqrt(num / den);
}

} // namespace testing_support
