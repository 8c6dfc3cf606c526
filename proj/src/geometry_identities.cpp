// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/geometry_identities.hpp"

#include "surfnsch/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace surfnsch {

namespace {

SurfaceDomain domain_at(const EvolvingSurface& surface, const SurfaceMesh& mesh, double t, int degree = 4)
{
    SurfaceMesh m = mesh;
    m.t = t;
    return SurfaceDomain(std::move(m), surface, degree);
}

double integrate_K(const SurfaceDomain& dom)
{
    double s = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < dom.num_qp(); ++q) s += dom.qp(e, q).w * dom.qp(e, q).g.K;
    return s;
}

} // namespace

double area_conservation_residual(const SurfaceDomain& dom)
{
    double s = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e)
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            const QuadPoint& Q = dom.qp(e, q);
            s += Q.w * Q.g.H * Q.g.v_n;
        }
    return s;
}

double area_conservation_residual(const EvolvingSurface& surface, const SurfaceMesh& mesh, double t)
{
    return area_conservation_residual(domain_at(surface, mesh, t));
}

double gauss_bonnet_defect(const SurfaceDomain& dom)
{
    return integrate_K(dom) - 2.0 * std::numbers::pi * dom.topology().euler_characteristic;
}

double gauss_bonnet_defect(const EvolvingSurface& surface, const SurfaceMesh& mesh, double t)
{
    return gauss_bonnet_defect(domain_at(surface, mesh, t));
}

double tube_volume(const SurfaceDomain& dom, double gamma)
{
    if (gamma < 0.0) fail(ErrorCode::InvalidArgument, "gamma must be non-negative");
    const double limit = dom.surface().tube_radius();
    if (gamma > limit) {
        std::ostringstream os;
        os << "gamma " << gamma << " exceeds the tube radius " << limit;
        fail(ErrorCode::GammaTooLarge, os.str());
    }
    return 2.0 * gamma * dom.area() + 2.0 * gamma * gamma * gamma / 3.0 * integrate_K(dom);
}

double tube_volume(const EvolvingSurface& surface, const SurfaceMesh& mesh, double t, double gamma)
{
    return tube_volume(domain_at(surface, mesh, t), gamma);
}

double surface_area(const EvolvingSurface& surface, const SurfaceMesh& mesh, double t, int quad_degree)
{
    return domain_at(surface, mesh, t, quad_degree).area();
}

} // namespace surfnsch
