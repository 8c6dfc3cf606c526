// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/potentials.hpp"

#include "surfnsch/error.hpp"

#include <algorithm>
#include <cmath>

namespace surfnsch {

const char* to_string(PotentialKind k)
{
    switch (k) {
    case PotentialKind::DoubleWell: return "double_well";
    case PotentialKind::Logarithmic: return "logarithmic";
    case PotentialKind::RegularizedLog: return "regularized_log";
    }
    return "?";
}

PotentialKind parse_potential_kind(const std::string& s)
{
    if (s == "double_well") return PotentialKind::DoubleWell;
    if (s == "logarithmic") return PotentialKind::Logarithmic;
    if (s == "regularized_log") return PotentialKind::RegularizedLog;
    fail(ErrorCode::ValidationError, "unknown potential '" + s + "'");
}

void PotentialSpec::validate() const
{
    if (!(epsilon > 0.0)) fail(ErrorCode::ValidationError, "epsilon must be positive");
    if (is_log() && !(theta > 0.0 && theta < 1.0)) fail(ErrorCode::ValidationError, "theta must lie in (0, 1)");
    if (variant == PotentialKind::RegularizedLog && !(delta > 0.0 && delta < 1.0))
        fail(ErrorCode::ValidationError, "delta must lie in (0, 1)");
}

double PotentialSpec::lower_bound() const
{
    if (variant == PotentialKind::DoubleWell) return 0.0;
    // theta/2 F_log >= 0 on (-1, 1) but (1 - r^2)/2 >= 0 only there; on the tails
    // F grows quadratically, so the minimum sits at the interior wells.
    double lo = 0.5;
    for (int i = 1; i < 2000; ++i) {
        const double r = -1.0 + 2.0 * i / 2000.0;
        lo = std::min(lo, 0.5 * theta * F_log(r) + 0.5 * (1.0 - r * r));
    }
    return lo - 1e-3;
}

double F_log(double r)
{
    if (!(std::abs(r) < 1.0)) fail(ErrorCode::DomainViolation, "logarithmic potential needs |r| < 1");
    return (1.0 + r) * std::log1p(r) + (1.0 - r) * std::log1p(-r);
}

double f_log(double r)
{
    if (!(std::abs(r) < 1.0)) fail(ErrorCode::DomainViolation, "logarithmic potential needs |r| < 1");
    return std::log1p(r) - std::log1p(-r);
}

double f_log_prime(double r)
{
    if (!(std::abs(r) < 1.0)) fail(ErrorCode::DomainViolation, "logarithmic potential needs |r| < 1");
    return 2.0 / ((1.0 - r) * (1.0 + r));
}

// Outside (-1 + delta, 1 - delta) the potential is the quadratic that matches F_log to second
// order at the branch point; its coefficients are written in delta so that the branch values
// do not inherit the rounding of 1 - delta.
double F_log_delta(double r, double delta)
{
    const double b = 1.0 - delta;
    if (std::abs(r) < b) return F_log(r);
    const double s = std::abs(r) - b;
    // F_log(1 - delta); the closed-form branch as usually printed carries an extra +1 here.
    const double F0 = delta * std::log(delta) + (2.0 - delta) * std::log(2.0 - delta);
    return F0 + std::log((2.0 - delta) / delta) * s + s * s / (delta * (2.0 - delta));
}

double f_delta(double r, double delta)
{
    const double b = 1.0 - delta;
    if (std::abs(r) < b) return f_log(r);
    const double s = std::abs(r) - b;
    const double v = std::log((2.0 - delta) / delta) + 2.0 * s / (delta * (2.0 - delta));
    return r > 0 ? v : -v;
}

double f_delta_prime(double r, double delta)
{
    const double b = 1.0 - delta;
    if (std::abs(r) < b) return f_log_prime(r);
    return 2.0 / (delta * (2.0 - delta));
}

double F1(const PotentialSpec& s, double r)
{
    switch (s.variant) {
    case PotentialKind::DoubleWell: return 0.25 * r * r * r * r;
    case PotentialKind::Logarithmic: return 0.5 * s.theta * F_log(r);
    case PotentialKind::RegularizedLog: return 0.5 * s.theta * F_log_delta(r, s.delta);
    }
    return 0.0;
}

double dF1(const PotentialSpec& s, double r)
{
    switch (s.variant) {
    case PotentialKind::DoubleWell: return r * r * r;
    case PotentialKind::Logarithmic: return 0.5 * s.theta * f_log(r);
    case PotentialKind::RegularizedLog: return 0.5 * s.theta * f_delta(r, s.delta);
    }
    return 0.0;
}

double d2F1(const PotentialSpec& s, double r)
{
    switch (s.variant) {
    case PotentialKind::DoubleWell: return 3.0 * r * r;
    case PotentialKind::Logarithmic: return 0.5 * s.theta * f_log_prime(r);
    case PotentialKind::RegularizedLog: return 0.5 * s.theta * f_delta_prime(r, s.delta);
    }
    return 0.0;
}

double F2(const PotentialSpec& s, double r)
{
    return s.variant == PotentialKind::DoubleWell ? 0.25 - 0.5 * r * r : 0.5 * (1.0 - r * r);
}

double dF2(const PotentialSpec&, double r)
{
    return -r;
}

double F(const PotentialSpec& s, double r)
{
    return F1(s, r) + F2(s, r);
}

double dF(const PotentialSpec& s, double r)
{
    return dF1(s, r) + dF2(s, r);
}

double d2F(const PotentialSpec& s, double r)
{
    return d2F1(s, r) - 1.0;
}

InequalityReport potential_inequality_checks(const PotentialSpec& spec, const std::vector<double>& samples)
{
    if (spec.variant != PotentialKind::RegularizedLog)
        fail(ErrorCode::InvalidArgument, "inequality checks apply to the regularized logarithmic potential");
    InequalityReport rep;
    rep.worst_sign_margin = rep.worst_bound_margin = rep.worst_monotone_margin = INFINITY;
    for (double r : samples) {
        const double f = f_delta(r, spec.delta);
        const double fp = f_delta_prime(r, spec.delta);
        const double sign = r * f;
        const double bound = r * f + 1.0 - f;
        rep.worst_sign_margin = std::min(rep.worst_sign_margin, sign);
        rep.worst_bound_margin = std::min(rep.worst_bound_margin, bound);
        rep.worst_monotone_margin = std::min(rep.worst_monotone_margin, fp);
        if (sign < 0.0 || bound < 0.0 || fp < 0.0) ++rep.failures;
        ++rep.samples;
    }
    return rep;
}

ContinuityReport c2_continuity_check(const PotentialSpec& spec, double h)
{
    if (spec.variant != PotentialKind::RegularizedLog)
        fail(ErrorCode::InvalidArgument, "continuity check applies to the regularized logarithmic potential");
    const double d = spec.delta;
    ContinuityReport rep;
    auto jump = [h](auto&& g, double r0) {
        const double left = 2.0 * g(r0 - h) - g(r0 - 2.0 * h);
        const double right = 2.0 * g(r0 + h) - g(r0 + 2.0 * h);
        return std::abs(left - right) / std::max(1.0, std::abs(g(r0)));
    };
    for (double r0 : {1.0 - d, -(1.0 - d)}) {
        rep.jump_F = std::max(rep.jump_F, jump([d](double r) { return F_log_delta(r, d); }, r0));
        rep.jump_dF = std::max(rep.jump_dF, jump([d](double r) { return f_delta(r, d); }, r0));
        rep.jump_d2F = std::max(rep.jump_d2F, jump([d](double r) { return f_delta_prime(r, d); }, r0));
    }
    return rep;
}

void ViscositySpec::validate() const
{
    if (!(eta1 > 0.0 && eta2 > 0.0)) fail(ErrorCode::ViscosityNonPositive, "viscosities must be positive");
}

double ViscositySpec::eta_star() const
{
    return std::min(eta1, eta2);
}

double ViscositySpec::eta_star_upper() const
{
    return std::max(eta1, eta2);
}

double ViscositySpec::lipschitz() const
{
    return 0.5 * std::abs(eta1 - eta2);
}

double eta(const ViscositySpec& v, double r)
{
    const double c = std::clamp(r, -1.0, 1.0);
    return v.eta1 * 0.5 * (1.0 + c) + v.eta2 * 0.5 * (1.0 - c);
}

} // namespace surfnsch
