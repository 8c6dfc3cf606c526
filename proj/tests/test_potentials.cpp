// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/error.hpp"
#include "surfnsch/potentials.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

using namespace surfnsch;

namespace {

PotentialSpec spec(PotentialKind k, double theta = 0.3, double delta = 1e-2)
{
    PotentialSpec s;
    s.variant = k;
    s.theta = theta;
    s.delta = delta;
    return s;
}

// Closed forms written out independently of the library.
double flog_ref(double r)
{
    return (1 + r) * std::log(1 + r) + (1 - r) * std::log(1 - r);
}

std::vector<double> grid(double lo, double hi, int n)
{
    std::vector<double> g;
    for (int i = 0; i <= n; ++i) g.push_back(lo + (hi - lo) * i / n);
    return g;
}

void expect_code(ErrorCode code, const std::function<void()>& f)
{
    try {
        f();
        FAIL("expected " << to_string(code));
    } catch (const Error& e) {
        CHECK(e.code() == code);
    }
}

} // namespace

TEST_CASE("double well values")
{
    const PotentialSpec s = spec(PotentialKind::DoubleWell);
    CHECK(F(s, 0.0) == doctest::Approx(0.25));
    CHECK(F(s, 1.0) == doctest::Approx(0.0));
    CHECK(F(s, -1.0) == doctest::Approx(0.0));
    CHECK(dF(s, 0.5) == doctest::Approx(0.125 - 0.5));
    CHECK(d2F(s, 2.0) == doctest::Approx(11.0));
    for (double r : grid(-2, 2, 40)) {
        CHECK(F(s, r) == doctest::Approx(F1(s, r) + F2(s, r)));
        CHECK(dF(s, r) == doctest::Approx(dF1(s, r) + dF2(s, r)));
        CHECK(d2F1(s, r) >= 0.0);
    }
    CHECK(s.lower_bound() == 0.0);
}

TEST_CASE("logarithmic potential values and domain")
{
    const PotentialSpec s = spec(PotentialKind::Logarithmic, 0.3);
    CHECK(F(s, 0.0) == doctest::Approx(0.5));
    CHECK(F_log(0.0) == 0.0);
    for (double r : grid(-0.99, 0.99, 66)) {
        CHECK(F_log(r) == doctest::Approx(flog_ref(r)).epsilon(1e-14));
        CHECK(F(s, r) == doctest::Approx(0.15 * flog_ref(r) + 0.5 * (1 - r * r)).epsilon(1e-13));
    }
    expect_code(ErrorCode::DomainViolation, [&] { F(s, 1.0); });
    expect_code(ErrorCode::DomainViolation, [&] { dF(s, -1.5); });
    expect_code(ErrorCode::DomainViolation, [&] { f_log_prime(1.0); });
}

TEST_CASE("logarithmic derivative has exactly three roots for theta < 1")
{
    for (double theta : {0.3, 0.6, 0.9}) {
        const PotentialSpec s = spec(PotentialKind::Logarithmic, theta);
        int changes = 0;
        double prev = dF(s, -0.999999);
        const std::vector<double> g = grid(-0.999999, 0.999999, 20001);
        for (std::size_t i = 1; i < g.size(); ++i) {
            const double cur = dF(s, g[i]);
            if ((prev < 0) != (cur < 0)) ++changes;
            prev = cur;
        }
        CHECK(changes == 3);
        CHECK(std::abs(dF(s, 0.0)) < 1e-15);
        // The wells sit below the central maximum.
        CHECK(s.lower_bound() < F(s, 0.0));
    }
}

TEST_CASE("derivatives agree with central differences")
{
    const double h = 1e-5;
    for (PotentialKind k : {PotentialKind::DoubleWell, PotentialKind::Logarithmic, PotentialKind::RegularizedLog}) {
        const PotentialSpec s = spec(k, 0.4, 0.05);
        for (double r : grid(-0.9, 0.9, 36)) {
            CHECK(dF(s, r) == doctest::Approx((F(s, r + h) - F(s, r - h)) / (2 * h)).epsilon(1e-7));
            CHECK(d2F(s, r) == doctest::Approx((dF(s, r + h) - dF(s, r - h)) / (2 * h)).epsilon(1e-6));
        }
    }
    for (double r : grid(-0.9, 0.9, 18)) {
        CHECK(f_log(r) == doctest::Approx((F_log(r + h) - F_log(r - h)) / (2 * h)).epsilon(1e-7));
        CHECK(f_log_prime(r) == doctest::Approx(2.0 / (1 - r * r)).epsilon(1e-14));
    }
}

TEST_CASE("regularized potential")
{
    for (double delta : {1e-4, 1e-2, 0.1}) {
        // Identical to the logarithm inside.
        for (double r : grid(-(1 - 1.01 * delta), 1 - 1.01 * delta, 50)) {
            CHECK(F_log_delta(r, delta) == doctest::Approx(flog_ref(r)).epsilon(1e-13));
            CHECK(f_delta(r, delta) == doctest::Approx(f_log(r)).epsilon(1e-13));
        }
        // Quadratic outside: constant second derivative, symmetric.
        const double b = 1 - delta;
        for (double r : {b + 0.01, 1.0, 1.5, 3.0}) {
            CHECK(f_delta_prime(r, delta) == doctest::Approx(2.0 / (delta * (2 - delta))).epsilon(1e-12));
            CHECK(F_log_delta(r, delta) == doctest::Approx(F_log_delta(-r, delta)).epsilon(1e-14));
            CHECK(f_delta(r, delta) == doctest::Approx(-f_delta(-r, delta)).epsilon(1e-14));
        }
        // Second-order Taylor expansion of F_log about b.
        const double s = 0.3;
        const double taylor = flog_ref(b) + std::log((2 - delta) / delta) * s + s * s / (delta * (2 - delta));
        CHECK(F_log_delta(b + s, delta) == doctest::Approx(taylor).epsilon(1e-12));
    }
}

TEST_CASE("regularized potential is C2 across the branch points")
{
    for (double delta : {0.1, 0.25}) {
        PotentialSpec s = spec(PotentialKind::RegularizedLog, 0.3, delta);
        const ContinuityReport c = c2_continuity_check(s);
        CHECK(c.ok());
    }
}

TEST_CASE("structural inequalities of the regularized derivative")
{
    const std::vector<double> samples = grid(-5, 5, 2001);
    for (double delta : {1e-4, 1e-2, 0.1}) {
        const InequalityReport r = potential_inequality_checks(spec(PotentialKind::RegularizedLog, 0.3, delta), samples);
        CHECK(r.samples == samples.size());
        CHECK(r.ok());
        CHECK(r.worst_monotone_margin > 0.0);
    }
    expect_code(ErrorCode::InvalidArgument,
                [&] { potential_inequality_checks(spec(PotentialKind::DoubleWell), samples); });
}

TEST_CASE("potential validation")
{
    PotentialSpec s = spec(PotentialKind::Logarithmic);
    CHECK_NOTHROW(s.validate());
    s.theta = 1.0;
    expect_code(ErrorCode::ValidationError, [&] { s.validate(); });
    s = spec(PotentialKind::RegularizedLog, 0.3, 0.0);
    expect_code(ErrorCode::ValidationError, [&] { s.validate(); });
    s = spec(PotentialKind::DoubleWell);
    s.epsilon = 0.0;
    expect_code(ErrorCode::ValidationError, [&] { s.validate(); });
    expect_code(ErrorCode::ValidationError, [] { parse_potential_kind("quartic"); });
    for (PotentialKind k : {PotentialKind::DoubleWell, PotentialKind::Logarithmic, PotentialKind::RegularizedLog})
        CHECK(parse_potential_kind(to_string(k)) == k);
}

TEST_CASE("viscosity interpolation")
{
    ViscositySpec v;
    v.eta1 = 1.0;
    v.eta2 = 3.0;
    CHECK(eta(v, 1.0) == 1.0);
    CHECK(eta(v, -1.0) == 3.0);
    CHECK(eta(v, 0.0) == 2.0);
    CHECK(eta(v, 5.0) == 1.0);
    CHECK(eta(v, -5.0) == 3.0);
    CHECK(v.eta_star() == 1.0);
    CHECK(v.eta_star_upper() == 3.0);
    // Lipschitz constant bounds the difference quotient.
    for (double r : grid(-1, 1, 20)) CHECK(std::abs(eta(v, r) - eta(v, 0.3)) <= v.lipschitz() * std::abs(r - 0.3) + 1e-15);
    v.eta2 = 0.0;
    expect_code(ErrorCode::ViscosityNonPositive, [&] { v.validate(); });
}
