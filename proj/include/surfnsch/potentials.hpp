// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace surfnsch {

enum class PotentialKind { DoubleWell, Logarithmic, RegularizedLog };

const char* to_string(PotentialKind k);
PotentialKind parse_potential_kind(const std::string& s);

/// F = F1 + F2 with F1 convex and F2 concave.
///   DoubleWell:     F1 = r^4/4,                F2 = 1/4 - r^2/2
///   Logarithmic:    F1 = theta/2 F_log(r),     F2 = (1 - r^2)/2
///   RegularizedLog: F1 = theta/2 F_log^d(r),   F2 = (1 - r^2)/2
struct PotentialSpec {
    PotentialKind variant = PotentialKind::DoubleWell;
    double epsilon = 0.1;
    double theta = 0.3;
    double delta = 1e-4;

    void validate() const;
    bool is_log() const { return variant != PotentialKind::DoubleWell; }
    /// Lower bound of F over its domain.
    double lower_bound() const;
};

double F(const PotentialSpec& s, double r);
double dF(const PotentialSpec& s, double r);
double d2F(const PotentialSpec& s, double r);

double F1(const PotentialSpec& s, double r);
double dF1(const PotentialSpec& s, double r);
double d2F1(const PotentialSpec& s, double r);
double F2(const PotentialSpec& s, double r);
double dF2(const PotentialSpec& s, double r);

/// (1+r) log(1+r) + (1-r) log(1-r) and its derivatives, |r| < 1.
double F_log(double r);
double f_log(double r);
double f_log_prime(double r);
/// Regularization: F_log on |r| < 1 - delta, second-order Taylor extension outside.
double F_log_delta(double r, double delta);
double f_delta(double r, double delta);
double f_delta_prime(double r, double delta);

struct InequalityReport {
    std::size_t samples = 0;
    std::size_t failures = 0;
    double worst_sign_margin = 0.0;   // min r f(r)
    double worst_bound_margin = 0.0;  // min (r f(r) + 1 - f(r))
    double worst_monotone_margin = 0.0; // min f'(r)
    bool ok() const { return failures == 0; }
};

/// Checks r f^d(r) >= 0, f^d(r) <= r f^d(r) + 1 and (f^d)' >= 0 at the samples.
InequalityReport potential_inequality_checks(const PotentialSpec& spec, const std::vector<double>& samples);

struct ContinuityReport {
    double jump_F = 0.0, jump_dF = 0.0, jump_d2F = 0.0; // relative, worst of r = +-(1 - delta)
    bool ok(double tol = 1e-6) const { return jump_F <= tol && jump_dF <= tol && jump_d2F <= tol; }
};

/// One-sided extrapolations (step h) of F_log^d, f^d, (f^d)' to r = +-(1 - delta), compared across the branch point.
ContinuityReport c2_continuity_check(const PotentialSpec& spec, double h = 1e-5);

struct ViscositySpec {
    double eta1 = 1.0;
    double eta2 = 2.0;

    void validate() const;
    double eta_star() const;
    double eta_star_upper() const;
    double lipschitz() const;
};

/// Linear blend eta1 (1+r)/2 + eta2 (1-r)/2, clamped outside [-1, 1].
double eta(const ViscositySpec& v, double r);

} // namespace surfnsch
