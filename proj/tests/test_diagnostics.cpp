// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "common.hpp"

#include "surfnsch/diagnostics.hpp"
#include "surfnsch/elliptic.hpp"
#include "surfnsch/forms.hpp"
#include "surfnsch/solver.hpp"

#include <doctest.h>

#include <random>

using namespace surfnsch;
using testing_support::kPi;

namespace {

using ScalarFn = std::function<double(const Vec3&)>;
using VectorFn = std::function<Vec3(const Vec3&)>;

Vec3 zero_vec(const Vec3&)
{
    return Vec3::Zero();
}

SolverState fixture(const ScalarFn& phi, const VectorFn& u, const ScalarFn& p, int level = 3, int quad_degree = 6)
{
    const auto sphere = EvolvingSurface::static_sphere();
    SchemeConfig cfg;
    cfg.quad_degree = quad_degree;
    SolverState s = initialize(mesh_for_surface(sphere, level), sphere, InitialPhase{}, {}, cfg);
    s.phi = interpolate(s.phi.space, phi);
    s.mu = FeFunction(s.mu.space);
    s.u = interpolate_vector(s.u.space, u);
    s.p = interpolate(s.p.space, p);
    return s;
}

double zero(const Vec3&)
{
    return 0.0;
}

double grad_z_sq(const Vec3& x)
{
    const double z = x.normalized().z();
    return 1.0 - z * z;
}

// Random cubic polynomial restricted to the surface.
ScalarFn random_poly(std::mt19937& rng)
{
    std::normal_distribution<double> N;
    std::array<double, 10> c;
    for (double& v : c) v = N(rng);
    return [c](const Vec3& x) {
        const double X = x.x(), Y = x.y(), Z = x.z();
        return c[0] + c[1] * X + c[2] * Y + c[3] * Z + c[4] * X * Y + c[5] * Y * Z + c[6] * Z * X + c[7] * X * X * Y +
               c[8] * Y * Z * Z + c[9] * X * Y * Z;
    };
}

// Tangential part of a random linear vector polynomial.
VectorFn random_tangent(std::mt19937& rng)
{
    std::normal_distribution<double> N;
    Mat3 A;
    Vec3 b;
    for (int i = 0; i < 3; ++i) {
        b[i] = N(rng);
        for (int j = 0; j < 3; ++j) A(i, j) = N(rng);
    }
    return [A, b](const Vec3& x) {
        const Vec3 n = x.normalized();
        const Vec3 v = A * x + b;
        return Vec3(v - n.dot(v) * n);
    };
}

// RK4 for X' = K (X + gamma X^((q+1)/2)) on [0, 1] with constant K.
double bihari_ode(double k, double K, double gamma, double q)
{
    auto f = [&](double X) { return K * (X + gamma * std::pow(X, 0.5 * (q + 1))); };
    const int n = 20000;
    const double h = 1.0 / n;
    double X = k;
    for (int i = 0; i < n; ++i) {
        const double k1 = f(X), k2 = f(X + 0.5 * h * k1), k3 = f(X + 0.5 * h * k2), k4 = f(X + h * k3);
        X += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return X;
}

} // namespace

TEST_CASE("energy row examples")
{
    const PotentialSpec pot;
    const DiagnosticsRow r0 = energy_row(fixture(zero, zero_vec, zero), pot);
    CHECK(r0.E_ch == doctest::Approx(0.25 / pot.epsilon * 4.0 * kPi).epsilon(1e-8));
    CHECK(r0.E_kin == 0.0);
    CHECK(r0.area == doctest::Approx(4.0 * kPi).epsilon(1e-8));
    const DiagnosticsRow r1 = energy_row(fixture([](const Vec3&) { return 1.0; }, zero_vec, zero), pot);
    CHECK(std::abs(r1.E_ch) < 1e-14);
    CHECK(r1.mass == doctest::Approx(4.0 * kPi).epsilon(1e-8));
    // Rigid rotation: 1/2 int |e_z x x|^2 = 4 pi / 3.
    const DiagnosticsRow r2 = energy_row(fixture(zero, testing_support::rotation, zero), pot);
    CHECK(r2.E_kin == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-3));
    CHECK(r2.strain_norm < 1e-2);
}

TEST_CASE("energy row is saturated in the quadrature degree")
{
    const PotentialSpec pot;
    auto phi = [](const Vec3& x) { return 0.3 + 0.5 * x.normalized().z() + 0.2 * x.x() * x.y(); };
    const DiagnosticsRow a = energy_row(fixture(phi, testing_support::rotation, zero, 3, 6), pot);
    const DiagnosticsRow b = energy_row(fixture(phi, testing_support::rotation, zero, 3, 12), pot);
    CHECK(std::abs(a.E_ch - b.E_ch) <= 1e-6 * std::abs(b.E_ch));
    CHECK(std::abs(a.E_kin - b.E_kin) <= 1e-6 * std::abs(b.E_kin));
    CHECK(std::abs(a.mass - b.mass) <= 1e-6 * std::abs(b.mass));
}

TEST_CASE("energy budget")
{
    std::vector<DiagnosticsRow> rows(5);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].t = 0.1 * i;
        rows[i].E_ch = 2.0;
    }
    EnergyBudget b = energy_budget(rows, 1.0);
    CHECK(b.monotone);
    CHECK(b.bounded);
    CHECK(b.dissipation == 0.0);
    CHECK(b.first_violation == -1);

    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].E_ch = 2.0 - 0.1 * i;
        rows[i].grad_mu_norm = 1.0;
        rows[i].strain_norm = 2.0;
    }
    b = energy_budget(rows, 0.5);
    CHECK(b.monotone);
    CHECK(b.initial_energy == 2.0);
    CHECK(b.final_energy == doctest::Approx(1.6));
    CHECK(b.sup_energy == 2.0);
    // Right-endpoint rule over 4 steps of 0.1: 1/2 (0.5 * 4 + 1) * 0.4.
    CHECK(b.dissipation == doctest::Approx(0.6));

    rows[3].E_ch = 1.95;
    b = energy_budget(rows, 0.5);
    CHECK_FALSE(b.monotone);
    CHECK(b.first_violation == 3);
    CHECK(b.worst_increase == doctest::Approx(0.15));
}

TEST_CASE("normal force recovery fixtures")
{
    const auto sphere = EvolvingSurface::static_sphere();
    const PotentialSpec pot;
    const SolverState rest = fixture([](const Vec3&) { return 0.3; }, zero_vec, zero);
    CHECK(normal_force_recovery(rest, sphere, pot).coeffs.cwiseAbs().maxCoeff() <= 1e-12);

    const SolverState y = fixture(testing_support::y10, zero_vec, zero);
    const FeFunction f = normal_force_recovery(y, sphere, pot);
    CHECK(testing_support::rel_l2(f, [&](const Vec3& x) { return pot.epsilon * grad_z_sq(x); }) <= 0.02);

    const SolverState rot = fixture([](const Vec3&) { return 0.3; }, testing_support::rotation, zero);
    CHECK(testing_support::rel_l2(normal_force_recovery(rot, sphere, pot), [](const Vec3& x) { return -grad_z_sq(x); }) <=
          0.02);
}

TEST_CASE("normal Lagrange multiplier algebra")
{
    const SolverState s = fixture([](const Vec3&) { return 0.3; }, zero_vec, [](const Vec3& x) { return 0.4 * x.z(); });
    const FeFunction Fnu = interpolate(s.phi.space, [](const Vec3& x) { return x.x() * x.y(); });
    const FeFunction p1 = p1_lagrange(s, Fnu);
    for (std::size_t i = 0; i < p1.space->num_nodes(); ++i)
        CHECK(std::abs(p1.coeffs[i] - (Fnu.coeffs[i] + 2.0 * s.p.coeffs[i])) <= 1e-14 * (1.0 + std::abs(p1.coeffs[i])));

    SolverState no_p = s;
    no_p.p = FeFunction(s.p.space);
    CHECK((p1_lagrange(no_p, Fnu).coeffs - Fnu.coeffs).cwiseAbs().maxCoeff() == 0.0);
    const FeFunction only_p = p1_lagrange(s, FeFunction(Fnu.space));
    CHECK((only_p.coeffs - 2.0 * s.p.coeffs).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((only_p.coeffs + p1_lagrange(no_p, Fnu).coeffs - p1.coeffs).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("modified pressure")
{
    const PotentialSpec pot;
    const SolverState well = fixture([](const Vec3&) { return 1.0; }, zero_vec, [](const Vec3& x) { return x.z(); });
    const ModifiedPressure a = modified_pressure(well, pot);
    CHECK((a.p_tilde.coeffs - well.p.coeffs).cwiseAbs().maxCoeff() <= 1e-14);

    const SolverState y = fixture(testing_support::y10, zero_vec, zero, 4);
    const ModifiedPressure b = modified_pressure(y, pot);
    CHECK((b.p_tilde.coeffs - b.correction.coeffs - y.p.coeffs).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(testing_support::rel_l2(b.p_tilde, [&](const Vec3& x) {
              const double z = x.normalized().z();
              return 0.5 * pot.epsilon * grad_z_sq(x) + F(pot, z) / pot.epsilon;
          }) <= 0.02);
}

TEST_CASE("Cauchy stress")
{
    const PotentialSpec pot;
    const ViscositySpec visc;
    const auto p = [](const Vec3& x) { return 0.5 + x.z(); };
    const SolverState s = fixture([](const Vec3&) { return 0.3; }, zero_vec, p);
    const StressField T = cauchy_stress(s, pot, visc);
    const SurfaceDomain& dom = *s.domain();
    CHECK(T.max_asymmetry <= 1e-13);
    double worst = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e) {
        Mat3 ref = Mat3::Zero();
        double a = 0.0;
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            ref -= dom.qp(e, q).w * s.p.value(e, q) * dom.qp(e, q).g.proj;
            a += dom.qp(e, q).w;
        }
        ref /= a;
        worst = std::max(worst, (T.T[e] - ref).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 0.02);

    // Divergence-free rotation and constant phase: p = -tr(T) / 2.
    const SolverState r = fixture([](const Vec3&) { return 0.3; }, testing_support::rotation, p);
    const StressField Tr = cauchy_stress(r, pot, visc);
    CHECK(Tr.max_asymmetry <= 1e-13);
    double trace_err = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e) {
        double pm = 0.0, a = 0.0;
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            pm += dom.qp(e, q).w * r.p.value(e, q);
            a += dom.qp(e, q).w;
        }
        pm /= a;
        trace_err = std::max(trace_err, std::abs(-0.5 * Tr.T[e].trace() - pm));
    }
    CHECK(trace_err <= 0.05);

    // Korteweg part alone: -eps grad phi (x) grad phi.
    const SolverState k = fixture(testing_support::y10, zero_vec, zero);
    const StressField Tk = cauchy_stress(k, pot, visc);
    double korteweg = 0.0;
    for (std::size_t e = 0; e < dom.num_elements(); ++e) {
        Mat3 ref = Mat3::Zero();
        double a = 0.0;
        for (std::size_t q = 0; q < dom.num_qp(); ++q) {
            const Vec3 n = dom.qp(e, q).p.normalized();
            const Vec3 g = Vec3::UnitZ() - n.z() * n;
            ref -= dom.qp(e, q).w * pot.epsilon * g * g.transpose();
            a += dom.qp(e, q).w;
        }
        ref /= a;
        korteweg = std::max(korteweg, (Tk.T[e] - ref).cwiseAbs().maxCoeff());
    }
    CHECK(korteweg <= 0.1 * pot.epsilon);
}

TEST_CASE("stability metric")
{
    const SolverState a = fixture(testing_support::y10, zero_vec, zero);
    CHECK(stability_metric(a, a) == 0.0);
    const SolverState b = fixture(testing_support::y10, testing_support::rotation, zero);
    CHECK(stability_metric(a, b) == doctest::Approx(8.0 * kPi / 3.0).epsilon(0.02));

    SolverState c = fixture([](const Vec3& x) { return x.normalized().z() + 0.1 * x.x() * x.y(); },
                            [](const Vec3& x) { return Vec3(0.2 * x.cross(Vec3(1, 1, 0))); }, zero);
    const double base = stability_metric(a, c);
    for (double s : {0.5, 2.0}) {
        SolverState d = a;
        d.phi.coeffs = a.phi.coeffs + s * (c.phi.coeffs - a.phi.coeffs);
        d.u.coeffs = a.u.coeffs + s * (c.u.coeffs - a.u.coeffs);
        CHECK(stability_metric(a, d) == doctest::Approx(s * s * base).epsilon(0.01));
    }
}

TEST_CASE("Bihari-LaSalle bound")
{
    CHECK(bihari_bound(2.0, 0.0, 0.3, 3.0) == doctest::Approx(2.0));
    CHECK(bihari_bound(1.5, 0.7, 0.0, 3.0) == doctest::Approx(1.5 * std::exp(0.7)).epsilon(1e-12));
    CHECK(bihari_bound(1.0, 1.0, 1e-3, 3.0) == doctest::Approx(bihari_ode(1.0, 1.0, 1e-3, 3.0)).epsilon(1e-8));
    CHECK(bihari_bound(0.5, 0.8, 0.2, 2.0) == doctest::Approx(bihari_ode(0.5, 0.8, 0.2, 2.0)).epsilon(1e-8));
    const std::vector<double> ks = {0.1, 0.5, 1.0}, Ks = {0.0, 0.3, 0.6}, gs = {0.0, 1e-3, 0.1};
    for (double k : ks)
        for (double K : Ks)
            for (double g : gs) {
                const double v = bihari_bound(k, K, g, 3.0);
                CHECK(bihari_bound(k * 1.1, K, g, 3.0) >= v);
                CHECK(bihari_bound(k, K + 0.1, g, 3.0) >= v);
                CHECK(bihari_bound(k, K, g + 0.01, 3.0) >= v);
            }
}

TEST_CASE("inequality probes")
{
    const auto sphere = EvolvingSurface::static_sphere();
    {
        const auto S = FeSpace::make(SurfaceDomain::make(mesh_for_surface(sphere, 4), sphere, 6), FeFamily::P1Scalar);
        CHECK(inequality_probe(InequalityKind::Poincare, interpolate(S, testing_support::y10)) ==
              doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.02));
        const double lady = inequality_probe(InequalityKind::Ladyzhenskaya, interpolate(S, [](const Vec3&) { return 1.0; }));
        CHECK(std::isfinite(lady));
        // |1|_L4 / |1|_L2 = |Gamma|^(-1/4) and |1|_H1 = |1|_L2.
        CHECK(lady == doctest::Approx(std::pow(4.0 * kPi, -0.25)).epsilon(1e-6));
        const auto V = FeSpace::make(S->domain(), FeFamily::P1VectorTangential);
        CHECK(std::isfinite(inequality_probe(InequalityKind::Korn, interpolate_vector(V, testing_support::rotation))));
    }

    // The largest ratio over random smooth fields should not depend on the mesh.
    const InequalityKind kinds[] = {InequalityKind::Poincare, InequalityKind::Korn, InequalityKind::Ladyzhenskaya,
                                    InequalityKind::BrezisGallouet};
    std::array<std::vector<double>, 4> worst;
    for (int level : {3, 4, 5}) {
        const auto dom = SurfaceDomain::make(mesh_for_surface(sphere, level), sphere, 4);
        const auto S = FeSpace::make(dom, FeFamily::P1Scalar);
        const auto V = FeSpace::make(dom, FeFamily::P1VectorTangential);
        std::mt19937 rng(99);
        std::array<double, 4> w{};
        for (int i = 0; i < 100; ++i) {
            const FeFunction f = interpolate(S, random_poly(rng));
            const FeFunction u = interpolate_vector(V, random_tangent(rng));
            for (int k = 0; k < 4; ++k)
                w[k] = std::max(w[k], inequality_probe(kinds[k], kinds[k] == InequalityKind::Korn ? u : f));
        }
        for (int k = 0; k < 4; ++k) worst[k].push_back(w[k]);
    }
    for (int k = 0; k < 4; ++k) {
        const auto [lo, hi] = std::minmax_element(worst[k].begin(), worst[k].end());
        INFO(to_string(kinds[k]) << ": " << *lo << " .. " << *hi);
        CHECK(*hi <= 1.1 * *lo);
    }
}
