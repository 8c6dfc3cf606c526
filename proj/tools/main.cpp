// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
// Command-line front end: run, geometry-check, norms, convergence, stability, verify.
#include "surfnsch/config.hpp"
#include "surfnsch/diagnostics.hpp"
#include "surfnsch/elliptic.hpp"
#include "surfnsch/error.hpp"
#include "surfnsch/forms.hpp"
#include "surfnsch/geometry_identities.hpp"
#include "surfnsch/io.hpp"
#include "surfnsch/verification.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

namespace fs = std::filesystem;
using namespace surfnsch;

namespace {

constexpr double kPi = 3.14159265358979323846;

fs::path output_path(const RunConfig& cfg, const std::string& name)
{
    const fs::path p(name);
    return p.is_absolute() ? p : fs::path(cfg.output.directory) / p;
}

int cmd_run(const std::string& config_path)
{
    const RunConfig cfg = load_config(config_path);
    const EvolvingSurface surface = make_surface(cfg);
    const SurfaceMesh mesh = make_mesh(cfg, surface);
    fs::create_directories(cfg.output.directory);
    const std::string normalized = emit_config(cfg);
    {
        std::ofstream echo(output_path(cfg, "config.normalized.ini"));
        if (!echo) fail(ErrorCode::IoError, "cannot write into '" + cfg.output.directory + "'");
        echo << normalized;
    }
    CsvWriter csv(output_path(cfg, cfg.output.csv).string());
    const int stride = cfg.output.snapshot_stride;
    auto snapshot = [&](const SolverState& s) {
        char name[48];
        std::snprintf(name, sizeof name, "snapshot_%06d.vtk", s.step_index);
        write_snapshot(s, output_path(cfg, name).string());
    };
    DiagnosticsRow last;
    const RunSummary summary = run(cfg.scheme, surface, mesh, cfg.phi0, cfg.u0, [&](const SolverState& s) {
        last = energy_row(s, cfg.scheme.potential);
        csv.append(last);
        if (s.step_index == 0 || (stride > 0 && s.step_index % stride == 0)) snapshot(s);
    });
    const bool final_written = summary.steps == 0 || (stride > 0 && summary.steps % stride == 0);
    if (!final_written) snapshot(summary.final_state);

    std::ofstream sum(output_path(cfg, "summary.txt"));
    sum << "steps = " << summary.steps << "\nt_final = " << summary.t_final << "\nenergy = " << last.energy()
        << "\nmass = " << last.mass << "\nmax_abs_phi = " << last.max_abs_phi << "\n\n# normalized config\n"
        << normalized;
    std::printf("run: %d steps to t = %.6g, energy %.10g, mass %.15g; output in %s\n", summary.steps,
                summary.t_final, last.energy(), last.mass, cfg.output.directory.c_str());
    return 0;
}

int cmd_geometry(const std::string& config_path)
{
    const RunConfig cfg = load_config(config_path);
    const EvolvingSurface surface = make_surface(cfg);
    const SurfaceMesh mesh = make_mesh(cfg, surface);
    const MeshTopology topo = build_topology(mesh);
    const double t = mesh.t;
    std::printf("surface            %s\n", surface.describe().c_str());
    std::printf("vertices           %zu\ntriangles          %zu\n", mesh.num_vertices(), mesh.num_triangles());
    std::printf("euler char         %d (watertight %d, oriented %d)\n", topo.euler_characteristic,
                topo.watertight ? 1 : 0, topo.oriented ? 1 : 0);
    std::printf("min angle [deg]    %.4f\nmax edge           %.6f\n", min_angle_degrees(mesh), max_edge_length(mesh));
    std::printf("level residual     %.3e\n", max_level_residual(mesh, surface));
    const double area = surface_area(surface, mesh, t, 6);
    const double exact = surface.exact_area(t);
    std::printf("area               %.12f (exact %.12f, rel %.2e)\n", area, exact, std::abs(area - exact) / exact);
    std::printf("Gauss-Bonnet       defect %.3e\n", gauss_bonnet_defect(surface, mesh, t));
    // Steiner: for gamma below the reach, |tube| = 2 gamma |Gamma| + (2/3) gamma^3 int K.
    const double gamma = 0.5 * surface.tube_radius();
    const double tube = tube_volume(surface, mesh, t, gamma);
    const double steiner = 2.0 * gamma * exact + 2.0 / 3.0 * std::pow(gamma, 3) * 2.0 * kPi *
                                                     surface.euler_characteristic();
    std::printf("tube volume        gamma %.4f: %.10f (Steiner %.10f, rel %.2e)\n", gamma, tube, steiner,
                std::abs(tube - steiner) / steiner);
    if (!surface.is_static())
        std::printf("area conservation  residual %.3e\n", area_conservation_residual(surface, mesh, t));
    return 0;
}

double zonal2(const Vec3& x)
{
    const double z = x.normalized().z();
    return 0.5 * (3.0 * z * z - 1.0);
}

int cmd_norms(const std::string& config_path)
{
    const RunConfig cfg = load_config(config_path);
    const EvolvingSurface surface = make_surface(cfg);
    const SurfaceMesh mesh = make_mesh(cfg, surface);
    const auto dom = SurfaceDomain::make(mesh, surface, cfg.scheme.quad_degree);
    const auto S = FeSpace::make(dom, FeFamily::P1Scalar);
    const bool unit_sphere = surface.kind() == SurfaceKind::StaticSphere && cfg.surface.radius == 1.0;

    const FeFunction y = remove_mean(interpolate(S, zonal2));
    const FeFunction g = inverse_laplacian(y);
    std::printf("|Y20|_-1               %.10f\n", h_minus1_norm(y));
    if (unit_sphere) {
        const double err = l2_norm(FeFunction(S, g.coeffs - y.coeffs / 6.0)) / l2_norm(FeFunction(S, y.coeffs / 6.0));
        std::printf("G(Y20) vs Y20/6        rel L2 %.3e\n", err);
    }
    const auto V = FeSpace::make(dom, FeFamily::P2VectorTangential);
    const auto Q = pressure_space_for(V);
    const FeFunction k = interpolate_vector(V, [](const Vec3& x) { return Vec3(Vec3::UnitZ().cross(x)); });
    const InverseStokes op(V, Q);
    const double sn = op.s_norm(k);
    std::printf("|e_z x x|_S            %.10f", sn);
    if (unit_sphere) std::printf(" (exact %.10f)", std::sqrt(8.0 * kPi / 3.0));
    std::printf("\n");
    const InfSupResult r = inf_sup(V, Q);
    std::printf("inf-sup (Taylor-Hood)  %.6f\n", r.beta);
    std::printf("Killing kernel dim     %d\n", killing_kernel_dim(V));
    return 0;
}

int cmd_convergence(const std::string& config_path, int levels)
{
    const RunConfig cfg = load_config(config_path);
    const EvolvingSurface surface = make_surface(cfg);
    if (!cfg.mesh.off_path.empty()) fail(ErrorCode::ValidationError, "mesh.off_path: convergence needs an icosphere level");
    const bool unit_sphere = surface.kind() == SurfaceKind::StaticSphere && cfg.surface.radius == 1.0;
    const int top = cfg.mesh.level;
    const int bottom = std::max(0, top - levels + 1);
    std::printf("%5s %10s %12s %8s %12s %8s %12s %8s\n", "level", "h", "GB defect", "order", "area err", "order",
                unit_sphere ? "G(Y20) err" : "|Y20|_-1", unit_sphere ? "order" : "");
    double ph = 0, pg = 0, pa = 0, pe = 0;
    for (int l = bottom; l <= top; ++l) {
        const SurfaceMesh m = mesh_for_surface(surface, l, 0.0);
        const double h = max_edge_length(m);
        const double gb = gauss_bonnet_defect(surface, m, 0.0);
        const double ea = std::abs(surface_area(surface, m, 0.0) - surface.exact_area(0.0));
        const auto S = FeSpace::make(SurfaceDomain::make(m, surface, 6), FeFamily::P1Scalar);
        const FeFunction y = remove_mean(interpolate(S, zonal2));
        double e = h_minus1_norm(y);
        if (unit_sphere) {
            const FeFunction g = inverse_laplacian(y);
            e = l2_norm(FeFunction(S, g.coeffs - y.coeffs / 6.0)) / l2_norm(FeFunction(S, y.coeffs / 6.0));
        }
        auto order = [&](double prev, double cur) {
            return l > bottom ? std::log(prev / cur) / std::log(ph / h) : NAN;
        };
        std::printf("%5d %10.5f %12.4e %8.3f %12.4e %8.3f %12.4e %8.3f\n", l, h, gb, order(pg, gb), ea,
                    order(pa, ea), e, unit_sphere ? order(pe, e) : NAN);
        ph = h;
        pg = gb;
        pa = ea;
        pe = e;
    }
    return 0;
}

int cmd_stability(const std::string& config_path, double perturbation)
{
    const RunConfig cfg = load_config(config_path);
    const EvolvingSurface surface = make_surface(cfg);
    const SurfaceMesh mesh = make_mesh(cfg, surface);
    InitialPhase pb = cfg.phi0;
    pb.perturbation = perturbation;
    pb.perturbation_seed = cfg.seed + 1;
    std::vector<SolverState> a, b;
    run(cfg.scheme, surface, mesh, cfg.phi0, cfg.u0, [&](const SolverState& s) { a.push_back(s); });
    run(cfg.scheme, surface, mesh, pb, cfg.u0, [&](const SolverState& s) { b.push_back(s); });
    std::printf("%12s %16s %12s\n", "t", "metric", "ratio");
    const double m0 = stability_metric(a.front(), b.front());
    double worst = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        const double m = stability_metric(a[i], b[i]);
        worst = std::max(worst, m / m0);
        std::printf("%12.6f %16.8e %12.6f\n", a[i].t, m, m / m0);
    }
    std::printf("max ratio %.6f\n", worst);
    return 0;
}

int cmd_verify(const std::vector<int>& only)
{
    const std::set<int> wanted(only.begin(), only.end());
    int failed = 0, ran = 0;
    for (const AcceptanceCheck& c : acceptance_checks()) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        const CheckResult r = run_check(c);
        std::printf("%s\n", format_result(r).c_str());
        std::fflush(stdout);
        ++ran;
        if (!r.pass) ++failed;
    }
    std::printf("%d of %d checks passed\n", ran - failed, ran);
    return failed == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Surface Navier-Stokes-Cahn-Hilliard solver"};
    app.require_subcommand(1);
    std::string config;
    int levels = 3;
    double perturbation = 1e-3;
    std::vector<int> only;

    auto* run_cmd = app.add_subcommand("run", "time integration with CSV diagnostics and VTK snapshots");
    run_cmd->add_option("config", config, "config file")->required();
    auto* geo_cmd = app.add_subcommand("geometry-check", "mesh, curvature, Gauss-Bonnet, tube-volume and area report");
    geo_cmd->add_option("config", config, "config file")->required();
    auto* norms_cmd = app.add_subcommand("norms", "inverse Laplacian, inverse Stokes and inf-sup report");
    norms_cmd->add_option("config", config, "config file")->required();
    auto* conv_cmd = app.add_subcommand("convergence", "refinement table ending at the configured level");
    conv_cmd->add_option("config", config, "config file")->required();
    conv_cmd->add_option("--levels", levels, "number of levels")->check(CLI::Range(2, 8));
    auto* stab_cmd = app.add_subcommand("stability", "two runs from nearby data and the stability metric trace");
    stab_cmd->add_option("config", config, "config file")->required();
    stab_cmd->add_option("--perturbation", perturbation, "size of the phase perturbation");
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance oracle suite");
    verify_cmd->add_option("--only", only, "check ids to run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run_cmd) return cmd_run(config);
        if (*geo_cmd) return cmd_geometry(config);
        if (*norms_cmd) return cmd_norms(config);
        if (*conv_cmd) return cmd_convergence(config, levels);
        if (*stab_cmd) return cmd_stability(config, perturbation);
        if (*verify_cmd) return cmd_verify(only);
    } catch (const Error& e) {
        std::fprintf(stderr, "surfnsch: %s: %s\n", to_string(e.code()), e.what());
        return is_numerical(e.code()) ? 2 : 1;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "surfnsch: IoError: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "surfnsch: %s\n", e.what());
        return 2;
    }
    return 1;
}
