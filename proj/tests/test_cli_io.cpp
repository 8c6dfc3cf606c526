// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/config.hpp"
#include "surfnsch/diagnostics.hpp"
#include "surfnsch/error.hpp"
#include "surfnsch/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

using namespace surfnsch;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "surfnsch_test_cli_io";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Returns the error message, failing the test if the code differs or nothing is thrown.
std::string error_of(ErrorCode code, const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        CHECK(e.code() == code);
        return e.what();
    }
    FAIL("expected " << to_string(code));
    return {};
}

SolverState small_state()
{
    const auto s = EvolvingSurface::area_preserving_ellipsoid(1.0);
    InitialPhase p;
    p.kind = InitialPhase::Kind::Random;
    p.mean = 0.1;
    p.amplitude = 0.3;
    InitialVelocity u;
    u.kind = InitialVelocity::Kind::Rotation;
    SolverState st = initialize(mesh_for_surface(s, 1), s, p, u, SchemeConfig{});
    for (Eigen::Index i = 0; i < st.p.coeffs.size(); ++i) st.p.coeffs[i] = 1.0 / 3.0 + 1e-7 * i;
    return st;
}

} // namespace

TEST_CASE("config parsing")
{
    const RunConfig c = parse_config(R"(seed = 42
# comment
[surface]
kind = static_torus   ; trailing comment
major = 2
minor = 0.5
[scheme]
dt = 2.5e-3
t_end = 0.1
splitting = newton_implicit
[potential]
kind = logarithmic
theta = 0.4
[initial]
phi = harmonic
degree = 2
mean = -0.2
)");
    CHECK(c.seed == 42);
    CHECK(c.phi0.seed == 42);
    CHECK(c.surface.kind == "static_torus");
    CHECK(c.surface.major == 2.0);
    CHECK(c.scheme.dt == 2.5e-3);
    CHECK(c.scheme.splitting == Splitting::NewtonImplicit);
    CHECK(c.scheme.potential.variant == PotentialKind::Logarithmic);
    CHECK(c.scheme.potential.theta == 0.4);
    CHECK(c.phi0.kind == InitialPhase::Kind::Harmonic);
    CHECK(c.phi0.degree == 2);
    CHECK(c.phi0.mean == -0.2);
    // Untouched fields keep their defaults.
    CHECK(c.mesh.level == RunConfig{}.mesh.level);
    CHECK(c.output.csv == "diagnostics.csv");
}

TEST_CASE("parse errors carry the line number")
{
    std::string msg = error_of(ErrorCode::ParseError, [] { parse_config("[mesh]\nlevel = 2\nbogus = 1\n"); });
    CHECK(msg.find("line 3") != std::string::npos);
    msg = error_of(ErrorCode::ParseError, [] { parse_config("\n[nowhere]\n"); });
    CHECK(msg.find("line 2") != std::string::npos);
    error_of(ErrorCode::ParseError, [] { parse_config("[scheme\n"); });
    error_of(ErrorCode::ParseError, [] { parse_config("[scheme]\ndt\n"); });
    error_of(ErrorCode::ParseError, [] { parse_config("[scheme]\ndt = fast\n"); });
    error_of(ErrorCode::ParseError, [] { parse_config("[scheme]\ndt =\n"); });
}

TEST_CASE("validation errors name the field")
{
    CHECK(error_of(ErrorCode::ValidationError, [] { parse_config("[mesh]\nlevel = 9\n"); }).find("mesh.level") !=
          std::string::npos);
    CHECK(error_of(ErrorCode::ValidationError, [] { parse_config("[surface]\nkind = cube\n"); })
              .find("surface.kind") != std::string::npos);
    CHECK(error_of(ErrorCode::ValidationError, [] { parse_config("[scheme]\ndt = -1\n"); }).find("scheme") !=
          std::string::npos);
    CHECK(error_of(ErrorCode::ValidationError, [] {
              parse_config("[potential]\nkind = logarithmic\n[initial]\nphi = constant\nmean = 1\n");
          }).find("initial.mean") != std::string::npos);
    error_of(ErrorCode::ValidationError, [] { parse_config("[surface]\nmajor = 0.3\nminor = 0.4\n"); });
    error_of(ErrorCode::ValidationError, [] { parse_config("[output]\nsnapshot_stride = -2\n"); });
    error_of(ErrorCode::IoError, [] { load_config(scratch("does_not_exist.ini").string()); });
}

TEST_CASE("emitted config parses back to the same run")
{
    RunConfig c = parse_config("seed = 7\n[surface]\nkind = area_preserving_ellipsoid\namplitude = 0.15\n"
                               "[scheme]\ndt = 0.0033333333333333335\npressure_pair = p1p1_stabilized\n"
                               "[initial]\nvelocity = rotation\nomega = 0.7\n");
    const std::string text = emit_config(c);
    const RunConfig back = parse_config(text);
    CHECK(back == c);
    CHECK(emit_config(back) == text);
    CHECK(back.scheme.dt == c.scheme.dt);
    CHECK(back.surface.amplitude == 0.15);
    RunConfig d = c;
    d.scheme.dt *= 1.0 + 1e-15;
    CHECK_FALSE(d == c);

    const fs::path path = scratch("roundtrip.ini");
    std::ofstream(path) << text;
    CHECK(load_config(path.string()) == c);
}

TEST_CASE("config builds surfaces and meshes")
{
    const RunConfig c = parse_config("[surface]\nkind = static_ellipsoid\na = 1\nb = 1.2\nc = 0.8\n[mesh]\nlevel = 2\n");
    const EvolvingSurface s = make_surface(c);
    const SurfaceMesh m = make_mesh(c, s);
    CHECK(m.vertices.size() == 162);
    for (const Vec3& v : m.vertices) CHECK(std::abs(s.level(v, 0.0)) <= 1e-10);

    const fs::path off = scratch("level1.off");
    write_off(mesh_for_surface(EvolvingSurface::static_sphere(), 1), off.string());
    RunConfig o = parse_config("[mesh]\noff_path = " + off.string() + "\n");
    CHECK(make_mesh(o, make_surface(o)).vertices.size() == 42);
}

TEST_CASE("diagnostics csv")
{
    const fs::path path = scratch("diag.csv");
    std::vector<DiagnosticsRow> rows(3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].t = 0.1 * i;
        rows[i].area = 4.0;
        rows[i].mass = -1.0 / 3.0;
        rows[i].E_ch = 1.0 / (i + 1.0);
        rows[i].E_kin = 1e-300;
        rows[i].div_residual = 3e-17 * i;
        rows[i].extra["ignored"] = 5.0;
    }
    {
        CsvWriter w(path.string());
        for (const auto& r : rows) w.append(r);
        CHECK(w.rows() == 3);
    }
    const std::string text = slurp(path);
    std::istringstream lines(text);
    std::string l0, l1;
    std::getline(lines, l0);
    std::getline(lines, l1);
    CHECK(l0 == kCsvSchema);
    CHECK(l1 == csv_header());
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
    CHECK(csv_header().find("E_ch") != std::string::npos);

    const std::vector<DiagnosticsRow> back = read_csv(path.string());
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(diagnostics_values(back[i]) == diagnostics_values(rows[i]));

    const fs::path bad = scratch("bad.csv");
    std::ofstream(bad) << "t,E\n1,2\n";
    error_of(ErrorCode::FormatError, [&] { read_csv(bad.string()); });
    std::ofstream(bad) << kCsvSchema << "\n" << csv_header() << "\n1,2\n";
    error_of(ErrorCode::FormatError, [&] { read_csv(bad.string()); });
}

TEST_CASE("VTK snapshot round trip")
{
    const SolverState st = small_state();
    const Snapshot a = snapshot_of(st);
    CHECK(a.points.size() == 42);
    CHECK(a.triangles.size() == 80);
    CHECK(a.phi.size() == a.points.size());
    CHECK(a.u.size() == a.points.size());
    CHECK(a.p.size() == a.points.size());

    const fs::path p1 = scratch("snap.vtk"), p2 = scratch("snap2.vtk");
    write_snapshot(st, p1.string());
    const Snapshot b = read_snapshot(p1.string());
    CHECK(b.t == a.t);
    CHECK(b.step == a.step);
    CHECK(b.points == a.points);
    CHECK(b.triangles == a.triangles);
    CHECK(b.phi == a.phi);
    CHECK(b.mu == a.mu);
    CHECK(b.p == a.p);
    CHECK(b.u == a.u);
    write_snapshot(b, p2.string());
    CHECK(slurp(p1) == slurp(p2));
    CHECK(slurp(p1).rfind("# vtk DataFile Version", 0) == 0);

    const fs::path bad = scratch("bad.vtk");
    std::ofstream(bad) << "# vtk DataFile Version 3.0\nnot really\nBINARY\n";
    error_of(ErrorCode::FormatError, [&] { read_snapshot(bad.string()); });
    const std::string full = slurp(p1);
    std::ofstream(bad) << full.substr(0, full.size() / 2);
    error_of(ErrorCode::FormatError, [&] { read_snapshot(bad.string()); });
    error_of(ErrorCode::IoError, [&] { read_snapshot(scratch("missing.vtk").string()); });
}
