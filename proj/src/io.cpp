// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/io.hpp"

#include "surfnsch/error.hpp"

#include <cstdio>
#include <sstream>

namespace surfnsch {

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string csv_header()
{
    std::string s;
    for (const auto& c : diagnostics_columns()) s += (s.empty() ? "" : ",") + c;
    return s;
}

std::string csv_line(const DiagnosticsRow& row)
{
    std::string s;
    bool first = true;
    for (double v : diagnostics_values(row)) {
        if (!first) s += ',';
        s += num(v);
        first = false;
    }
    return s;
}

CsvWriter::CsvWriter(const std::string& path)
    : out_(path)
{
    if (!out_) fail(ErrorCode::IoError, "cannot write '" + path + "'");
    out_ << kCsvSchema << '\n' << csv_header() << '\n';
}

void CsvWriter::append(const DiagnosticsRow& row)
{
    out_ << csv_line(row) << '\n';
    out_.flush();
    ++rows_;
}

std::vector<DiagnosticsRow> read_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot read '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != kCsvSchema) fail(ErrorCode::FormatError, path + ": missing schema tag");
    if (!std::getline(in, line) || line != csv_header()) fail(ErrorCode::FormatError, path + ": unexpected header");
    std::vector<DiagnosticsRow> rows;
    const std::size_t ncol = diagnostics_columns().size();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> v;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                v.push_back(std::stod(cell));
            } catch (const std::exception&) {
                fail(ErrorCode::FormatError, path + ": bad number '" + cell + "'");
            }
        }
        if (v.size() != ncol) fail(ErrorCode::FormatError, path + ": wrong column count");
        DiagnosticsRow r;
        r.t = v[0];
        r.area = v[1];
        r.mass = v[2];
        r.E_ch = v[3];
        r.E_kin = v[4];
        r.grad_mu_norm = v[5];
        r.strain_norm = v[6];
        r.div_residual = v[7];
        r.max_abs_phi = v[8];
        r.p_mean = v[9];
        rows.push_back(r);
    }
    return rows;
}

Snapshot snapshot_of(const SolverState& s)
{
    Snapshot out;
    out.t = s.t;
    out.step = s.step_index;
    out.points = s.mesh.vertices;
    out.triangles = s.mesh.triangles;
    const std::size_t n = s.mesh.num_vertices();
    for (std::size_t i = 0; i < n; ++i) {
        out.phi.push_back(s.phi.coeffs[i]);
        out.mu.push_back(s.mu.coeffs[i]);
        out.p.push_back(s.p.coeffs[i]);
        out.u.push_back(s.u.coeffs.segment<3>(3 * i));
    }
    return out;
}

void write_snapshot(const SolverState& state, const std::string& path)
{
    write_snapshot(snapshot_of(state), path);
}

void write_snapshot(const Snapshot& s, const std::string& path)
{
    std::ofstream o(path);
    if (!o) fail(ErrorCode::IoError, "cannot write '" + path + "'");
    const std::size_t n = s.points.size();
    o << "# vtk DataFile Version 3.0\n";
    o << "surfnsch t=" << num(s.t) << " step=" << s.step << "\n";
    o << "ASCII\nDATASET POLYDATA\n";
    o << "POINTS " << n << " double\n";
    for (const Vec3& p : s.points) o << num(p.x()) << ' ' << num(p.y()) << ' ' << num(p.z()) << '\n';
    o << "POLYGONS " << s.triangles.size() << ' ' << 4 * s.triangles.size() << '\n';
    for (const Tri& t : s.triangles) o << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    o << "POINT_DATA " << n << '\n';
    auto scalars = [&](const char* name, const std::vector<double>& v) {
        o << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (double x : v) o << num(x) << '\n';
    };
    scalars("phi", s.phi);
    scalars("mu", s.mu);
    scalars("p", s.p);
    o << "VECTORS u double\n";
    for (const Vec3& u : s.u) o << num(u.x()) << ' ' << num(u.y()) << ' ' << num(u.z()) << '\n';
    if (!o) fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

Snapshot read_snapshot(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot read '" + path + "'");
    auto bad = [&](const std::string& why) -> void { fail(ErrorCode::FormatError, path + ": " + why); };
    std::string line;
    std::getline(in, line);
    if (line != "# vtk DataFile Version 3.0") bad("not a legacy VTK file");
    Snapshot s;
    std::getline(in, line);
    if (std::sscanf(line.c_str(), "surfnsch t=%lf step=%d", &s.t, &s.step) != 2) bad("missing time header");
    std::getline(in, line);
    if (line != "ASCII") bad("only ASCII files are supported");
    std::getline(in, line);
    if (line != "DATASET POLYDATA") bad("expected POLYDATA");

    std::string word, type;
    std::size_t n = 0;
    if (!(in >> word >> n >> type) || word != "POINTS") bad("expected POINTS");
    s.points.resize(n);
    for (auto& p : s.points)
        if (!(in >> p.x() >> p.y() >> p.z())) bad("truncated POINTS");
    std::size_t nt = 0, total = 0;
    if (!(in >> word >> nt >> total) || word != "POLYGONS" || total != 4 * nt) bad("expected triangle POLYGONS");
    s.triangles.resize(nt);
    for (auto& t : s.triangles) {
        int k = 0;
        if (!(in >> k >> t[0] >> t[1] >> t[2]) || k != 3) bad("non-triangle polygon");
        for (int v : t)
            if (v < 0 || static_cast<std::size_t>(v) >= n) bad("polygon index out of range");
    }
    std::size_t nd = 0;
    if (!(in >> word >> nd) || word != "POINT_DATA" || nd != n) bad("expected POINT_DATA");
    while (in >> word) {
        std::string name;
        if (word == "SCALARS") {
            int comps = 0;
            if (!(in >> name >> type >> comps) || comps != 1) bad("bad SCALARS header");
            std::string lt, tab;
            if (!(in >> lt >> tab) || lt != "LOOKUP_TABLE") bad("missing LOOKUP_TABLE");
            std::vector<double> v(n);
            for (double& x : v)
                if (!(in >> x)) bad("truncated SCALARS " + name);
            if (name == "phi")
                s.phi = std::move(v);
            else if (name == "mu")
                s.mu = std::move(v);
            else if (name == "p")
                s.p = std::move(v);
        } else if (word == "VECTORS") {
            if (!(in >> name >> type)) bad("bad VECTORS header");
            std::vector<Vec3> v(n);
            for (auto& x : v)
                if (!(in >> x.x() >> x.y() >> x.z())) bad("truncated VECTORS " + name);
            if (name == "u") s.u = std::move(v);
        } else {
            bad("unexpected section '" + word + "'");
        }
    }
    if (s.phi.size() != n || s.mu.size() != n || s.p.size() != n || s.u.size() != n) bad("missing point data");
    return s;
}

} // namespace surfnsch
