// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/config.hpp"

#include "surfnsch/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace surfnsch {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void parse_error(int line, const std::string& msg)
{
    fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line, const std::string& key)
{
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        parse_error(line, "'" + key + "' expects a number, got '" + v + "'");
    }
}

long long to_int(const std::string& v, int line, const std::string& key)
{
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        parse_error(line, "'" + key + "' expects an integer, got '" + v + "'");
    }
}

std::uint64_t to_u64(const std::string& v, int line, const std::string& key)
{
    try {
        std::size_t pos = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
        const unsigned long long i = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        parse_error(line, "'" + key + "' expects a non-negative integer, got '" + v + "'");
    }
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> s = [] {
        std::map<std::string, Setter> m;
        auto d = [&m](const std::string& key, std::function<double&(RunConfig&)> f) {
            m[key] = [f, key](RunConfig& c, const std::string& v, int line) { f(c) = to_double(v, line, key); };
        };
        auto i = [&m](const std::string& key, std::function<int&(RunConfig&)> f) {
            m[key] = [f, key](RunConfig& c, const std::string& v, int line) {
                f(c) = static_cast<int>(to_int(v, line, key));
            };
        };
        auto str = [&m](const std::string& key, std::function<std::string&(RunConfig&)> f) {
            m[key] = [f](RunConfig& c, const std::string& v, int) { f(c) = v; };
        };
        m["seed"] = [](RunConfig& c, const std::string& v, int line) { c.seed = to_u64(v, line, "seed"); };

        str("surface.kind", [](RunConfig& c) -> std::string& { return c.surface.kind; });
        d("surface.radius", [](RunConfig& c) -> double& { return c.surface.radius; });
        d("surface.a", [](RunConfig& c) -> double& { return c.surface.a; });
        d("surface.b", [](RunConfig& c) -> double& { return c.surface.b; });
        d("surface.c", [](RunConfig& c) -> double& { return c.surface.c; });
        d("surface.major", [](RunConfig& c) -> double& { return c.surface.major; });
        d("surface.minor", [](RunConfig& c) -> double& { return c.surface.minor; });
        d("surface.period", [](RunConfig& c) -> double& { return c.surface.period; });
        d("surface.a0", [](RunConfig& c) -> double& { return c.surface.a0; });
        d("surface.c0", [](RunConfig& c) -> double& { return c.surface.c0; });
        d("surface.amplitude", [](RunConfig& c) -> double& { return c.surface.amplitude; });
        d("surface.rate", [](RunConfig& c) -> double& { return c.surface.rate; });

        i("mesh.level", [](RunConfig& c) -> int& { return c.mesh.level; });
        str("mesh.off_path", [](RunConfig& c) -> std::string& { return c.mesh.off_path; });

        d("scheme.dt", [](RunConfig& c) -> double& { return c.scheme.dt; });
        d("scheme.t_end", [](RunConfig& c) -> double& { return c.scheme.t_end; });
        m["scheme.splitting"] = [](RunConfig& c, const std::string& v, int line) {
            try {
                c.scheme.splitting = parse_splitting(v);
            } catch (const Error& e) {
                parse_error(line, e.what());
            }
        };
        i("scheme.picard_iters", [](RunConfig& c) -> int& { return c.scheme.picard_iters; });
        m["scheme.pressure_pair"] = [](RunConfig& c, const std::string& v, int line) {
            try {
                c.scheme.pressure_pair = parse_pressure_pair(v);
            } catch (const Error& e) {
                parse_error(line, e.what());
            }
        };
        d("scheme.stab_param", [](RunConfig& c) -> double& { return c.scheme.stab_param; });
        d("scheme.lin_tol", [](RunConfig& c) -> double& { return c.scheme.lin_tol; });
        d("scheme.nonlin_tol", [](RunConfig& c) -> double& { return c.scheme.nonlin_tol; });
        i("scheme.substeps_mesh", [](RunConfig& c) -> int& { return c.scheme.substeps_mesh; });
        i("scheme.newton_max_iters", [](RunConfig& c) -> int& { return c.scheme.newton_max_iters; });
        i("scheme.quad_degree", [](RunConfig& c) -> int& { return c.scheme.quad_degree; });
        m["scheme.enforce_phase_bound"] = [](RunConfig& c, const std::string& v, int line) {
            if (v == "true")
                c.scheme.enforce_phase_bound = true;
            else if (v == "false")
                c.scheme.enforce_phase_bound = false;
            else
                parse_error(line, "scheme.enforce_phase_bound expects true or false, got '" + v + "'");
        };

        m["potential.kind"] = [](RunConfig& c, const std::string& v, int line) {
            try {
                c.scheme.potential.variant = parse_potential_kind(v);
            } catch (const Error& e) {
                parse_error(line, e.what());
            }
        };
        d("potential.epsilon", [](RunConfig& c) -> double& { return c.scheme.potential.epsilon; });
        d("potential.theta", [](RunConfig& c) -> double& { return c.scheme.potential.theta; });
        d("potential.delta", [](RunConfig& c) -> double& { return c.scheme.potential.delta; });

        d("viscosity.eta1", [](RunConfig& c) -> double& { return c.scheme.viscosity.eta1; });
        d("viscosity.eta2", [](RunConfig& c) -> double& { return c.scheme.viscosity.eta2; });

        m["force.kind"] = [](RunConfig& c, const std::string& v, int line) {
            if (v == "none")
                c.scheme.force.kind = ForceSpec::Kind::None;
            else if (v == "rotation")
                c.scheme.force.kind = ForceSpec::Kind::Rotation;
            else
                parse_error(line, "force.kind: unknown value '" + v + "'");
        };
        d("force.amplitude", [](RunConfig& c) -> double& { return c.scheme.force.amplitude; });

        m["initial.phi"] = [](RunConfig& c, const std::string& v, int line) {
            if (v == "constant")
                c.phi0.kind = InitialPhase::Kind::Constant;
            else if (v == "harmonic")
                c.phi0.kind = InitialPhase::Kind::Harmonic;
            else if (v == "random")
                c.phi0.kind = InitialPhase::Kind::Random;
            else
                parse_error(line, "initial.phi: unknown value '" + v + "'");
        };
        d("initial.mean", [](RunConfig& c) -> double& { return c.phi0.mean; });
        d("initial.amplitude", [](RunConfig& c) -> double& { return c.phi0.amplitude; });
        i("initial.degree", [](RunConfig& c) -> int& { return c.phi0.degree; });
        m["initial.velocity"] = [](RunConfig& c, const std::string& v, int line) {
            if (v == "zero")
                c.u0.kind = InitialVelocity::Kind::Zero;
            else if (v == "rotation")
                c.u0.kind = InitialVelocity::Kind::Rotation;
            else
                parse_error(line, "initial.velocity: unknown value '" + v + "'");
        };
        d("initial.omega", [](RunConfig& c) -> double& { return c.u0.omega; });

        str("output.directory", [](RunConfig& c) -> std::string& { return c.output.directory; });
        i("output.snapshot_stride", [](RunConfig& c) -> int& { return c.output.snapshot_stride; });
        str("output.csv", [](RunConfig& c) -> std::string& { return c.output.csv; });
        return m;
    }();
    return s;
}

const char* phase_kind(InitialPhase::Kind k)
{
    switch (k) {
    case InitialPhase::Kind::Constant: return "constant";
    case InitialPhase::Kind::Harmonic: return "harmonic";
    case InitialPhase::Kind::Random: return "random";
    }
    return "?";
}

} // namespace

RunConfig parse_config(const std::string& text)
{
    static const char* sections[] = {"surface", "mesh", "scheme", "potential", "viscosity",
                                     "force",   "initial", "output"};
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find_first_of("#;");
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') parse_error(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            bool known = false;
            for (const char* k : sections) known = known || section == k;
            if (!known) parse_error(line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) parse_error(line, "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        const std::string full = section.empty() ? key : section + "." + key;
        const auto it = setters().find(full);
        if (it == setters().end()) parse_error(line, "unknown key '" + full + "'");
        if (value.empty()) parse_error(line, "missing value for '" + full + "'");
        it->second(cfg, value, line);
    }
    cfg.phi0.seed = cfg.seed;
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f) fail(ErrorCode::IoError, "cannot read config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

void validate(const RunConfig& c)
{
    auto bad = [](const std::string& field, const std::string& why) {
        fail(ErrorCode::ValidationError, field + ": " + why);
    };
    const auto& s = c.surface;
    static const char* kinds[] = {"static_sphere", "static_ellipsoid", "static_torus", "area_preserving_ellipsoid",
                                  "dilating_sphere"};
    bool known = false;
    for (const char* k : kinds) known = known || s.kind == k;
    if (!known) bad("surface.kind", "unknown surface '" + s.kind + "'");
    if (!(s.radius > 0.0)) bad("surface.radius", "must be positive");
    if (!(s.a > 0.0 && s.b > 0.0 && s.c > 0.0)) bad("surface.a/b/c", "axes must be positive");
    if (!(s.major > s.minor && s.minor > 0.0)) bad("surface.major/minor", "need major > minor > 0");
    if (!(s.period > 0.0)) bad("surface.period", "must be positive");
    if (!(s.a0 > 0.0 && s.c0 > 0.0)) bad("surface.a0/c0", "must be positive");
    if (!(std::abs(s.amplitude) < 1.0)) bad("surface.amplitude", "must lie in (-1, 1)");
    if (c.mesh.off_path.empty() && (c.mesh.level < 0 || c.mesh.level > 7)) bad("mesh.level", "must lie in [0, 7]");
    if (c.output.snapshot_stride < 0) bad("output.snapshot_stride", "must be >= 0");
    if (c.phi0.kind == InitialPhase::Kind::Harmonic && c.phi0.degree != 1 && c.phi0.degree != 2)
        bad("initial.degree", "harmonic degree must be 1 or 2");
    try {
        c.scheme.validate();
    } catch (const Error& e) {
        bad("scheme", e.what());
    }
    if (c.scheme.potential.is_log()) {
        const double m = c.phi0.mean;
        if (!(std::abs(m) < 1.0))
            bad("initial.mean", "logarithmic potential needs admissible initial data (|mean phi0| < 1), got " + num(m));
        if (c.phi0.kind == InitialPhase::Kind::Constant && !(std::abs(m) <= 1.0 - 1e-6))
            bad("initial.mean", "logarithmic potential needs admissible initial data (|phi0| <= 1 - 1e-6)");
    }
}

std::string emit_config(const RunConfig& c)
{
    std::ostringstream o;
    o << "seed = " << c.seed << "\n";
    o << "\n[surface]\n";
    o << "kind = " << c.surface.kind << "\n";
    o << "radius = " << num(c.surface.radius) << "\n";
    o << "a = " << num(c.surface.a) << "\nb = " << num(c.surface.b) << "\nc = " << num(c.surface.c) << "\n";
    o << "major = " << num(c.surface.major) << "\nminor = " << num(c.surface.minor) << "\n";
    o << "period = " << num(c.surface.period) << "\n";
    o << "a0 = " << num(c.surface.a0) << "\nc0 = " << num(c.surface.c0) << "\n";
    o << "amplitude = " << num(c.surface.amplitude) << "\nrate = " << num(c.surface.rate) << "\n";
    o << "\n[mesh]\nlevel = " << c.mesh.level << "\n";
    if (!c.mesh.off_path.empty()) o << "off_path = " << c.mesh.off_path << "\n";
    const SchemeConfig& s = c.scheme;
    o << "\n[scheme]\n";
    o << "dt = " << num(s.dt) << "\nt_end = " << num(s.t_end) << "\n";
    o << "splitting = " << to_string(s.splitting) << "\npicard_iters = " << s.picard_iters << "\n";
    o << "pressure_pair = " << to_string(s.pressure_pair) << "\nstab_param = " << num(s.stab_param) << "\n";
    o << "lin_tol = " << num(s.lin_tol) << "\nnonlin_tol = " << num(s.nonlin_tol) << "\n";
    o << "substeps_mesh = " << s.substeps_mesh << "\nnewton_max_iters = " << s.newton_max_iters << "\n";
    o << "quad_degree = " << s.quad_degree << "\n";
    o << "enforce_phase_bound = " << (s.enforce_phase_bound ? "true" : "false") << "\n";
    o << "\n[potential]\nkind = " << to_string(s.potential.variant) << "\n";
    o << "epsilon = " << num(s.potential.epsilon) << "\ntheta = " << num(s.potential.theta)
      << "\ndelta = " << num(s.potential.delta) << "\n";
    o << "\n[viscosity]\neta1 = " << num(s.viscosity.eta1) << "\neta2 = " << num(s.viscosity.eta2) << "\n";
    o << "\n[force]\nkind = " << (s.force.kind == ForceSpec::Kind::None ? "none" : "rotation")
      << "\namplitude = " << num(s.force.amplitude) << "\n";
    o << "\n[initial]\nphi = " << phase_kind(c.phi0.kind) << "\nmean = " << num(c.phi0.mean)
      << "\namplitude = " << num(c.phi0.amplitude) << "\ndegree = " << c.phi0.degree << "\n";
    o << "velocity = " << (c.u0.kind == InitialVelocity::Kind::Zero ? "zero" : "rotation")
      << "\nomega = " << num(c.u0.omega) << "\n";
    o << "\n[output]\ndirectory = " << c.output.directory << "\nsnapshot_stride = " << c.output.snapshot_stride
      << "\ncsv = " << c.output.csv << "\n";
    return o.str();
}

bool RunConfig::operator==(const RunConfig& other) const
{
    return emit_config(*this) == emit_config(other);
}

EvolvingSurface make_surface(const RunConfig& cfg)
{
    const SurfaceConfig& s = cfg.surface;
    if (s.kind == "static_sphere") return EvolvingSurface::static_sphere(s.radius);
    if (s.kind == "static_ellipsoid") return EvolvingSurface::static_ellipsoid(s.a, s.b, s.c);
    if (s.kind == "static_torus") return EvolvingSurface::static_torus(s.major, s.minor);
    if (s.kind == "area_preserving_ellipsoid")
        return EvolvingSurface::area_preserving_ellipsoid(s.period, s.a0, s.c0, s.amplitude);
    if (s.kind == "dilating_sphere") return EvolvingSurface::dilating_sphere(s.radius, s.rate);
    fail(ErrorCode::ValidationError, "surface.kind: unknown surface '" + s.kind + "'");
}

SurfaceMesh make_mesh(const RunConfig& cfg, const EvolvingSurface& surface)
{
    if (cfg.mesh.off_path.empty()) return mesh_for_surface(surface, cfg.mesh.level, 0.0);
    SurfaceMesh m = read_off(cfg.mesh.off_path);
    const SurfaceFrame f = surface.at(0.0);
    for (Vec3& v : m.vertices) v = f.closest_point(v);
    m.t = 0.0;
    m.ref_vertices = m.vertices;
    check_mesh(m, surface);
    return m;
}

} // namespace surfnsch
