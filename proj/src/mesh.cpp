// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/mesh.hpp"

#include "surfnsch/error.hpp"
#include "surfnsch/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>
#include <unordered_map>

namespace surfnsch {

namespace {

std::uint64_t edge_key(int a, int b)
{
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

} // namespace

MeshTopology build_topology(const SurfaceMesh& mesh)
{
    MeshTopology topo;
    std::unordered_map<std::uint64_t, int> index;
    std::vector<int> uses, forward;
    topo.tri_edges.resize(mesh.triangles.size());
    index.reserve(mesh.triangles.size() * 2);
    for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
        const Tri& t = mesh.triangles[e];
        for (int k = 0; k < 3; ++k) {
            const int a = t[k], b = t[(k + 1) % 3];
            const auto key = edge_key(a, b);
            auto it = index.find(key);
            int id;
            if (it == index.end()) {
                id = static_cast<int>(topo.edges.size());
                index.emplace(key, id);
                topo.edges.push_back({std::min(a, b), std::max(a, b)});
                uses.push_back(0);
                forward.push_back(0);
            } else {
                id = it->second;
            }
            ++uses[id];
            if (a < b) ++forward[id];
            topo.tri_edges[e][k] = id;
        }
    }
    topo.watertight = std::all_of(uses.begin(), uses.end(), [](int u) { return u == 2; });
    topo.oriented = topo.watertight;
    for (std::size_t i = 0; i < uses.size() && topo.oriented; ++i)
        if (forward[i] != 1) topo.oriented = false;
    topo.euler_characteristic = static_cast<int>(mesh.vertices.size()) - static_cast<int>(topo.edges.size()) +
                                static_cast<int>(mesh.triangles.size());
    return topo;
}

SurfaceMesh icosphere(int level)
{
    if (level < 0 || level > 7) fail(ErrorCode::LevelOutOfRange, "icosphere level must be in [0, 7]");
    const double p = (1.0 + std::sqrt(5.0)) / 2.0;
    SurfaceMesh m;
    m.vertices = {{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
                  {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
    for (auto& v : m.vertices) v.normalize();
    m.triangles = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                   {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
                   {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
    for (int l = 0; l < level; ++l) {
        std::unordered_map<std::uint64_t, int> mid;
        auto midpoint = [&](int a, int b) {
            const auto key = edge_key(a, b);
            auto it = mid.find(key);
            if (it != mid.end()) return it->second;
            const int id = static_cast<int>(m.vertices.size());
            m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
            mid.emplace(key, id);
            return id;
        };
        std::vector<Tri> next;
        next.reserve(m.triangles.size() * 4);
        for (const Tri& t : m.triangles) {
            const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        m.triangles = std::move(next);
    }
    m.ref_vertices = m.vertices;
    return m;
}

SurfaceMesh torus_mesh(double major, double minor, int n_major, int n_minor)
{
    if (n_major < 3 || n_minor < 3) fail(ErrorCode::ValidationError, "torus mesh needs at least 3x3 cells");
    SurfaceMesh m;
    const double tau = 2.0 * std::numbers::pi;
    for (int i = 0; i < n_major; ++i) {
        const double u = tau * i / n_major;
        for (int j = 0; j < n_minor; ++j) {
            const double v = tau * j / n_minor;
            const double rho = major + minor * std::cos(v);
            m.vertices.emplace_back(rho * std::cos(u), rho * std::sin(u), minor * std::sin(v));
        }
    }
    auto id = [&](int i, int j) { return ((i % n_major) * n_minor) + (j % n_minor); };
    for (int i = 0; i < n_major; ++i)
        for (int j = 0; j < n_minor; ++j) {
            m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    m.ref_vertices = m.vertices;
    return m;
}

SurfaceMesh mesh_for_surface(const EvolvingSurface& surface, int level, double t)
{
    if (surface.shape() == LevelShape::Torus) {
        if (level < 0 || level > 5) fail(ErrorCode::LevelOutOfRange, "torus level must be in [0, 5]");
        const int s = 1 << level;
        SurfaceMesh m = torus_mesh(surface.torus_major(), surface.torus_minor(), 10 * s, 5 * s);
        m.t = t;
        return m;
    }
    SurfaceMesh m = icosphere(level);
    const SurfaceFrame f = surface.at(t);
    for (auto& v : m.vertices) {
        const Vec3 scaled = v.cwiseProduct(f.axes);
        v = f.closest_point(scaled);
    }
    m.t = t;
    m.ref_vertices = m.vertices;
    return m;
}

SurfaceMesh advect(const SurfaceMesh& mesh, const EvolvingSurface& surface, double t_new, int substeps)
{
    if (substeps < 1) fail(ErrorCode::ValidationError, "advect needs substeps >= 1");
    SurfaceMesh out = mesh;
    out.t = t_new;
    if (!surface.moves_mesh() || t_new == mesh.t) return out;

    const double h = (t_new - mesh.t) / substeps;
    std::vector<SurfaceFrame> frames;
    frames.reserve(2 * substeps + 1);
    for (int s = 0; s <= 2 * substeps; ++s) frames.push_back(surface.at(mesh.t + 0.5 * h * s));

    auto velocity = [](const SurfaceFrame& f, const Vec3& x) {
        const Vec3 g = f.gradient(x);
        const double gn = g.norm();
        if (gn < 1e-8) fail(ErrorCode::DegenerateGradient, "level gradient vanishes during advection");
        return Vec3(-f.time_derivative(x) / gn * (g / gn));
    };

    parallel_for(out.vertices.size(), [&](std::size_t i) {
        Vec3 x = mesh.vertices[i];
        for (int s = 0; s < substeps; ++s) {
            const SurfaceFrame& f0 = frames[2 * s];
            const SurfaceFrame& fm = frames[2 * s + 1];
            const SurfaceFrame& f1 = frames[2 * s + 2];
            const Vec3 k1 = velocity(f0, x);
            const Vec3 k2 = velocity(fm, x + 0.5 * h * k1);
            const Vec3 k3 = velocity(fm, x + 0.5 * h * k2);
            const Vec3 k4 = velocity(f1, x + h * k3);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        try {
            out.vertices[i] = frames.back().closest_point(x);
        } catch (const Error&) {
            fail(ErrorCode::ProjectionFailed, "vertex projection failed after advection");
        }
    });
    check_mesh(out, surface);
    return out;
}

double min_angle_degrees(const SurfaceMesh& mesh)
{
    double worst = 180.0;
    for (const Tri& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            const Vec3 a = mesh.vertices[t[(k + 1) % 3]] - mesh.vertices[t[k]];
            const Vec3 b = mesh.vertices[t[(k + 2) % 3]] - mesh.vertices[t[k]];
            const double ang = std::atan2(a.cross(b).norm(), a.dot(b)) * 180.0 / std::numbers::pi;
            worst = std::min(worst, ang);
        }
    }
    return worst;
}

double max_edge_length(const SurfaceMesh& mesh)
{
    double h = 0.0;
    for (const Tri& t : mesh.triangles)
        for (int k = 0; k < 3; ++k)
            h = std::max(h, (mesh.vertices[t[k]] - mesh.vertices[t[(k + 1) % 3]]).norm());
    return h;
}

double flat_area(const SurfaceMesh& mesh)
{
    double a = 0.0;
    for (const Tri& t : mesh.triangles)
        a += 0.5 * (mesh.vertices[t[1]] - mesh.vertices[t[0]]).cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]).norm();
    return a;
}

double max_level_residual(const SurfaceMesh& mesh, const EvolvingSurface& surface)
{
    const SurfaceFrame f = surface.at(mesh.t);
    double r = 0.0;
    for (const auto& v : mesh.vertices) r = std::max(r, std::abs(f.level(v)));
    return r;
}

void check_mesh(const SurfaceMesh& mesh, const EvolvingSurface& surface)
{
    const double ang = min_angle_degrees(mesh);
    if (ang < 5.0) {
        std::ostringstream os;
        os << "minimum triangle angle " << ang << " deg < 5 deg at t=" << mesh.t;
        fail(ErrorCode::MeshQualityDegraded, os.str());
    }
    const double res = max_level_residual(mesh, surface);
    if (res > 1e-8) {
        std::ostringstream os;
        os << "vertex level residual " << res << " > 1e-8 at t=" << mesh.t;
        fail(ErrorCode::ProjectionFailed, os.str());
    }
}

SurfaceMesh read_off(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    std::size_t pos = 0;
    auto next = [&]() -> const std::string& {
        if (pos >= tokens.size()) fail(ErrorCode::FormatError, path + ": truncated OFF file");
        return tokens[pos++];
    };
    auto to_num = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            fail(ErrorCode::FormatError, path + ": bad number '" + s + "'");
        }
    };
    if (next() != "OFF") fail(ErrorCode::FormatError, path + ": missing OFF header");
    const long nv = static_cast<long>(to_num(next()));
    const long nf = static_cast<long>(to_num(next()));
    to_num(next());
    if (nv < 3 || nf < 1) fail(ErrorCode::FormatError, path + ": bad counts");
    SurfaceMesh m;
    for (long i = 0; i < nv; ++i) {
        const double x = to_num(next()), y = to_num(next()), z = to_num(next());
        m.vertices.emplace_back(x, y, z);
    }
    for (long i = 0; i < nf; ++i) {
        if (to_num(next()) != 3.0) fail(ErrorCode::FormatError, path + ": only triangles are supported");
        Tri t;
        for (int k = 0; k < 3; ++k) {
            const double v = to_num(next());
            if (v < 0 || v >= nv || v != std::floor(v)) fail(ErrorCode::FormatError, path + ": bad vertex index");
            t[k] = static_cast<int>(v);
        }
        m.triangles.push_back(t);
    }
    m.ref_vertices = m.vertices;
    return m;
}

void write_off(const SurfaceMesh& mesh, const std::string& path)
{
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path);
    out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.triangles.size() << " 0\n";
    out << std::setprecision(17);
    for (const auto& v : mesh.vertices) out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

} // namespace surfnsch
