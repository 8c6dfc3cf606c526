// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/quadrature.hpp"

#include "surfnsch/error.hpp"

#include <cmath>
#include <numbers>

namespace surfnsch {

TriangleRule dunavant4()
{
    TriangleRule r;
    r.degree = 4;
    const double a1 = 0.44594849091596488632, w1 = 0.22338158967801146570;
    const double a2 = 0.09157621350977074346, w2 = 0.10995174365532186764;
    const double b1 = 1.0 - 2.0 * a1, b2 = 1.0 - 2.0 * a2;
    r.bary = {{b1, a1, a1}, {a1, b1, a1}, {a1, a1, b1}, {b2, a2, a2}, {a2, b2, a2}, {a2, a2, b2}};
    r.weights = {w1, w1, w1, w2, w2, w2};
    return r;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights)
{
    if (n < 1) fail(ErrorCode::InvalidArgument, "gauss_legendre needs n >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
}

TriangleRule collapsed_gauss(int degree)
{
    const int n = std::max(1, (degree + 3) / 2);
    std::vector<double> gx, gw;
    gauss_legendre(n, gx, gw);
    TriangleRule r;
    r.degree = degree;
    for (int i = 0; i < n; ++i) {
        const double u = 0.5 * (gx[i] + 1.0);
        for (int j = 0; j < n; ++j) {
            const double v = 0.5 * (gx[j] + 1.0);
            const double x = u, y = v * (1.0 - u);
            // 0.25 maps both intervals, 2 normalizes the reference area to 1.
            const double w = 0.25 * gw[i] * gw[j] * (1.0 - u) * 2.0;
            r.bary.push_back({1.0 - x - y, x, y});
            r.weights.push_back(w);
        }
    }
    return r;
}

TriangleRule triangle_rule(int degree)
{
    return degree <= 4 ? dunavant4() : collapsed_gauss(degree);
}

namespace {

double panel(const std::function<double(double)>& f, double a, double b)
{
    static const auto rule = [] {
        std::pair<std::vector<double>, std::vector<double>> p;
        gauss_legendre(10, p.first, p.second);
        return p;
    }();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.first.size(); ++i) s += rule.second[i] * f(c + h * rule.first[i]);
    return s * h;
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole, double tol,
             int depth)
{
    const double m = 0.5 * (a + b);
    const double left = panel(f, a, m), right = panel(f, m, b);
    if (depth > 30 || std::abs(left + right - whole) <= tol) return left + right;
    return adapt(f, a, m, left, tol, depth + 1) + adapt(f, m, b, right, tol, depth + 1);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol)
{
    const double whole = panel(f, a, b);
    const double scale = std::max(1.0, std::abs(whole));
    return adapt(f, a, b, whole, tol * scale, 0);
}

} // namespace surfnsch
