// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <vector>

namespace surfnsch {

/// Triangle rule in barycentric coordinates. Weights sum to 1, so a physical
/// integral is area * sum_q w_q f(x_q).
struct TriangleRule {
    std::vector<std::array<double, 3>> bary;
    std::vector<double> weights;
    int degree = 0;

    std::size_t size() const { return weights.size(); }
};

/// Symmetric 6-point rule, exact to degree 4.
TriangleRule dunavant4();

/// Collapsed Gauss-Legendre product rule exact to the requested degree.
TriangleRule collapsed_gauss(int degree);

/// Dunavant for degree <= 4, collapsed Gauss above.
TriangleRule triangle_rule(int degree);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Adaptive bisection with 10-point Gauss-Legendre panels.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-14);

} // namespace surfnsch
