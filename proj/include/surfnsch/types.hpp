// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <vector>

namespace surfnsch {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Tri = std::array<int, 3>;

inline Mat3 outer(const Vec3& a, const Vec3& b)
{
    return a * b.transpose();
}

inline Mat3 tangent_projector(const Vec3& nu)
{
    return Mat3::Identity() - nu * nu.transpose();
}

} // namespace surfnsch
