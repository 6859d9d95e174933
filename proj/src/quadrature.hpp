// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <Eigen/Core>

namespace maxtev
{

// Gauss-Jacobi rule on [0,1] for the weight (1-t)^alpha; exact for
// polynomials of degree 2*npoints-1 against that weight.
struct LineRule
{
  std::vector<double> points;
  std::vector<double> weights;
};
LineRule GaussJacobi01(int npoints, int alpha);
inline LineRule GaussLegendre01(int npoints) { return GaussJacobi01(npoints, 0); }

// Rule on the reference triangle {u,v >= 0, u+v <= 1}; weights sum to 1/2.
struct TriangleRule
{
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;
};
TriangleRule TriangleQuadrature(int degree);

//
// Rule on the reference tetrahedron with vertices 0, e1, e2, e3. Built from
// collapsed (Duffy) Gauss-Jacobi products, so all points are interior and all
// weights positive. Weights sum to 1/6.
//
struct QuadratureRule
{
  int degree = 0;
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  Eigen::Vector4d Barycentric(std::size_t q) const
  {
    const auto &p = points[q];
    return {1.0 - p.x() - p.y() - p.z(), p.x(), p.y(), p.z()};
  }
};

inline constexpr int kMaxQuadratureDegree = 10;

// Cached; 1 <= degree <= kMaxQuadratureDegree, else UnsupportedDegree.
const QuadratureRule &TetQuadrature(int degree);

}  // namespace maxtev
