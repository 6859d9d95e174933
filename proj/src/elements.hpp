// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <span>

#include <Eigen/Core>

#include "mesh.hpp"

namespace maxtev
{

//
// First-family Nedelec element of order 0 (6 Whitney functions) or order 1
// (20 functions: 2 per edge, 2 per face) on the reference tetrahedron.
//
// Degrees of freedom:
//   edge (p -> q):  int_0^1 u(x(s)) . (x_q - x_p) L_m(s) ds,  L_0 = 1, L_1 = 2s - 1
//   face (s0,s1,s2): int_T u(x(a,b)) . (x_sj - x_s0) da db,   j = 1, 2
// where edge and face vertices are ordered by *global* vertex index, supplied
// as the rank of each local vertex. Both functionals are invariant under the
// covariant map, so the element dual to them is globally conforming without
// any sign or permutation fix-ups.
//
// Local DOF layout: order 0 -> DOF e on local edge e; order 1 -> DOFs 2e, 2e+1
// on local edge e (moments L_0, L_1), then 12 + 2f + j on local face f.
//
class EdgeElement
{
public:
  EdgeElement(int order, const std::array<int, 4> &ranks);

  int order() const { return order_; }
  int size() const { return size_; }
  const std::array<int, 4> &ranks() const { return ranks_; }

  // Reference values and curls of all basis functions at xhat.
  void Evaluate(const Vec3 &xhat, std::span<Vec3> values, std::span<Vec3> curls) const;

  // DOF functionals applied to a field given in reference coordinates.
  Eigen::VectorXd Interpolate(const std::function<Vec3(const Vec3 &)> &field) const;

  static int SizeForOrder(int order);

private:
  int order_;
  int size_;
  std::array<int, 4> ranks_;
  Eigen::MatrixXd coef_;  // basis_i = sum_j coef_(i, j) raw_j
};

// Cached element for the given order and local vertex ranks.
const EdgeElement &EdgeElementFor(int order, const std::array<int, 4> &ranks);

// Rank of each local vertex's global index among the four.
std::array<int, 4> VertexRanks(const std::array<int, 4> &tet);

//
// Nodal Lagrange element of degree 1 (vertices) or 2 (vertices, then edge
// midpoints in local edge order).
//
struct LagrangeElement
{
  static int Size(int degree);
  static void Evaluate(int degree, const Vec3 &xhat, std::span<double> values, std::span<Vec3> grads);
};

// Reference-element evaluation entry points (natural local orientation).
struct EdgeBasisValues
{
  std::vector<Vec3> values;
  std::vector<Vec3> curls;
};
EdgeBasisValues EvalEdgeBasis(int order, const Vec3 &xhat);

struct LagrangeBasisValues
{
  std::vector<double> values;
  std::vector<Vec3> grads;
};
LagrangeBasisValues EvalLagrangeBasis(int degree, const Vec3 &xhat);

//
// Affine map x = J xhat + x0 of a tet. Edge fields transform covariantly:
// u = J^{-T} uhat, curl u = J curl uhat / det J; scalar gradients as J^{-T}.
//
struct TetGeometry
{
  Eigen::Matrix3d jac;
  Eigen::Matrix3d jac_inv_t;
  Vec3 origin;
  double det = 0.0;

  static TetGeometry FromVertices(const Vec3 &x0, const Vec3 &x1, const Vec3 &x2, const Vec3 &x3);
  static TetGeometry FromMesh(const TetMesh &mesh, std::size_t t);

  Vec3 Map(const Vec3 &xhat) const { return jac * xhat + origin; }
  Vec3 MapInverse(const Vec3 &x) const { return jac_inv_t.transpose() * (x - origin); }
  Vec3 PushValue(const Vec3 &vhat) const { return jac_inv_t * vhat; }
  Vec3 PushCurl(const Vec3 &chat) const { return jac * chat / det; }
  Vec3 PushGradient(const Vec3 &ghat) const { return jac_inv_t * ghat; }
};

// Push reference edge values/curls to a physical tet (in place).
void PushForward(const TetGeometry &geo, std::span<Vec3> values, std::span<Vec3> curls);

}  // namespace maxtev
