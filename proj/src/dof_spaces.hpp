// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "mesh.hpp"

namespace maxtev
{

using cplx = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cplx>;
using CVec = Eigen::VectorXcd;

// Degrees of freedom of one scalar (Lagrange) or vector (edge) field.
struct SingleFieldDofs
{
  int size = 0;      // global DOF count
  int per_tet = 0;   // local DOF count
  std::vector<int> tet_dofs;            // ntets * per_tet, local -> global
  std::vector<std::uint8_t> on_boundary;

  std::span<const int> TetDofs(std::size_t t) const
  {
    return {tet_dofs.data() + t * per_tet, static_cast<std::size_t>(per_tet)};
  }
  int NumBoundary() const;
};

// Edge numbering: order 0 -> edge e; order 1 -> 2e, 2e+1 on edges then
// 2E + 2f, 2E + 2f + 1 on faces.
SingleFieldDofs BuildEdgeDofs(const TetMesh &mesh, int order);
// Lagrange numbering: vertex v, then (degree 2) V + edge e.
SingleFieldDofs BuildLagrangeDofs(const TetMesh &mesh, int degree);

//
// Discrete space of field pairs (w, v) whose difference has zero tangential
// trace: boundary DOFs of w and v are one shared unknown. Index layout:
//   [interior w | interior v | shared boundary]
//
class CoupledFieldSpace
{
public:
  CoupledFieldSpace(std::shared_ptr<const TetMesh> mesh, int order);

  const TetMesh &mesh() const { return *mesh_; }
  std::shared_ptr<const TetMesh> mesh_ptr() const { return mesh_; }
  int order() const { return order_; }
  const SingleFieldDofs &field() const { return field_; }
  int dim() const { return 2 * num_interior_ + num_boundary_; }
  int num_interior() const { return num_interior_; }
  int num_boundary() const { return num_boundary_; }

  // Coupled index of single-field DOF d for the w / v component.
  int WIndex(int d) const { return w_index_[d]; }
  int VIndex(int d) const { return v_index_[d]; }

  // dim x field().size; column d has a 1 in row WIndex(d) (resp. VIndex(d)).
  SpMat WEmbedding() const;
  SpMat VEmbedding() const;

  // Single-field coefficient vectors of a coupled vector.
  CVec ExtractW(const CVec &x) const;
  CVec ExtractV(const CVec &x) const;

private:
  std::shared_ptr<const TetMesh> mesh_;
  int order_;
  SingleFieldDofs field_;
  int num_interior_ = 0;
  int num_boundary_ = 0;
  std::vector<int> w_index_, v_index_;
};

//
// Multiplier pairs (p, q) of degree order+1 with p - q vanishing on the
// boundary. One shared boundary vertex DOF is pinned to zero to remove the
// constant pair. Index layout: [interior p | interior q | shared boundary].
//
class MultiplierSpace
{
public:
  // pinned_vertex < 0 selects the boundary vertex with the smallest index.
  MultiplierSpace(std::shared_ptr<const TetMesh> mesh, int degree, int pinned_vertex = -1);

  const TetMesh &mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  const SingleFieldDofs &field() const { return field_; }
  int dim() const { return 2 * num_interior_ + num_boundary_ - 1; }
  int num_interior() const { return num_interior_; }
  int num_boundary() const { return num_boundary_; }
  int pinned_dof() const { return pinned_; }

  // Multiplier index for Lagrange DOF d as p / q; -1 for the pinned DOF.
  int PIndex(int d) const { return p_index_[d]; }
  int QIndex(int d) const { return q_index_[d]; }

  SpMat PEmbedding() const;
  SpMat QEmbedding() const;

private:
  std::shared_ptr<const TetMesh> mesh_;
  int degree_;
  SingleFieldDofs field_;
  int num_interior_ = 0;
  int num_boundary_ = 0;
  int pinned_ = -1;
  std::vector<int> p_index_, q_index_;
};

// Single-field matrix whose column l holds the edge-element coefficients of
// the gradient of Lagrange basis function l (exact: grad P_{k+1} lies in ND_k).
SpMat BuildSingleGradientMatrix(const TetMesh &mesh, int order);

// Coupled gradient matrix: y -> coefficients of (grad p, grad q) in H.
SpMat BuildGradientMatrix(const MultiplierSpace &Q, const CoupledFieldSpace &H);

}  // namespace maxtev
