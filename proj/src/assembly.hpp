// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

#include "coefficients.hpp"
#include "dof_spaces.hpp"

namespace maxtev
{

inline constexpr int kDefaultQuadratureDegree = 8;

// Single-field matrices over the edge space of H (no coupling). Entry (i, j)
// pairs trial function j with the conjugated test function i:
//   curl-curl: int (X curl phi_j) . curl phi_i      mass: int (X phi_j) . phi_i
// A null coefficient means the identity.
SpMat AssembleFieldCurlCurl(const CoupledFieldSpace &H, const CoefficientField *coef,
                            int qdeg = kDefaultQuadratureDegree);
SpMat AssembleFieldMass(const CoupledFieldSpace &H, const CoefficientField *coef,
                        int qdeg = kDefaultQuadratureDegree);
// int (X grad psi_j) . phi_i, rows: edge DOFs of H, columns: Lagrange DOFs of Q.
SpMat AssembleFieldGradMass(const MultiplierSpace &Q, const CoupledFieldSpace &H, const CoefficientField *coef,
                            int qdeg = kDefaultQuadratureDegree);

// a((w,v),(w',v')) = (A curl w, curl w') - (curl v, curl v')
SpMat AssembleA(const CoupledFieldSpace &H, const CoefficientField &A, int qdeg = kDefaultQuadratureDegree);
// c((w,v),(w',v')) = (N w, w') - (v, v')
SpMat AssembleC(const CoupledFieldSpace &H, const CoefficientField &N, int qdeg = kDefaultQuadratureDegree);
// b((p,q),(w',v')) = (N grad p, w') - (grad q, v'); n_field x n_mult.
SpMat AssembleB(const MultiplierSpace &Q, const CoupledFieldSpace &H, const CoefficientField &N,
                int qdeg = kDefaultQuadratureDegree);

//
// Mixed eigenproblem K x = lambda M x with
//   K = [A B; B^H 0],  M = [C 0; 0 0].
//
struct Pencil
{
  SpMat K;
  SpMat M;
  int n_field = 0;
  int n_mult = 0;

  int dim() const { return n_field + n_mult; }
};

Pencil BuildPencil(const SpMat &A, const SpMat &B, const SpMat &C);

// Max-abs entry of X - X^H relative to max-abs entry of X.
double HermitianDefect(const SpMat &X);
double MaxAbs(const SpMat &X);

// MatrixMarket coordinate complex general.
void WriteMatrixMarket(const SpMat &X, std::ostream &os);

}  // namespace maxtev
