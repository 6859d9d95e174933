// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>

#include "assembly.hpp"

namespace maxtev
{

struct DiscretizationOptions
{
  int pinned_vertex = -1;  // < 0: smallest boundary vertex
  int quadrature_degree = kDefaultQuadratureDegree;
};

//
// Everything needed for one transmission eigenproblem on one mesh.
//
struct Discretization
{
  std::shared_ptr<const TetMesh> mesh;
  std::shared_ptr<const CoupledFieldSpace> H;
  std::shared_ptr<const MultiplierSpace> Q;
  int order = 0;
  SpMat a, b, c, G;
  Pencil pencil;
};

Discretization Discretize(std::shared_ptr<const TetMesh> mesh, int order, const CoefficientField &A,
                          const CoefficientField &N, const DiscretizationOptions &opts = {});

Discretization Discretize(Domain domain, int n, int order, const CoefficientField &A, const CoefficientField &N,
                          const DiscretizationOptions &opts = {});

}  // namespace maxtev
