// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include "discretization.hpp"

#include "errors.hpp"

namespace maxtev
{

Discretization Discretize(std::shared_ptr<const TetMesh> mesh, int order, const CoefficientField &A,
                          const CoefficientField &N, const DiscretizationOptions &opts)
{
  if (order != 0 && order != 1)
  {
    throw Error(ErrorCode::UnsupportedOrder, "edge element order must be 0 or 1, got " + std::to_string(order));
  }
  Discretization d;
  d.mesh = std::move(mesh);
  d.order = order;
  d.H = std::make_shared<const CoupledFieldSpace>(d.mesh, order);
  d.Q = std::make_shared<const MultiplierSpace>(d.mesh, order + 1, opts.pinned_vertex);
  d.a = AssembleA(*d.H, A, opts.quadrature_degree);
  d.c = AssembleC(*d.H, N, opts.quadrature_degree);
  d.b = AssembleB(*d.Q, *d.H, N, opts.quadrature_degree);
  d.G = BuildGradientMatrix(*d.Q, *d.H);
  d.pencil = BuildPencil(d.a, d.b, d.c);
  return d;
}

Discretization Discretize(Domain domain, int n, int order, const CoefficientField &A, const CoefficientField &N,
                          const DiscretizationOptions &opts)
{
  return Discretize(std::make_shared<const TetMesh>(BuildMesh(domain, n)), order, A, N, opts);
}

}  // namespace maxtev
