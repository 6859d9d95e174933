// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "discretization.hpp"

namespace maxtev
{

struct PropertyRow
{
  std::string label;          // e.g. "cube n=2 order=0 A=2I"
  int n = 0;
  int order = 0;
  std::vector<std::pair<std::string, double>> observed;
  bool passed = false;
};

struct PropertyReport
{
  std::string property;
  std::string threshold;
  std::vector<PropertyRow> rows;
  bool passed = false;

  void WriteText(std::ostream &os) const;
  void WriteCsv(std::ostream &os) const;
};

enum class FormKind
{
  A,  // curl-curl form, curl seminorm
  C,  // mass form, L2 norm
};

// Coupled-coefficient map realizing T: Plus (w, 2w - v), Minus (w - 2v, -v).
SpMat BuildTMatrix(const CoupledFieldSpace &H, TVariant variant);

struct TCoercivityObservation
{
  TVariant variant = TVariant::Plus;
  double trial_min = 0.0;  // min over random x of |a(x, Tx)| / |x|^2
  double exact_min = 0.0;  // min generalized eigenvalue of Re a(x, Tx) vs |x|^2 (dense), NaN if skipped
};

//
// X is A for FormKind::A and N for FormKind::C; its sampled bounds select the
// T variant (NoCaseMatch if they straddle 1). The dense bound is computed when
// the space dimension is at most dense_limit.
//
TCoercivityObservation ObserveTCoercivity(const CoupledFieldSpace &H, FormKind form, const CoefficientField &X,
                                          int trials = 200, std::uint64_t seed = 7, int dense_limit = 2500);

// Sweep over n; pass if every ratio is positive and none falls below 50% of
// the coarsest-mesh value.
PropertyReport CheckTCoercivity(FormKind form, Domain domain, int order, const CoefficientField &X,
                                const std::vector<int> &ns, int trials = 200);

struct PoincareObservation
{
  double constrained_min = 0.0;    // min curl energy / mass over ker B^H
  double unconstrained_min = 0.0;  // same over the whole space (gradients make it ~0)
};

// Dense; DimensionTooLarge beyond 3000 field unknowns.
PoincareObservation ObservePoincare(const CoupledFieldSpace &H, const SpMat &B);

PropertyReport CheckDiscretePoincare(Domain domain, int order, const CoefficientField &N, const std::vector<int> &ns);

struct SourceObservation
{
  double residual = 0.0;            // |K z - rhs| / |rhs|, sparse solve
  double sparse_dense_diff = 0.0;   // relative difference of sparse and dense solutions
  double multiplier_vs_projection = 0.0;  // |y - y_proj| / |y_proj| for a general source
  double projected_multiplier = 0.0;      // |y| / |x| for a source b-orthogonal to gradients
  double linearity = 0.0;           // |z(2f) - 2 z(f)| / |2 z(f)|
  double zero_source_norm = 0.0;    // |z(0)|
};

//
// Discrete source problem [A B; B^H 0][x; y] = [C f; 0] with random f.
// SingularSystem if the sparse factorization fails.
//
SourceObservation ObserveSourceConsistency(const Discretization &d, std::uint64_t seed = 11);

PropertyReport CheckSourceConsistency(Domain domain, int order, const CoefficientField &A, const CoefficientField &N,
                                      const std::vector<int> &ns);

// Discrete identities B = C G, A G = 0 and Hermiticity of K and M.
struct IdentityObservation
{
  double bcg = 0.0;   // |B - C G|_max / |B|_max
  double ag = 0.0;    // |A G|_max / |A|_max
  double k_herm = 0.0;
  double m_herm = 0.0;
};
IdentityObservation ObserveIdentities(const Discretization &d);

PropertyReport CheckIdentities(Domain domain, int order, const CoefficientField &A, const CoefficientField &N,
                               const std::vector<int> &ns);

}  // namespace maxtev
