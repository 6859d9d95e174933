// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "discretization.hpp"
#include "eigensolver.hpp"

namespace maxtev
{

enum class ReferenceMode
{
  None,         // no rates
  Extrapolate,  // h^4 extrapolation of this table's own values
  Finest,       // the finest row of this table
  Given,        // ExperimentConfig::reference_values
};

struct ExperimentConfig
{
  std::string name;
  Domain domain = Domain::Cube;
  int order = 0;
  std::string A = "two_I";
  std::string N = "sixteen_I";
  std::vector<int> ns;
  std::pair<double, double> k_window{1.0, 1.6};
  std::optional<cplx> shift;  // default: (window midpoint)^2
  int count = 4;
  int nev = 8;
  double tol = 1e-10;
  ReferenceMode reference = ReferenceMode::None;
  std::vector<cplx> reference_values;
  std::string companion;  // preset whose extrapolated/finest values serve as reference
};

// Built-in experiments: table{1..4}-case{1..3}.
std::vector<std::string> PresetExperimentNames();
ExperimentConfig PresetExperiment(const std::string &name);  // UnknownPreset

struct WindowSolve
{
  std::vector<EigenPair> pairs;  // lowest `count` with Re k in the window
  EigenResult raw;
  int nev_used = 0;
  bool covered = false;  // every eigenvalue in the window was within reach of the solve
};

//
// Shift-invert solve that grows nev until all eigenvalues in the window are
// resolved, then keeps the lowest `count`. NoEigenvaluesInWindow if none.
//
WindowSolve SolveLowestInWindow(const Pencil &pencil, std::pair<double, double> window, int count,
                                SolveOptions opts);

struct ConvergenceRow
{
  int n = 0;
  double h = 0.0;
  long dofs = 0;       // coupled field space
  long mult_dofs = 0;  // multiplier space
  std::vector<cplx> k;
  std::vector<bool> conjugate_pair;
  double max_residual = 0.0;
  double max_constraint = 0.0;
  double max_multiplier = 0.0;
};

struct ConvergenceTable
{
  ExperimentConfig config;
  std::vector<ConvergenceRow> rows;  // h strictly decreasing
  std::vector<std::optional<cplx>> reference;          // per eigenvalue index
  std::vector<std::vector<std::optional<double>>> rates;  // [row][j]; nullopt -> "--"

  void WriteCsv(std::ostream &os) const;
  void WriteText(std::ostream &os) const;
};

using ProgressFn = std::function<void(const std::string &)>;

// One solve per n. Solver errors are rethrown with the failing n in the message.
ConvergenceTable RunConvergence(const ExperimentConfig &config, const ProgressFn &progress = {});

// Fill reference and rates according to config.reference (or explicit values).
void ApplyReference(ConvergenceTable &table, const std::vector<std::optional<cplx>> &reference);
std::vector<std::optional<cplx>> TableReference(const ConvergenceTable &table, ReferenceMode mode);

// k_end - mean(C_i) h_end^4 with k_i - k_{i+1} = C_i (h_i^4 - h_{i+1}^4).
// InsufficientData for fewer than 3 values or non-decreasing h.
cplx ExtrapolateReference(const std::vector<cplx> &values, const std::vector<double> &h);

// [log|k - k_i| - log|k - k_{i-1}|] / [log h_i - log h_{i-1}]; DegenerateError
// when either difference vanishes.
double ConvergenceRate(cplx reference, cplx previous, cplx current, double h_previous, double h_current);

// One entry per value; the first and any degenerate entry are nullopt.
std::vector<std::optional<double>> ComputeRates(const std::vector<cplx> &values, const std::vector<double> &h,
                                                cplx reference);

enum class FieldComponent
{
  V,          // v
  WMinusV,    // w - v
  W,          // w
};

// Real part of the chosen field at each tet barycenter, scaled so the largest
// component magnitude is 1 (unless the field vanishes). SpaceMismatch if the
// vector does not belong to H (field block length differs).
std::vector<Vec3> CellFieldValues(const CoupledFieldSpace &H, const CVec &x, FieldComponent which);

// VTK legacy ASCII unstructured grid with one vector cell field per entry.
void WriteVtk(std::ostream &os, const TetMesh &mesh,
              const std::vector<std::pair<std::string, std::vector<Vec3>>> &cell_vectors);

// Number of cells declared by a VTK legacy file written by WriteVtk.
long ReadVtkCellCount(std::istream &is);

// Max over boundary faces of the tangential part of w - v at the face
// centroid, relative to the max of |w - v| over tet barycenters.
double BoundaryTangentialRatio(const CoupledFieldSpace &H, const CVec &x);

}  // namespace maxtev
