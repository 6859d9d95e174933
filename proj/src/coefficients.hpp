// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mesh.hpp"

namespace maxtev
{

using cplx = std::complex<double>;
using Mat3c = Eigen::Matrix3cd;

enum class CoefficientKind
{
  ConstantScalar,
  ConstantMatrix,
  ScalarFunction,
  MatrixFunction,
};

//
// Material tensor x -> 3x3 complex matrix (A or N).
//
class CoefficientField
{
public:
  using Evaluator = std::function<Mat3c(const Vec3 &)>;

  CoefficientField(CoefficientKind kind, std::string label, Evaluator eval)
      : kind_(kind), label_(std::move(label)), eval_(std::move(eval))
  {
  }

  Mat3c operator()(const Vec3 &x) const { return eval_(x); }
  CoefficientKind kind() const { return kind_; }
  const std::string &label() const { return label_; }
  bool IsConstant() const
  {
    return kind_ == CoefficientKind::ConstantScalar || kind_ == CoefficientKind::ConstantMatrix;
  }

  static CoefficientField Scalar(double value, std::string label = {});
  static CoefficientField Matrix(const Mat3c &value, std::string label = {});

private:
  CoefficientKind kind_;
  std::string label_;
  Evaluator eval_;
};

// two_I, sixteen_I, F1, F2, F3, F4 (F1, F2 act as scalar multiples of I).
CoefficientField MakePreset(const std::string &name);
std::vector<std::string> PresetNames();

// Accepts a preset name, "<number>I" (e.g. "0.5I"), or nine comma/space
// separated reals (row-major) which must form a Hermitian matrix.
CoefficientField ParseCoefficient(const std::string &spec);

// Hermitian to a relative 1e-14 tolerance.
bool IsHermitian(const Mat3c &m, double rel_tol = 1e-14);

// Extreme eigenvalues of the Hermitian part (M + M^H)/2, which bound the
// quadratic form xi^H M xi.
std::pair<double, double> FormBounds(const Mat3c &m);

// Quasi-random (Halton) points inside the domain.
std::vector<Vec3> SampleDomain(Domain domain, int count);

// Sampled extreme form bounds of one coefficient over the domain.
std::pair<double, double> SampledBounds(const CoefficientField &X, Domain domain, int samples = 1000);

struct CoefficientBounds
{
  double a_min = 0.0, a_max = 0.0, n_min = 0.0, n_max = 0.0;
  int bound_case = 0;  // 1..4
};

//
// Sampled form bounds of A and N and the case they satisfy:
//   1) A_* > 1, N_* > 1   2) A_* > 1, N^* < 1   3) A^* < 1, N^* < 1   4) A^* < 1, N_* > 1
// NoCaseMatch if no case holds (for instance A_* < 1 < A^*).
//
CoefficientBounds ClassifyBounds(const CoefficientField &A, const CoefficientField &N, Domain domain,
                                 int samples = 1000, const std::vector<Vec3> &extra_points = {});

// T-operator variant implied by one coefficient's bounds:
//   Plus:  (w, v) -> (w, 2w - v)    when the lower bound exceeds 1
//   Minus: (w, v) -> (w - 2v, -v)   when the upper bound is below 1
enum class TVariant
{
  Plus,
  Minus,
};
TVariant SelectTVariant(double lower, double upper);

}  // namespace maxtev
