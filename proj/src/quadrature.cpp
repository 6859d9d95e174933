// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include "quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "errors.hpp"

namespace maxtev
{

LineRule GaussJacobi01(int npoints, int alpha)
{
  // Golub-Welsch on the Jacobi matrix of P^(alpha,0) over [-1,1].
  const double a = alpha, b = 0.0;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(npoints, npoints);
  for (int k = 0; k < npoints; ++k)
  {
    const double s = 2.0 * k + a + b;
    jac(k, k) = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < npoints)
    {
      const double m = k + 1;
      const double t = 2.0 * m + a + b;
      const double off =
          std::sqrt(4.0 * m * (m + a) * (m + b) * (m + a + b) / (t * t * (t + 1.0) * (t - 1.0)));
      jac(k, k + 1) = off;
      jac(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                     std::tgamma(a + b + 2.0);
  LineRule rule;
  rule.points.resize(npoints);
  rule.weights.resize(npoints);
  for (int k = 0; k < npoints; ++k)
  {
    const double x = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    rule.points[k] = 0.5 * (1.0 + x);
    rule.weights[k] = mu0 * v0 * v0 / std::pow(2.0, a + 1.0);
  }
  return rule;
}

TriangleRule TriangleQuadrature(int degree)
{
  const int m = (degree + 2) / 2;
  const LineRule ga = GaussJacobi01(m, 0);
  const LineRule gb = GaussJacobi01(m, 1);
  TriangleRule rule;
  for (int j = 0; j < m; ++j)
  {
    for (int i = 0; i < m; ++i)
    {
      const double v = gb.points[j];
      const double u = ga.points[i] * (1.0 - v);
      rule.points.emplace_back(u, v);
      rule.weights.push_back(ga.weights[i] * gb.weights[j]);
    }
  }
  return rule;
}

namespace
{

QuadratureRule BuildTetRule(int degree)
{
  // x = a (1-b)(1-c), y = b (1-c), z = c; Jacobian (1-b)(1-c)^2.
  const int m = (degree + 2) / 2;
  const LineRule ga = GaussJacobi01(m, 0);
  const LineRule gb = GaussJacobi01(m, 1);
  const LineRule gc = GaussJacobi01(m, 2);
  QuadratureRule rule;
  rule.degree = degree;
  for (int k = 0; k < m; ++k)
  {
    for (int j = 0; j < m; ++j)
    {
      for (int i = 0; i < m; ++i)
      {
        const double c = gc.points[k];
        const double b = gb.points[j];
        const double a = ga.points[i];
        rule.points.emplace_back(a * (1.0 - b) * (1.0 - c), b * (1.0 - c), c);
        rule.weights.push_back(ga.weights[i] * gb.weights[j] * gc.weights[k]);
      }
    }
  }
  return rule;
}

}  // namespace

const QuadratureRule &TetQuadrature(int degree)
{
  if (degree < 1 || degree > kMaxQuadratureDegree)
  {
    throw Error(ErrorCode::UnsupportedDegree,
                "tet quadrature degree " + std::to_string(degree) + " outside [1, 10]");
  }
  static std::array<QuadratureRule, kMaxQuadratureDegree + 1> rules;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int d = 1; d <= kMaxQuadratureDegree; ++d)
    {
      rules[d] = BuildTetRule(d);
    }
  });
  return rules[degree];
}

}  // namespace maxtev
