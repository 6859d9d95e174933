// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include "elements.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <Eigen/LU>

#include "errors.hpp"
#include "quadrature.hpp"

namespace maxtev
{

namespace
{

const std::array<Vec3, 4> kRefVertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
const std::array<Vec3, 4> kGradLambda = {Vec3(-1, -1, -1), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};

std::array<double, 4> Lambda(const Vec3 &x)
{
  return {1.0 - x.x() - x.y() - x.z(), x.x(), x.y(), x.z()};
}

void CheckOrder(int order)
{
  if (order != 0 && order != 1)
  {
    throw Error(ErrorCode::UnsupportedOrder, "edge element order " + std::to_string(order) + " not in {0, 1}");
  }
}

// Spanning set of the first-family space: Whitney forms w_ab for order 0;
// lambda_a w_ab, lambda_b w_ab per edge and lambda_c w_ab, lambda_b w_ac per
// face for order 1.
void EvaluateRaw(int order, const Vec3 &x, std::span<Vec3> vals, std::span<Vec3> curls)
{
  const auto lam = Lambda(x);
  auto whitney = [&](int a, int b, Vec3 &w, Vec3 &cw) {
    w = lam[a] * kGradLambda[b] - lam[b] * kGradLambda[a];
    cw = 2.0 * kGradLambda[a].cross(kGradLambda[b]);
  };
  // curl(lambda_c w) = grad lambda_c x w + lambda_c curl w
  auto scaled = [&](int c, const Vec3 &w, const Vec3 &cw, Vec3 &v, Vec3 &cv) {
    v = lam[c] * w;
    cv = kGradLambda[c].cross(w) + lam[c] * cw;
  };
  if (order == 0)
  {
    for (int e = 0; e < 6; ++e)
    {
      whitney(kLocalEdges[e][0], kLocalEdges[e][1], vals[e], curls[e]);
    }
    return;
  }
  for (int e = 0; e < 6; ++e)
  {
    const int a = kLocalEdges[e][0], b = kLocalEdges[e][1];
    Vec3 w, cw;
    whitney(a, b, w, cw);
    scaled(a, w, cw, vals[2 * e], curls[2 * e]);
    scaled(b, w, cw, vals[2 * e + 1], curls[2 * e + 1]);
  }
  for (int f = 0; f < 4; ++f)
  {
    const int a = kLocalFaces[f][0], b = kLocalFaces[f][1], c = kLocalFaces[f][2];
    Vec3 wab, cab, wac, cac;
    whitney(a, b, wab, cab);
    whitney(a, c, wac, cac);
    scaled(c, wab, cab, vals[12 + 2 * f], curls[12 + 2 * f]);
    scaled(b, wac, cac, vals[12 + 2 * f + 1], curls[12 + 2 * f + 1]);
  }
}

// Applies the DOF functionals (global orientation given by ranks) to a field.
Eigen::VectorXd ApplyFunctionals(int order, const std::array<int, 4> &ranks,
                                 const std::function<Vec3(const Vec3 &)> &field)
{
  static const LineRule line = GaussLegendre01(4);
  static const TriangleRule tri = TriangleQuadrature(4);
  const int n = EdgeElement::SizeForOrder(order);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  const int per_edge = order == 0 ? 1 : 2;
  for (int e = 0; e < 6; ++e)
  {
    int p = kLocalEdges[e][0], q = kLocalEdges[e][1];
    if (ranks[p] > ranks[q])
    {
      std::swap(p, q);
    }
    const Vec3 t = kRefVertices[q] - kRefVertices[p];
    for (std::size_t k = 0; k < line.points.size(); ++k)
    {
      const double s = line.points[k];
      const double ft = field(kRefVertices[p] + s * t).dot(t) * line.weights[k];
      out(per_edge * e) += ft;
      if (order == 1)
      {
        out(per_edge * e + 1) += ft * (2.0 * s - 1.0);
      }
    }
  }
  if (order == 1)
  {
    for (int f = 0; f < 4; ++f)
    {
      std::array<int, 3> s = kLocalFaces[f];
      std::sort(s.begin(), s.end(), [&](int i, int j) { return ranks[i] < ranks[j]; });
      const Vec3 t1 = kRefVertices[s[1]] - kRefVertices[s[0]];
      const Vec3 t2 = kRefVertices[s[2]] - kRefVertices[s[0]];
      for (std::size_t k = 0; k < tri.points.size(); ++k)
      {
        const Vec3 u = field(kRefVertices[s[0]] + tri.points[k].x() * t1 + tri.points[k].y() * t2);
        out(12 + 2 * f) += u.dot(t1) * tri.weights[k];
        out(12 + 2 * f + 1) += u.dot(t2) * tri.weights[k];
      }
    }
  }
  return out;
}

int PermutationIndex(const std::array<int, 4> &ranks)
{
  // Lehmer code.
  int idx = 0;
  for (int i = 0; i < 4; ++i)
  {
    int smaller = 0;
    for (int j = i + 1; j < 4; ++j)
    {
      smaller += ranks[j] < ranks[i];
    }
    idx = idx * (4 - i) + smaller;
  }
  return idx;
}

}  // namespace

int EdgeElement::SizeForOrder(int order)
{
  CheckOrder(order);
  return order == 0 ? 6 : 20;
}

EdgeElement::EdgeElement(int order, const std::array<int, 4> &ranks)
    : order_(order), size_(SizeForOrder(order)), ranks_(ranks)
{
  Eigen::MatrixXd dofs(size_, size_);  // dofs(i, j) = l_i(raw_j)
  std::vector<Vec3> vals(size_), curls(size_);
  for (int j = 0; j < size_; ++j)
  {
    dofs.col(j) = ApplyFunctionals(order_, ranks_, [&](const Vec3 &x) {
      EvaluateRaw(order_, x, vals, curls);
      return vals[j];
    });
  }
  coef_ = dofs.inverse().transpose();
}

void EdgeElement::Evaluate(const Vec3 &xhat, std::span<Vec3> values, std::span<Vec3> curls) const
{
  std::array<Vec3, 20> rv, rc;
  EvaluateRaw(order_, xhat, std::span<Vec3>(rv.data(), size_), std::span<Vec3>(rc.data(), size_));
  for (int i = 0; i < size_; ++i)
  {
    Vec3 v = Vec3::Zero(), c = Vec3::Zero();
    for (int j = 0; j < size_; ++j)
    {
      v += coef_(i, j) * rv[j];
      c += coef_(i, j) * rc[j];
    }
    values[i] = v;
    curls[i] = c;
  }
}

Eigen::VectorXd EdgeElement::Interpolate(const std::function<Vec3(const Vec3 &)> &field) const
{
  return ApplyFunctionals(order_, ranks_, field);
}

const EdgeElement &EdgeElementFor(int order, const std::array<int, 4> &ranks)
{
  CheckOrder(order);
  static std::vector<EdgeElement> cache[2];
  static std::once_flag once;
  std::call_once(once, [] {
    for (int o = 0; o < 2; ++o)
    {
      std::array<int, 4> perm = {0, 1, 2, 3};
      std::vector<std::pair<int, std::array<int, 4>>> all;
      do
      {
        all.emplace_back(PermutationIndex(perm), perm);
      } while (std::next_permutation(perm.begin(), perm.end()));
      std::sort(all.begin(), all.end());
      for (const auto &[idx, p] : all)
      {
        cache[o].emplace_back(o, p);
      }
    }
  });
  return cache[order][PermutationIndex(ranks)];
}

std::array<int, 4> VertexRanks(const std::array<int, 4> &tet)
{
  std::array<int, 4> ranks{};
  for (int i = 0; i < 4; ++i)
  {
    int r = 0;
    for (int j = 0; j < 4; ++j)
    {
      r += tet[j] < tet[i];
    }
    ranks[i] = r;
  }
  return ranks;
}

int LagrangeElement::Size(int degree)
{
  if (degree != 1 && degree != 2)
  {
    throw Error(ErrorCode::UnsupportedOrder, "Lagrange degree " + std::to_string(degree) + " not in {1, 2}");
  }
  return degree == 1 ? 4 : 10;
}

void LagrangeElement::Evaluate(int degree, const Vec3 &xhat, std::span<double> values, std::span<Vec3> grads)
{
  Size(degree);
  const auto lam = Lambda(xhat);
  if (degree == 1)
  {
    for (int i = 0; i < 4; ++i)
    {
      values[i] = lam[i];
      grads[i] = kGradLambda[i];
    }
    return;
  }
  for (int i = 0; i < 4; ++i)
  {
    values[i] = lam[i] * (2.0 * lam[i] - 1.0);
    grads[i] = (4.0 * lam[i] - 1.0) * kGradLambda[i];
  }
  for (int e = 0; e < 6; ++e)
  {
    const int a = kLocalEdges[e][0], b = kLocalEdges[e][1];
    values[4 + e] = 4.0 * lam[a] * lam[b];
    grads[4 + e] = 4.0 * (lam[a] * kGradLambda[b] + lam[b] * kGradLambda[a]);
  }
}

EdgeBasisValues EvalEdgeBasis(int order, const Vec3 &xhat)
{
  const EdgeElement &el = EdgeElementFor(order, {0, 1, 2, 3});
  EdgeBasisValues out;
  out.values.resize(el.size());
  out.curls.resize(el.size());
  el.Evaluate(xhat, out.values, out.curls);
  return out;
}

LagrangeBasisValues EvalLagrangeBasis(int degree, const Vec3 &xhat)
{
  LagrangeBasisValues out;
  out.values.resize(LagrangeElement::Size(degree));
  out.grads.resize(out.values.size());
  LagrangeElement::Evaluate(degree, xhat, out.values, out.grads);
  return out;
}

TetGeometry TetGeometry::FromVertices(const Vec3 &x0, const Vec3 &x1, const Vec3 &x2, const Vec3 &x3)
{
  TetGeometry g;
  g.origin = x0;
  g.jac.col(0) = x1 - x0;
  g.jac.col(1) = x2 - x0;
  g.jac.col(2) = x3 - x0;
  g.det = g.jac.determinant();
  if (std::abs(g.det) < 1e-14)
  {
    throw Error(ErrorCode::DegenerateTet, "tet Jacobian determinant below 1e-14");
  }
  g.jac_inv_t = g.jac.inverse().transpose();
  return g;
}

TetGeometry TetGeometry::FromMesh(const TetMesh &mesh, std::size_t t)
{
  const auto &v = mesh.tets[t];
  return FromVertices(mesh.vertices[v[0]], mesh.vertices[v[1]], mesh.vertices[v[2]], mesh.vertices[v[3]]);
}

void PushForward(const TetGeometry &geo, std::span<Vec3> values, std::span<Vec3> curls)
{
  for (auto &v : values)
  {
    v = geo.PushValue(v);
  }
  for (auto &c : curls)
  {
    c = geo.PushCurl(c);
  }
}

}  // namespace maxtev
