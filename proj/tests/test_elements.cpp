// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "elements.hpp"
#include "errors.hpp"
#include "quadrature.hpp"

using namespace maxtev;

namespace
{

double Factorial(int k)
{
  double f = 1.0;
  for (int i = 2; i <= k; ++i)
  {
    f *= i;
  }
  return f;
}

std::vector<std::array<int, 4>> SomeRanks()
{
  std::array<int, 4> r = {0, 1, 2, 3};
  std::vector<std::array<int, 4>> out;
  do
  {
    out.push_back(r);
  } while (std::next_permutation(r.begin(), r.end()));
  return out;
}

Vec3 RandomInterior(std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true)
  {
    const Vec3 p(u(rng), u(rng), u(rng));
    if (p.sum() < 0.95 && p.minCoeff() > 0.02)
    {
      return p;
    }
  }
}

}  // namespace

TEST_CASE("tet quadrature integrates monomials exactly up to its degree")
{
  for (int deg = 1; deg <= kMaxQuadratureDegree; ++deg)
  {
    const QuadratureRule &rule = TetQuadrature(deg);
    double wsum = 0.0;
    for (double w : rule.weights)
    {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(wsum == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    for (int a = 0; a <= deg; ++a)
    {
      for (int b = 0; a + b <= deg; ++b)
      {
        for (int c = 0; a + b + c <= deg; ++c)
        {
          double q = 0.0;
          for (std::size_t i = 0; i < rule.size(); ++i)
          {
            const Vec3 &p = rule.points[i];
            q += rule.weights[i] * std::pow(p.x(), a) * std::pow(p.y(), b) * std::pow(p.z(), c);
          }
          const double exact = Factorial(a) * Factorial(b) * Factorial(c) / Factorial(a + b + c + 3);
          CHECK(q == doctest::Approx(exact).epsilon(1e-13));
        }
      }
    }
  }
}

TEST_CASE("unsupported quadrature degree")
{
  bool thrown = false;
  try
  {
    TetQuadrature(kMaxQuadratureDegree + 1);
  }
  catch (const Error &e)
  {
    thrown = e.code() == ErrorCode::UnsupportedDegree;
  }
  CHECK(thrown);
}

TEST_CASE("triangle rule weights sum to one half")
{
  for (int deg = 1; deg <= 8; ++deg)
  {
    const TriangleRule r = TriangleQuadrature(deg);
    double s = 0.0;
    for (double w : r.weights)
    {
      s += w;
    }
    CHECK(s == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("lowest order basis is the Whitney form")
{
  // Edge 0 joins reference vertices 0 and 1: lambda_0 grad lambda_1 - lambda_1 grad lambda_0.
  const EdgeElement &el = EdgeElementFor(0, {0, 1, 2, 3});
  REQUIRE(el.size() == 6);
  const Vec3 p(0.2, 0.3, 0.1);
  std::vector<Vec3> values(6), curls(6);
  el.Evaluate(p, values, curls);
  const double l0 = 1.0 - p.sum(), l1 = p.x();
  const Vec3 g0(-1, -1, -1), g1(1, 0, 0);
  CHECK((values[0] - (l0 * g1 - l1 * g0)).norm() < 1e-14);
  CHECK((curls[0] - 2.0 * g0.cross(g1)).norm() < 1e-14);
}

TEST_CASE("degrees of freedom are dual to the basis")
{
  for (int order : {0, 1})
  {
    for (const auto &ranks : SomeRanks())
    {
      const EdgeElement &el = EdgeElementFor(order, ranks);
      REQUIRE(el.size() == EdgeElement::SizeForOrder(order));
      for (int j = 0; j < el.size(); ++j)
      {
        const Eigen::VectorXd d = el.Interpolate([&](const Vec3 &x) {
          std::vector<Vec3> v(el.size()), c(el.size());
          el.Evaluate(x, v, c);
          return v[j];
        });
        Eigen::VectorXd e = Eigen::VectorXd::Zero(el.size());
        e(j) = 1.0;
        CHECK((d - e).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("curl matches finite differences")
{
  std::mt19937_64 rng(3);
  for (int order : {0, 1})
  {
    const EdgeElement &el = EdgeElementFor(order, {2, 0, 3, 1});
    const int n = el.size();
    const Vec3 p = RandomInterior(rng);
    std::vector<Vec3> v(n), c(n), vp(n), vm(n), cc(n);
    el.Evaluate(p, v, c);
    const double h = 1e-6;
    std::array<std::vector<Vec3>, 3> d;
    for (int k = 0; k < 3; ++k)
    {
      Vec3 e = Vec3::Zero();
      e(k) = h;
      el.Evaluate(p + e, vp, cc);
      el.Evaluate(p - e, vm, cc);
      d[k].resize(n);
      for (int i = 0; i < n; ++i)
      {
        d[k][i] = (vp[i] - vm[i]) / (2 * h);
      }
    }
    for (int i = 0; i < n; ++i)
    {
      const Vec3 fd(d[1][i].z() - d[2][i].y(), d[2][i].x() - d[0][i].z(), d[0][i].y() - d[1][i].x());
      CHECK((fd - c[i]).norm() < 1e-6 * std::max(1.0, c[i].norm()));
    }
  }
}

TEST_CASE("order one reproduces linear fields")
{
  std::mt19937_64 rng(5);
  const Eigen::Matrix3d M = Eigen::Matrix3d::Random();
  const Vec3 b = Vec3::Random();
  auto field = [&](const Vec3 &x) -> Vec3 { return M * x + b; };
  const EdgeElement &el = EdgeElementFor(1, {3, 1, 0, 2});
  const Eigen::VectorXd coef = el.Interpolate(field);
  for (int trial = 0; trial < 5; ++trial)
  {
    const Vec3 p = RandomInterior(rng);
    std::vector<Vec3> v(el.size()), c(el.size());
    el.Evaluate(p, v, c);
    Vec3 u = Vec3::Zero();
    for (int i = 0; i < el.size(); ++i)
    {
      u += coef(i) * v[i];
    }
    CHECK((u - field(p)).norm() < 1e-12);
  }
}

TEST_CASE("Lagrange elements form a partition of unity")
{
  std::mt19937_64 rng(9);
  for (int degree : {1, 2})
  {
    const int n = LagrangeElement::Size(degree);
    CHECK(n == (degree == 1 ? 4 : 10));
    const Vec3 p = RandomInterior(rng);
    std::vector<double> v(n);
    std::vector<Vec3> g(n);
    LagrangeElement::Evaluate(degree, p, v, g);
    double s = 0.0;
    Vec3 gs = Vec3::Zero();
    for (int i = 0; i < n; ++i)
    {
      s += v[i];
      gs += g[i];
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gs.norm() < 1e-13);
  }
}

TEST_CASE("covariant map of a reference gradient is the physical gradient")
{
  const TetGeometry geo =
      TetGeometry::FromVertices(Vec3(0.1, 0, 0), Vec3(1, 0.2, 0), Vec3(0.3, 1, 0.1), Vec3(0, 0.2, 0.9));
  // Physical linear function f(x) = a . x has reference gradient J^T a.
  const Vec3 a(0.3, -1.2, 2.0);
  CHECK((geo.PushGradient(geo.jac.transpose() * a) - a).norm() < 1e-14);
  CHECK((geo.MapInverse(geo.Map(Vec3(0.1, 0.2, 0.3))) - Vec3(0.1, 0.2, 0.3)).norm() < 1e-14);
  CHECK(geo.det > 0.0);
}
