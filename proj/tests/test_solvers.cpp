// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>

#include "discretization.hpp"
#include "doctest.h"
#include "eigensolver.hpp"
#include "errors.hpp"
#include "verification.hpp"

using namespace maxtev;

namespace
{

Discretization Cube2(int order = 0, const char *a = "two_I", const char *n = "sixteen_I", int pinned = -1)
{
  DiscretizationOptions opts;
  opts.pinned_vertex = pinned;
  return Discretize(Domain::Cube, 2, order, MakePreset(a), MakePreset(n), opts);
}

std::vector<cplx> SortedByK(std::vector<cplx> lambdas)
{
  std::sort(lambdas.begin(), lambdas.end(), [](cplx x, cplx y) {
    const cplx kx = TransmissionK(x), ky = TransmissionK(y);
    return kx.real() != ky.real() ? kx.real() < ky.real() : kx.imag() < ky.imag();
  });
  return lambdas;
}

cplx Nearest(const std::vector<cplx> &values, cplx target)
{
  cplx best = values.front();
  for (cplx v : values)
  {
    if (std::abs(v - target) < std::abs(best - target))
    {
      best = v;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("principal square root branch")
{
  CHECK(TransmissionK(cplx(4.0, 0.0)) == cplx(2.0, 0.0));
  CHECK(TransmissionK(cplx(-4.0, 0.0)).imag() == doctest::Approx(2.0));
  CHECK(TransmissionK(cplx(0.0, 2.0)).real() > 0.0);
}

TEST_CASE("kernel of the adjoint")
{
  Eigen::MatrixXcd B(4, 2);
  B << 1, 0, 1, 0, 0, 1, 0, 1;
  const Eigen::MatrixXcd Z = OrthonormalKernelOfAdjoint(B);
  REQUIRE(Z.cols() == 2);
  CHECK((Z.adjoint() * Z - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-14);
  CHECK((B.adjoint() * Z).norm() < 1e-14);
}

TEST_CASE("block Arnoldi resolves a double eigenvalue")
{
  const int n = 400;
  std::vector<Eigen::Triplet<cplx>> kt, mt;
  const double diag[] = {1.0, 2.0, 2.0, 3.0};
  for (int i = 0; i < n; ++i)
  {
    kt.emplace_back(i, i, i < 4 ? diag[i] : 4.0 + 0.05 * i);
    mt.emplace_back(i, i, 1.0);
  }
  Pencil p;
  p.n_field = n;
  p.K.resize(n, n);
  p.M.resize(n, n);
  p.K.setFromTriplets(kt.begin(), kt.end());
  p.M.setFromTriplets(mt.begin(), mt.end());
  SolveOptions opts;
  opts.shift = 0.3;
  opts.nev = 4;
  const EigenResult r = ShiftInvertSolve(p, opts);
  REQUIRE(r.converged);
  REQUIRE(r.pairs.size() >= 4);
  CHECK(r.pairs[0].lambda.real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.pairs[1].lambda.real() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.pairs[2].lambda.real() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.pairs[3].lambda.real() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("dense spectrum: finite count and no spurious zero modes")
{
  const Discretization d = Cube2();
  const std::vector<cplx> all = DenseQZ(d.pencil);
  CHECK(static_cast<int>(all.size()) == d.pencil.n_field - d.pencil.n_mult);
  double smallest = std::numeric_limits<double>::infinity();
  for (cplx l : all)
  {
    smallest = std::min(smallest, std::abs(l));
  }
  CHECK(smallest > 0.1);
}

TEST_CASE("sparse shift-invert agrees with dense QZ")
{
  for (auto [a, n] : {std::pair{"two_I", "sixteen_I"}, std::pair{"F4", "F3"}})
  {
    const Discretization d = Cube2(0, a, n);
    const std::vector<cplx> dense = DenseQZ(d.pencil);
    SolveOptions opts;
    opts.shift = 1.69;
    opts.nev = 6;
    const EigenResult r = ShiftInvertSolve(d.pencil, opts);
    CHECK(r.converged);
    REQUIRE(r.pairs.size() >= 6);
    for (const EigenPair &ep : r.pairs)
    {
      CAPTURE(ep.lambda);
      CHECK(std::abs(Nearest(dense, ep.lambda) - ep.lambda) < 1e-8 * std::abs(ep.lambda));
      CHECK(ep.residual < 1e-9);
      CHECK(ep.constraint < 1e-8);
      CHECK(ep.multiplier < 1e-8);
    }
  }
}

TEST_CASE("spectrum does not depend on the pinned vertex or the shift")
{
  const Discretization d0 = Cube2(0, "two_I", "sixteen_I", -1);
  const Discretization d1 = Cube2(0, "two_I", "sixteen_I", 5);
  SolveOptions opts;
  opts.nev = 5;
  opts.shift = 1.69;
  const EigenResult r0 = ShiftInvertSolve(d0.pencil, opts);
  const EigenResult r1 = ShiftInvertSolve(d1.pencil, opts);
  opts.shift = cplx(2.0, 0.3);
  const EigenResult r2 = ShiftInvertSolve(d0.pencil, opts);
  std::vector<cplx> l0, l1, l2;
  for (const auto &ep : r0.pairs) l0.push_back(ep.lambda);
  for (const auto &ep : r1.pairs) l1.push_back(ep.lambda);
  for (const auto &ep : r2.pairs) l2.push_back(ep.lambda);
  for (cplx l : l0)
  {
    CHECK(std::abs(Nearest(l1, l) - l) < 1e-9 * std::abs(l));
  }
  const cplx low = SortedByK(l0).front();
  CHECK(std::abs(Nearest(l2, low) - low) < 1e-9 * std::abs(low));
  CHECK_FALSE(r2.real_factorization);
  CHECK(r0.real_factorization);
}

TEST_CASE("a prepared factorization is reusable")
{
  const Discretization d = Cube2();
  const ShiftedFactorization f(d.pencil, 1.69);
  SolveOptions opts;
  opts.nev = 3;
  const EigenResult a = ShiftInvertSolve(d.pencil, f, opts);
  opts.nev = 6;
  const EigenResult b = ShiftInvertSolve(d.pencil, f, opts);
  REQUIRE(a.pairs.size() >= 1);
  REQUIRE(b.pairs.size() >= 3);
  CHECK(std::abs(Nearest({b.pairs[0].lambda, b.pairs[1].lambda, b.pairs[2].lambda}, a.pairs[0].lambda) -
                 a.pairs[0].lambda) < 1e-9);
  const CVec rhs = CVec::Ones(d.pencil.dim());
  const CVec x = f.Solve(rhs);
  CHECK((d.pencil.K * x - 1.69 * (d.pencil.M * x) - rhs).norm() < 1e-9 * rhs.norm());
}

TEST_CASE("window selection")
{
  const Discretization d = Cube2();
  SolveOptions opts;
  opts.shift = 1.69;
  opts.nev = 4;
  const EigenResult r = ShiftInvertSolve(d.pencil, opts);
  CHECK_THROWS_AS(SelectLowest(r, 4, std::pair{50.0, 51.0}), Error);
  try
  {
    SelectLowest(r, 4, std::pair{50.0, 51.0});
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::NoEigenvaluesInWindow);
  }
  const auto sel = SelectLowest(r, 2);
  CHECK(sel.size() == 2);
  CHECK(sel[0].k.real() <= sel[1].k.real());
}

TEST_CASE("T operators are involutions and T-coercivity holds")
{
  const auto mesh = std::make_shared<const TetMesh>(BuildMesh(Domain::Cube, 1));
  const CoupledFieldSpace H(mesh, 0);
  for (TVariant v : {TVariant::Plus, TVariant::Minus})
  {
    const SpMat T = BuildTMatrix(H, v);
    const SpMat TT = T * T;
    SpMat I(H.dim(), H.dim());
    I.setIdentity();
    CHECK(MaxAbs(SpMat(TT - I)) < 1e-15);
  }
  for (const char *a : {"two_I", "F1", "F4"})
  {
    const TCoercivityObservation obs = ObserveTCoercivity(H, FormKind::A, MakePreset(a), 50);
    CAPTURE(a);
    CHECK(obs.trial_min > 0.0);
    CHECK(obs.exact_min > 0.0);
    CHECK(obs.exact_min <= obs.trial_min * (1.0 + 1e-12));
  }
  for (const char *n : {"sixteen_I", "F2", "F3"})
  {
    const TCoercivityObservation obs = ObserveTCoercivity(H, FormKind::C, MakePreset(n), 50);
    CAPTURE(n);
    CHECK(obs.exact_min > 0.0);
  }
}

TEST_CASE("property sweeps at small sizes")
{
  const std::vector<int> ns{1, 2};
  CHECK(CheckTCoercivity(FormKind::A, Domain::Cube, 0, MakePreset("F4"), ns, 50).passed);
  CHECK(CheckTCoercivity(FormKind::C, Domain::Cube, 0, MakePreset("F3"), ns, 50).passed);
  const PropertyReport poincare = CheckDiscretePoincare(Domain::Cube, 0, MakePreset("sixteen_I"), ns);
  CHECK(poincare.passed);
  CHECK(CheckSourceConsistency(Domain::Cube, 0, MakePreset("two_I"), MakePreset("sixteen_I"), ns).passed);
  CHECK(CheckSourceConsistency(Domain::ThickL, 1, MakePreset("F4"), MakePreset("F3"), {1}).passed);
  CHECK(CheckIdentities(Domain::ThickL, 0, MakePreset("F1"), MakePreset("F2"), ns).passed);
}

TEST_CASE("discrete Poincare: gradients vanish without the constraint")
{
  const Discretization d = Cube2();
  const PoincareObservation obs = ObservePoincare(*d.H, d.b);
  CHECK(obs.unconstrained_min < 1e-10);
  CHECK(obs.constrained_min > 1.0);
}

TEST_CASE("source problem")
{
  const Discretization d = Discretize(Domain::Cube, 2, 0, MakePreset("F1"), MakePreset("F2"));
  const SourceObservation s = ObserveSourceConsistency(d);
  CHECK(s.residual < 1e-10);
  CHECK(s.sparse_dense_diff < 1e-9);
  CHECK(s.linearity < 1e-12);
  CHECK(s.zero_source_norm == 0.0);
  CHECK(s.projected_multiplier < 1e-9);
}

TEST_CASE("dense checks refuse large spaces")
{
  const Discretization d = Discretize(Domain::Cube, 5, 0, MakePreset("two_I"), MakePreset("sixteen_I"));
  try
  {
    DenseQZ(d.pencil);
    FAIL("expected DimensionTooLarge");
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::DimensionTooLarge);
  }
}
