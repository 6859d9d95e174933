// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>

#include "coefficients.hpp"
#include "doctest.h"
#include "errors.hpp"

using namespace maxtev;

namespace
{

ErrorCode CodeOf(const std::function<void()> &fn)
{
  try
  {
    fn();
  }
  catch (const Error &e)
  {
    return e.code();
  }
  return ErrorCode{};
}

}  // namespace

TEST_CASE("F4 entries and symmetry")
{
  const CoefficientField F4 = MakePreset("F4");
  const Vec3 x(0.3, 0.7, 0.4);
  const double x1 = 0.3, x2 = 0.7, x3 = 0.4;
  const Mat3c m = F4(x);
  const double off = 3 * x1 / 8 - 3 * x2 / 8 - 3 * x1 * x1 / 8 + 0.75;
  CHECK(m(0, 0).real() == doctest::Approx(-x1 * x1 / 8 + 9 * x1 / 8 - 9 * x2 / 8 + 65.0 / 4));
  CHECK(m(1, 1).real() == doctest::Approx(9 * x1 * x1 / 8 - x1 / 8 + x2 / 8 + 55.0 / 4));
  CHECK(m(2, 2).real() == doctest::Approx(x3 * x3 + 12));
  CHECK(m(0, 1).real() == doctest::Approx(off));
  CHECK(m(1, 0).real() == doctest::Approx(off));
  CHECK(std::abs(m(0, 2)) == 0.0);
  CHECK(std::abs(m(1, 2)) == 0.0);
  CHECK(IsHermitian(m));
}

TEST_CASE("F4 is bounded below by 12 with the 2x2 block well above it")
{
  const CoefficientField F4 = MakePreset("F4");
  for (Domain d : {Domain::Cube, Domain::ThickL})
  {
    double block_min = 1e300;
    for (const Vec3 &x : SampleDomain(d, 2000))
    {
      const Eigen::Matrix2d b = F4(x).topLeftCorner<2, 2>().real();
      block_min = std::min(block_min, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(b).eigenvalues()(0));
    }
    CHECK(block_min > 13.0);
  }
  CHECK(FormBounds(F4(Vec3(0.5, 0.5, 0.0))).first == doctest::Approx(12.0));
  const auto [lo, hi] = SampledBounds(F4, Domain::Cube);
  CHECK(lo >= 12.0);
  CHECK(lo < 12.05);
  CHECK(hi < 20.0);
}

TEST_CASE("scalar presets")
{
  const Vec3 x(0.1, 0.2, 0.3);
  CHECK(MakePreset("two_I")(x)(1, 1).real() == 2.0);
  CHECK(MakePreset("sixteen_I")(x)(2, 2).real() == 16.0);
  CHECK(MakePreset("F1")(x)(0, 0).real() == doctest::Approx(std::exp(0.6) + 6.0));
  CHECK(MakePreset("F2")(x)(0, 0).real() == doctest::Approx(8.0 + 0.1 - 0.2 + 0.3));
  CHECK(std::abs(MakePreset("F1")(x)(0, 1)) == 0.0);
  const Mat3c f3 = MakePreset("F3")(x);
  CHECK(f3(0, 1).real() == doctest::Approx(0.1));
  CHECK(f3(0, 2).real() == doctest::Approx(0.2));
  CHECK(f3(1, 2).real() == doctest::Approx(0.3));
  CHECK(IsHermitian(f3));
}

TEST_CASE("coefficient parsing")
{
  const Vec3 x(0.5, 0.5, 0.5);
  CHECK(ParseCoefficient("0.5I")(x)(0, 0).real() == 0.5);
  CHECK(ParseCoefficient("F3")(x)(2, 2).real() == 14.0);
  const CoefficientField m = ParseCoefficient("2,1,0, 1,2,0, 0,0,3");
  CHECK(m(x)(0, 1).real() == 1.0);
  CHECK(m.IsConstant());
  CHECK(CodeOf([] { ParseCoefficient("1,2,0,0,1,0,0,0,1"); }) == ErrorCode::NotHermitian);
  CHECK(CodeOf([] { ParseCoefficient("F9"); }) == ErrorCode::UnknownPreset);
  CHECK(CodeOf([] { ParseCoefficient("1,2,3"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("bound cases")
{
  const auto c1 = ClassifyBounds(MakePreset("two_I"), MakePreset("sixteen_I"), Domain::Cube);
  CHECK(c1.bound_case == 1);
  CHECK(c1.a_min == doctest::Approx(2.0));
  CHECK(ClassifyBounds(MakePreset("F4"), MakePreset("F3"), Domain::ThickL).bound_case == 1);
  CHECK(ClassifyBounds(ParseCoefficient("2I"), ParseCoefficient("0.5I"), Domain::Cube).bound_case == 2);
  CHECK(ClassifyBounds(ParseCoefficient("0.5I"), ParseCoefficient("0.25I"), Domain::Cube).bound_case == 3);
  CHECK(ClassifyBounds(ParseCoefficient("0.5I"), ParseCoefficient("3I"), Domain::Cube).bound_case == 4);
  CHECK(CodeOf([] {
          ClassifyBounds(ParseCoefficient("0.5,0,0,0,2,0,0,0,2"), ParseCoefficient("2I"), Domain::Cube);
        }) == ErrorCode::NoCaseMatch);
  CHECK(SelectTVariant(1.5, 3.0) == TVariant::Plus);
  CHECK(SelectTVariant(0.2, 0.5) == TVariant::Minus);
  CHECK(CodeOf([] { SelectTVariant(0.5, 1.5); }) == ErrorCode::NoCaseMatch);
}
