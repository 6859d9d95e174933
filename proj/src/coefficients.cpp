// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include "coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "errors.hpp"

namespace maxtev
{

CoefficientField CoefficientField::Scalar(double value, std::string label)
{
  if (label.empty())
  {
    std::ostringstream os;
    os << value << "I";
    label = os.str();
  }
  const Mat3c m = value * Mat3c::Identity();
  return CoefficientField(CoefficientKind::ConstantScalar, std::move(label), [m](const Vec3 &) { return m; });
}

CoefficientField CoefficientField::Matrix(const Mat3c &value, std::string label)
{
  if (label.empty())
  {
    label = "matrix";
  }
  return CoefficientField(CoefficientKind::ConstantMatrix, std::move(label), [value](const Vec3 &) { return value; });
}

std::vector<std::string> PresetNames()
{
  return {"two_I", "sixteen_I", "F1", "F2", "F3", "F4"};
}

CoefficientField MakePreset(const std::string &name)
{
  if (name == "two_I")
  {
    return CoefficientField::Scalar(2.0, "two_I");
  }
  if (name == "sixteen_I")
  {
    return CoefficientField::Scalar(16.0, "sixteen_I");
  }
  if (name == "F1")
  {
    return CoefficientField(CoefficientKind::ScalarFunction, "F1", [](const Vec3 &x) {
      return Mat3c((std::exp(x.x() + x.y() + x.z()) + 6.0) * Mat3c::Identity());
    });
  }
  if (name == "F2")
  {
    return CoefficientField(CoefficientKind::ScalarFunction, "F2", [](const Vec3 &x) {
      return Mat3c((8.0 + x.x() - x.y() + x.z()) * Mat3c::Identity());
    });
  }
  if (name == "F3")
  {
    return CoefficientField(CoefficientKind::MatrixFunction, "F3", [](const Vec3 &x) {
      Mat3c m;
      m << 16.0, x.x(), x.y(),
           x.x(), 16.0, x.z(),
           x.y(), x.z(), 14.0;
      return m;
    });
  }
  if (name == "F4")
  {
    return CoefficientField(CoefficientKind::MatrixFunction, "F4", [](const Vec3 &x) {
      const double x1 = x.x(), x2 = x.y(), x3 = x.z();
      const double off = 3.0 * x1 / 8.0 - 3.0 * x2 / 8.0 - 3.0 * x1 * x1 / 8.0 + 0.75;
      Mat3c m;
      m << -x1 * x1 / 8.0 + 9.0 * x1 / 8.0 - 9.0 * x2 / 8.0 + 65.0 / 4.0, off, 0.0,
           off, 9.0 * x1 * x1 / 8.0 - x1 / 8.0 + x2 / 8.0 + 55.0 / 4.0, 0.0,
           0.0, 0.0, x3 * x3 + 12.0;
      return m;
    });
  }
  throw Error(ErrorCode::UnknownPreset, "unknown coefficient preset \"" + name + "\"");
}

bool IsHermitian(const Mat3c &m, double rel_tol)
{
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

CoefficientField ParseCoefficient(const std::string &spec)
{
  for (const auto &name : PresetNames())
  {
    if (spec == name)
    {
      return MakePreset(name);
    }
  }
  if (spec == "I")
  {
    return CoefficientField::Scalar(1.0, "I");
  }
  if (spec.size() > 1 && spec.back() == 'I')
  {
    const std::string num = spec.substr(0, spec.size() - 1);
    std::size_t used = 0;
    double v = 0.0;
    try
    {
      v = std::stod(num, &used);
    }
    catch (const std::exception &)
    {
      used = 0;
    }
    if (used == num.size() && used > 0)
    {
      return CoefficientField::Scalar(v, spec);
    }
  }
  std::string s = spec;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream is(s);
  std::vector<double> vals;
  double v;
  while (is >> v)
  {
    vals.push_back(v);
  }
  if (!is.eof() || vals.empty())
  {
    throw Error(ErrorCode::UnknownPreset, "unknown coefficient \"" + spec + "\"");
  }
  if (vals.size() != 9)
  {
    throw Error(ErrorCode::InvalidArgument,
                "inline coefficient matrix needs 9 numbers, got " + std::to_string(vals.size()));
  }
  Mat3c m;
  for (int i = 0; i < 9; ++i)
  {
    m(i / 3, i % 3) = vals[i];
  }
  if (!IsHermitian(m))
  {
    throw Error(ErrorCode::NotHermitian, "inline coefficient matrix \"" + spec + "\" is not Hermitian");
  }
  return CoefficientField::Matrix(m, spec);
}

std::pair<double, double> FormBounds(const Mat3c &m)
{
  const Mat3c herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat3c> es(herm, Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), es.eigenvalues()(2)};
}

namespace
{

double Halton(int index, int base)
{
  double f = 1.0, r = 0.0;
  while (index > 0)
  {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

}  // namespace

std::vector<Vec3> SampleDomain(Domain domain, int count)
{
  std::vector<Vec3> pts;
  pts.reserve(count);
  for (int i = 1; static_cast<int>(pts.size()) < count; ++i)
  {
    const Vec3 u(Halton(i, 2), Halton(i, 3), Halton(i, 5));
    if (domain == Domain::Cube)
    {
      pts.push_back(u);
      continue;
    }
    const Vec3 x(2.0 * u.x() - 1.0, 2.0 * u.y() - 1.0, u.z());
    if (x.x() > 0.0 || x.y() > 0.0)
    {
      pts.push_back(x);
    }
  }
  return pts;
}

std::pair<double, double> SampledBounds(const CoefficientField &X, Domain domain, int samples)
{
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto &x : SampleDomain(domain, samples))
  {
    const auto [l, h] = FormBounds(X(x));
    lo = std::min(lo, l);
    hi = std::max(hi, h);
  }
  return {lo, hi};
}

CoefficientBounds ClassifyBounds(const CoefficientField &A, const CoefficientField &N, Domain domain, int samples,
                                 const std::vector<Vec3> &extra_points)
{
  std::vector<Vec3> pts = SampleDomain(domain, samples);
  pts.insert(pts.end(), extra_points.begin(), extra_points.end());
  CoefficientBounds b;
  b.a_min = b.n_min = std::numeric_limits<double>::infinity();
  b.a_max = b.n_max = -std::numeric_limits<double>::infinity();
  for (const auto &x : pts)
  {
    const auto [alo, ahi] = FormBounds(A(x));
    const auto [nlo, nhi] = FormBounds(N(x));
    b.a_min = std::min(b.a_min, alo);
    b.a_max = std::max(b.a_max, ahi);
    b.n_min = std::min(b.n_min, nlo);
    b.n_max = std::max(b.n_max, nhi);
  }
  const bool a_big = b.a_min > 1.0, a_small = b.a_max < 1.0;
  const bool n_big = b.n_min > 1.0, n_small = b.n_max < 1.0;
  if (a_big && n_big)
  {
    b.bound_case = 1;
  }
  else if (a_big && n_small)
  {
    b.bound_case = 2;
  }
  else if (a_small && n_small)
  {
    b.bound_case = 3;
  }
  else if (a_small && n_big)
  {
    b.bound_case = 4;
  }
  else
  {
    std::ostringstream os;
    os << "coefficient bounds A in [" << b.a_min << ", " << b.a_max << "], N in [" << b.n_min << ", "
       << b.n_max << "] satisfy none of the four cases";
    throw Error(ErrorCode::NoCaseMatch, os.str());
  }
  return b;
}

TVariant SelectTVariant(double lower, double upper)
{
  if (lower > 1.0)
  {
    return TVariant::Plus;
  }
  if (upper < 1.0)
  {
    return TVariant::Minus;
  }
  std::ostringstream os;
  os << "coefficient bounds [" << lower << ", " << upper << "] straddle 1";
  throw Error(ErrorCode::NoCaseMatch, os.str());
}

}  // namespace maxtev
