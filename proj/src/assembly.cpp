// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include "assembly.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <sstream>

#include "elements.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace maxtev
{

namespace
{

using Triplets = std::vector<Eigen::Triplet<cplx>>;

// Reference edge basis tabulated at the quadrature points for one rank pattern.
struct EdgeTable
{
  std::vector<Vec3> values;  // q * size + i
  std::vector<Vec3> curls;
};

class EdgeTables
{
public:
  EdgeTables(int order, const QuadratureRule &rule) : order_(order), rule_(rule) {}

  const EdgeTable &Get(const std::array<int, 4> &ranks)
  {
    const int key = ((ranks[0] * 4 + ranks[1]) * 4 + ranks[2]) * 4 + ranks[3];
    auto &slot = tables_[key];
    if (slot.values.empty())
    {
      const EdgeElement &el = EdgeElementFor(order_, ranks);
      const int n = el.size();
      slot.values.resize(rule_.size() * n);
      slot.curls.resize(rule_.size() * n);
      for (std::size_t q = 0; q < rule_.size(); ++q)
      {
        el.Evaluate(rule_.points[q], std::span<Vec3>(slot.values.data() + q * n, n),
                    std::span<Vec3>(slot.curls.data() + q * n, n));
      }
    }
    return slot;
  }

private:
  int order_;
  const QuadratureRule &rule_;
  std::array<EdgeTable, 256> tables_;
};

SpMat Compress(int rows, int cols, std::vector<Triplets> &chunks)
{
  Triplets all;
  std::size_t total = 0;
  for (const auto &c : chunks)
  {
    total += c.size();
  }
  all.reserve(total);
  for (auto &c : chunks)
  {
    all.insert(all.end(), c.begin(), c.end());
    Triplets().swap(c);
  }
  // Fixed (row, col) order with ties kept in tet order: entries are summed in
  // the same sequence regardless of the thread count.
  std::stable_sort(all.begin(), all.end(), [](const auto &a, const auto &b) {
    return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
  });
  SpMat m(rows, cols);
  m.setFromTriplets(all.begin(), all.end());
  m.makeCompressed();
  return m;
}

Mat3c CoefAt(const CoefficientField *coef, const Vec3 &x)
{
  return coef ? (*coef)(x) : Mat3c::Identity();
}

enum class EdgeForm
{
  CurlCurl,
  Mass,
};

SpMat AssembleEdgeForm(const CoupledFieldSpace &H, const CoefficientField *coef, int qdeg, EdgeForm form)
{
  const TetMesh &mesh = H.mesh();
  const SingleFieldDofs &dofs = H.field();
  const QuadratureRule &rule = TetQuadrature(qdeg);
  const int n = dofs.per_tet;
  std::vector<Triplets> chunks(MaxThreads());
  ParallelChunks(mesh.NumTets(), [&](int chunk, std::size_t begin, std::size_t end) {
    EdgeTables tables(H.order(), rule);
    Triplets &out = chunks[chunk];
    out.reserve((end - begin) * n * n);
    std::vector<Vec3> phys(n);
    std::vector<Eigen::Vector3cd> weighted(n);
    Eigen::MatrixXcd local(n, n);
    for (std::size_t t = begin; t < end; ++t)
    {
      const TetGeometry geo = TetGeometry::FromMesh(mesh, t);
      const EdgeTable &tab = tables.Get(VertexRanks(mesh.tets[t]));
      local.setZero();
      for (std::size_t q = 0; q < rule.size(); ++q)
      {
        const double w = rule.weights[q] * std::abs(geo.det);
        const Mat3c X = CoefAt(coef, geo.Map(rule.points[q]));
        for (int i = 0; i < n; ++i)
        {
          phys[i] = form == EdgeForm::CurlCurl ? geo.PushCurl(tab.curls[q * n + i])
                                               : geo.PushValue(tab.values[q * n + i]);
          weighted[i] = w * (X * phys[i].cast<cplx>());
        }
        for (int j = 0; j < n; ++j)
        {
          for (int i = 0; i < n; ++i)
          {
            local(i, j) += phys[i].cast<cplx>().dot(weighted[j]);
          }
        }
      }
      const auto gd = dofs.TetDofs(t);
      for (int j = 0; j < n; ++j)
      {
        for (int i = 0; i < n; ++i)
        {
          out.emplace_back(gd[i], gd[j], local(i, j));
        }
      }
    }
  });
  return Compress(dofs.size, dofs.size, chunks);
}

}  // namespace

SpMat AssembleFieldCurlCurl(const CoupledFieldSpace &H, const CoefficientField *coef, int qdeg)
{
  return AssembleEdgeForm(H, coef, qdeg, EdgeForm::CurlCurl);
}

SpMat AssembleFieldMass(const CoupledFieldSpace &H, const CoefficientField *coef, int qdeg)
{
  return AssembleEdgeForm(H, coef, qdeg, EdgeForm::Mass);
}

SpMat AssembleFieldGradMass(const MultiplierSpace &Q, const CoupledFieldSpace &H, const CoefficientField *coef,
                            int qdeg)
{
  if (&Q.mesh() != &H.mesh() || Q.degree() != H.order() + 1)
  {
    throw Error(ErrorCode::SpaceMismatch, "multiplier degree must equal edge order + 1 on the same mesh");
  }
  const TetMesh &mesh = H.mesh();
  const SingleFieldDofs &edofs = H.field();
  const SingleFieldDofs &ldofs = Q.field();
  const QuadratureRule &rule = TetQuadrature(qdeg);
  const int ne = edofs.per_tet, nl = ldofs.per_tet;

  // Lagrange gradients at quadrature points do not depend on orientation.
  std::vector<Vec3> lgrad(rule.size() * nl);
  {
    std::vector<double> vals(nl);
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      LagrangeElement::Evaluate(Q.degree(), rule.points[q], vals,
                                std::span<Vec3>(lgrad.data() + q * nl, nl));
    }
  }

  std::vector<Triplets> chunks(MaxThreads());
  ParallelChunks(mesh.NumTets(), [&](int chunk, std::size_t begin, std::size_t end) {
    EdgeTables tables(H.order(), rule);
    Triplets &out = chunks[chunk];
    out.reserve((end - begin) * ne * nl);
    std::vector<Vec3> phys(ne);
    std::vector<Eigen::Vector3cd> weighted(nl);
    Eigen::MatrixXcd local(ne, nl);
    for (std::size_t t = begin; t < end; ++t)
    {
      const TetGeometry geo = TetGeometry::FromMesh(mesh, t);
      const EdgeTable &tab = tables.Get(VertexRanks(mesh.tets[t]));
      local.setZero();
      for (std::size_t q = 0; q < rule.size(); ++q)
      {
        const double w = rule.weights[q] * std::abs(geo.det);
        const Mat3c X = CoefAt(coef, geo.Map(rule.points[q]));
        for (int i = 0; i < ne; ++i)
        {
          phys[i] = geo.PushValue(tab.values[q * ne + i]);
        }
        for (int j = 0; j < nl; ++j)
        {
          weighted[j] = w * (X * geo.PushGradient(lgrad[q * nl + j]).cast<cplx>());
        }
        for (int j = 0; j < nl; ++j)
        {
          for (int i = 0; i < ne; ++i)
          {
            local(i, j) += phys[i].cast<cplx>().dot(weighted[j]);
          }
        }
      }
      const auto er = edofs.TetDofs(t);
      const auto lc = ldofs.TetDofs(t);
      for (int j = 0; j < nl; ++j)
      {
        for (int i = 0; i < ne; ++i)
        {
          out.emplace_back(er[i], lc[j], local(i, j));
        }
      }
    }
  });
  return Compress(edofs.size, ldofs.size, chunks);
}

SpMat AssembleA(const CoupledFieldSpace &H, const CoefficientField &A, int qdeg)
{
  const SpMat Ew = H.WEmbedding(), Ev = H.VEmbedding();
  const SpMat sa = AssembleFieldCurlCurl(H, &A, qdeg);
  const SpMat si = AssembleFieldCurlCurl(H, nullptr, qdeg);
  SpMat a = SpMat(Ew * sa * SpMat(Ew.transpose())) - SpMat(Ev * si * SpMat(Ev.transpose()));
  a.prune(cplx(0.0));
  a.makeCompressed();
  return a;
}

SpMat AssembleC(const CoupledFieldSpace &H, const CoefficientField &N, int qdeg)
{
  const SpMat Ew = H.WEmbedding(), Ev = H.VEmbedding();
  const SpMat mn = AssembleFieldMass(H, &N, qdeg);
  const SpMat mi = AssembleFieldMass(H, nullptr, qdeg);
  SpMat c = SpMat(Ew * mn * SpMat(Ew.transpose())) - SpMat(Ev * mi * SpMat(Ev.transpose()));
  c.prune(cplx(0.0));
  c.makeCompressed();
  return c;
}

SpMat AssembleB(const MultiplierSpace &Q, const CoupledFieldSpace &H, const CoefficientField &N, int qdeg)
{
  const SpMat Ew = H.WEmbedding(), Ev = H.VEmbedding();
  const SpMat Ep = Q.PEmbedding(), Eq = Q.QEmbedding();
  const SpMat bn = AssembleFieldGradMass(Q, H, &N, qdeg);
  const SpMat bi = AssembleFieldGradMass(Q, H, nullptr, qdeg);
  SpMat b = SpMat(Ew * bn * SpMat(Ep.transpose())) - SpMat(Ev * bi * SpMat(Eq.transpose()));
  b.prune(cplx(0.0));
  b.makeCompressed();
  return b;
}

Pencil BuildPencil(const SpMat &A, const SpMat &B, const SpMat &C)
{
  if (A.rows() != A.cols() || C.rows() != C.cols() || A.rows() != C.rows() || B.rows() != A.rows())
  {
    std::ostringstream os;
    os << "pencil blocks have inconsistent sizes: A " << A.rows() << "x" << A.cols() << ", B " << B.rows() << "x"
       << B.cols() << ", C " << C.rows() << "x" << C.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  Pencil p;
  p.n_field = static_cast<int>(A.rows());
  p.n_mult = static_cast<int>(B.cols());
  const int n = p.dim();
  Triplets kt, mt;
  kt.reserve(A.nonZeros() + 2 * B.nonZeros());
  mt.reserve(C.nonZeros());
  for (int j = 0; j < A.outerSize(); ++j)
  {
    for (SpMat::InnerIterator it(A, j); it; ++it)
    {
      kt.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int j = 0; j < B.outerSize(); ++j)
  {
    for (SpMat::InnerIterator it(B, j); it; ++it)
    {
      kt.emplace_back(it.row(), p.n_field + it.col(), it.value());
      kt.emplace_back(p.n_field + it.col(), it.row(), std::conj(it.value()));
    }
  }
  for (int j = 0; j < C.outerSize(); ++j)
  {
    for (SpMat::InnerIterator it(C, j); it; ++it)
    {
      mt.emplace_back(it.row(), it.col(), it.value());
    }
  }
  p.K.resize(n, n);
  p.K.setFromTriplets(kt.begin(), kt.end());
  p.M.resize(n, n);
  p.M.setFromTriplets(mt.begin(), mt.end());
  p.K.makeCompressed();
  p.M.makeCompressed();
  return p;
}

double MaxAbs(const SpMat &X)
{
  double m = 0.0;
  for (int j = 0; j < X.outerSize(); ++j)
  {
    for (SpMat::InnerIterator it(X, j); it; ++it)
    {
      m = std::max(m, std::abs(it.value()));
    }
  }
  return m;
}

double HermitianDefect(const SpMat &X)
{
  const SpMat d = X - SpMat(X.adjoint());
  const double scale = MaxAbs(X);
  return scale > 0.0 ? MaxAbs(d) / scale : 0.0;
}

void WriteMatrixMarket(const SpMat &X, std::ostream &os)
{
  std::ostringstream buf;
  buf.precision(17);
  buf << "%%MatrixMarket matrix coordinate complex general\n";
  buf << X.rows() << ' ' << X.cols() << ' ' << X.nonZeros() << '\n';
  for (int j = 0; j < X.outerSize(); ++j)
  {
    for (SpMat::InnerIterator it(X, j); it; ++it)
    {
      buf << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
    }
  }
  os << buf.str();
}

}  // namespace maxtev
