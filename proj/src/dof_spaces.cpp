// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include "dof_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "elements.hpp"
#include "errors.hpp"

namespace maxtev
{

int SingleFieldDofs::NumBoundary() const
{
  return static_cast<int>(std::count(on_boundary.begin(), on_boundary.end(), 1));
}

SingleFieldDofs BuildEdgeDofs(const TetMesh &mesh, int order)
{
  SingleFieldDofs d;
  d.per_tet = EdgeElement::SizeForOrder(order);
  const int ne = static_cast<int>(mesh.NumEdges());
  const int nf = static_cast<int>(mesh.NumFaces());
  d.size = order == 0 ? ne : 2 * ne + 2 * nf;
  d.tet_dofs.resize(mesh.NumTets() * d.per_tet);
  d.on_boundary.assign(d.size, 0);
  for (std::size_t t = 0; t < mesh.NumTets(); ++t)
  {
    int *out = d.tet_dofs.data() + t * d.per_tet;
    for (int e = 0; e < 6; ++e)
    {
      const int ge = mesh.tet_edges[t][e];
      if (order == 0)
      {
        out[e] = ge;
      }
      else
      {
        out[2 * e] = 2 * ge;
        out[2 * e + 1] = 2 * ge + 1;
      }
    }
    if (order == 1)
    {
      for (int f = 0; f < 4; ++f)
      {
        const int gf = mesh.tet_faces[t][f];
        out[12 + 2 * f] = 2 * ne + 2 * gf;
        out[12 + 2 * f + 1] = 2 * ne + 2 * gf + 1;
      }
    }
  }
  for (int e = 0; e < ne; ++e)
  {
    if (!mesh.edge_on_boundary[e])
    {
      continue;
    }
    if (order == 0)
    {
      d.on_boundary[e] = 1;
    }
    else
    {
      d.on_boundary[2 * e] = d.on_boundary[2 * e + 1] = 1;
    }
  }
  if (order == 1)
  {
    for (int f = 0; f < nf; ++f)
    {
      if (mesh.face_on_boundary[f])
      {
        d.on_boundary[2 * ne + 2 * f] = d.on_boundary[2 * ne + 2 * f + 1] = 1;
      }
    }
  }
  return d;
}

SingleFieldDofs BuildLagrangeDofs(const TetMesh &mesh, int degree)
{
  SingleFieldDofs d;
  d.per_tet = LagrangeElement::Size(degree);
  const int nv = static_cast<int>(mesh.NumVertices());
  const int ne = static_cast<int>(mesh.NumEdges());
  d.size = degree == 1 ? nv : nv + ne;
  d.tet_dofs.resize(mesh.NumTets() * d.per_tet);
  for (std::size_t t = 0; t < mesh.NumTets(); ++t)
  {
    int *out = d.tet_dofs.data() + t * d.per_tet;
    for (int i = 0; i < 4; ++i)
    {
      out[i] = mesh.tets[t][i];
    }
    if (degree == 2)
    {
      for (int e = 0; e < 6; ++e)
      {
        out[4 + e] = nv + mesh.tet_edges[t][e];
      }
    }
  }
  d.on_boundary.assign(mesh.vertex_on_boundary.begin(), mesh.vertex_on_boundary.end());
  if (degree == 2)
  {
    d.on_boundary.insert(d.on_boundary.end(), mesh.edge_on_boundary.begin(), mesh.edge_on_boundary.end());
  }
  return d;
}

namespace
{

SpMat Selection(int rows, const std::vector<int> &index)
{
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(index.size());
  for (std::size_t d = 0; d < index.size(); ++d)
  {
    if (index[d] >= 0)
    {
      trip.emplace_back(index[d], static_cast<int>(d), 1.0);
    }
  }
  SpMat s(rows, static_cast<int>(index.size()));
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

}  // namespace

CoupledFieldSpace::CoupledFieldSpace(std::shared_ptr<const TetMesh> mesh, int order)
    : mesh_(std::move(mesh)), order_(order), field_(BuildEdgeDofs(*mesh_, order))
{
  num_boundary_ = field_.NumBoundary();
  num_interior_ = field_.size - num_boundary_;
  w_index_.resize(field_.size);
  v_index_.resize(field_.size);
  int interior = 0, boundary = 0;
  for (int d = 0; d < field_.size; ++d)
  {
    if (field_.on_boundary[d])
    {
      w_index_[d] = v_index_[d] = 2 * num_interior_ + boundary++;
    }
    else
    {
      w_index_[d] = interior;
      v_index_[d] = num_interior_ + interior;
      ++interior;
    }
  }
}

SpMat CoupledFieldSpace::WEmbedding() const
{
  return Selection(dim(), w_index_);
}

SpMat CoupledFieldSpace::VEmbedding() const
{
  return Selection(dim(), v_index_);
}

CVec CoupledFieldSpace::ExtractW(const CVec &x) const
{
  CVec w(field_.size);
  for (int d = 0; d < field_.size; ++d)
  {
    w(d) = x(w_index_[d]);
  }
  return w;
}

CVec CoupledFieldSpace::ExtractV(const CVec &x) const
{
  CVec v(field_.size);
  for (int d = 0; d < field_.size; ++d)
  {
    v(d) = x(v_index_[d]);
  }
  return v;
}

MultiplierSpace::MultiplierSpace(std::shared_ptr<const TetMesh> mesh, int degree, int pinned_vertex)
    : mesh_(std::move(mesh)), degree_(degree), field_(BuildLagrangeDofs(*mesh_, degree))
{
  num_boundary_ = field_.NumBoundary();
  num_interior_ = field_.size - num_boundary_;
  if (num_boundary_ == 0)
  {
    throw Error(ErrorCode::InvalidArgument, "multiplier space needs at least one boundary vertex");
  }
  if (pinned_vertex < 0)
  {
    for (int v = 0; v < static_cast<int>(mesh_->NumVertices()); ++v)
    {
      if (mesh_->vertex_on_boundary[v])
      {
        pinned_vertex = v;
        break;
      }
    }
  }
  else if (pinned_vertex >= static_cast<int>(mesh_->NumVertices()) || !mesh_->vertex_on_boundary[pinned_vertex])
  {
    throw Error(ErrorCode::InvalidArgument,
                "pinned vertex " + std::to_string(pinned_vertex) + " is not a boundary vertex");
  }
  pinned_ = pinned_vertex;  // vertex DOFs coincide with vertex indices

  p_index_.resize(field_.size);
  q_index_.resize(field_.size);
  int interior = 0, boundary = 0;
  for (int d = 0; d < field_.size; ++d)
  {
    if (d == pinned_)
    {
      p_index_[d] = q_index_[d] = -1;
    }
    else if (field_.on_boundary[d])
    {
      p_index_[d] = q_index_[d] = 2 * num_interior_ + boundary++;
    }
    else
    {
      p_index_[d] = interior;
      q_index_[d] = num_interior_ + interior;
      ++interior;
    }
  }
}

SpMat MultiplierSpace::PEmbedding() const
{
  return Selection(dim(), p_index_);
}

SpMat MultiplierSpace::QEmbedding() const
{
  return Selection(dim(), q_index_);
}

SpMat BuildSingleGradientMatrix(const TetMesh &mesh, int order)
{
  const int degree = order + 1;
  const SingleFieldDofs edofs = BuildEdgeDofs(mesh, order);
  const SingleFieldDofs ldofs = BuildLagrangeDofs(mesh, degree);
  const int nl = ldofs.per_tet;

  // Local gradient interpolation only depends on the vertex rank pattern.
  std::map<std::array<int, 4>, Eigen::MatrixXd> local;
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(mesh.NumTets() * edofs.per_tet * nl);
  for (std::size_t t = 0; t < mesh.NumTets(); ++t)
  {
    const auto ranks = VertexRanks(mesh.tets[t]);
    auto it = local.find(ranks);
    if (it == local.end())
    {
      const EdgeElement &el = EdgeElementFor(order, ranks);
      Eigen::MatrixXd g(el.size(), nl);
      std::vector<double> vals(nl);
      std::vector<Vec3> grads(nl);
      for (int j = 0; j < nl; ++j)
      {
        g.col(j) = el.Interpolate([&](const Vec3 &x) {
          LagrangeElement::Evaluate(degree, x, vals, grads);
          return grads[j];
        });
      }
      it = local.emplace(ranks, std::move(g)).first;
    }
    const auto erow = edofs.TetDofs(t);
    const auto lcol = ldofs.TetDofs(t);
    for (int i = 0; i < edofs.per_tet; ++i)
    {
      for (int j = 0; j < nl; ++j)
      {
        const double v = it->second(i, j);
        if (std::abs(v) > 1e-14)
        {
          trip.emplace_back(erow[i], lcol[j], v);
        }
      }
    }
  }
  // Every tet sharing an entity produces the same value: keep one copy.
  std::stable_sort(trip.begin(), trip.end(), [](const auto &a, const auto &b) {
    return a.col() != b.col() ? a.col() < b.col() : a.row() < b.row();
  });
  std::vector<Eigen::Triplet<cplx>> uniq;
  uniq.reserve(trip.size() / 2);
  for (const auto &tr : trip)
  {
    if (!uniq.empty() && uniq.back().row() == tr.row() && uniq.back().col() == tr.col())
    {
      continue;
    }
    uniq.push_back(tr);
  }
  SpMat g(edofs.size, ldofs.size);
  g.setFromTriplets(uniq.begin(), uniq.end());
  return g;
}

SpMat BuildGradientMatrix(const MultiplierSpace &Q, const CoupledFieldSpace &H)
{
  if (&Q.mesh() != &H.mesh() || Q.degree() != H.order() + 1)
  {
    throw Error(ErrorCode::SpaceMismatch, "multiplier degree must equal edge order + 1 on the same mesh");
  }
  const SpMat gs = BuildSingleGradientMatrix(H.mesh(), H.order());
  // (grad p, grad q): the w rows see p columns, the v rows see q columns. A
  // shared row with a shared column is one unknown on both sides.
  std::map<std::pair<int, int>, cplx> entries;
  for (int l = 0; l < gs.outerSize(); ++l)
  {
    const int cp = Q.PIndex(l), cq = Q.QIndex(l);
    if (cp < 0)
    {
      continue;
    }
    for (SpMat::InnerIterator it(gs, l); it; ++it)
    {
      const int d = static_cast<int>(it.row());
      entries[{H.WIndex(d), cp}] = it.value();
      entries[{H.VIndex(d), cq}] = it.value();
    }
  }
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(entries.size());
  for (const auto &[rc, v] : entries)
  {
    trip.emplace_back(rc.first, rc.second, v);
  }
  SpMat g(H.dim(), Q.dim());
  g.setFromTriplets(trip.begin(), trip.end());
  return g;
}

}  // namespace maxtev
