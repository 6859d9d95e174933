// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include "mesh.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "errors.hpp"

namespace maxtev
{

const char *DomainName(Domain d)
{
  return d == Domain::Cube ? "cube" : "thickL";
}

Domain ParseDomain(const std::string &name)
{
  if (name == "cube")
  {
    return Domain::Cube;
  }
  if (name == "thickL" || name == "thickl" || name == "L")
  {
    return Domain::ThickL;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown domain \"" + name + "\" (expected cube|thickL)");
}

std::size_t TetMesh::NumBoundaryVertices() const
{
  return static_cast<std::size_t>(std::count(vertex_on_boundary.begin(), vertex_on_boundary.end(), 1));
}

std::size_t TetMesh::NumBoundaryEdges() const
{
  return static_cast<std::size_t>(std::count(edge_on_boundary.begin(), edge_on_boundary.end(), 1));
}

std::size_t TetMesh::NumBoundaryFaces() const
{
  return static_cast<std::size_t>(std::count(face_on_boundary.begin(), face_on_boundary.end(), 1));
}

double TetMesh::SignedVolume(std::size_t t) const
{
  const auto &v = tets[t];
  const Vec3 a = vertices[v[1]] - vertices[v[0]];
  const Vec3 b = vertices[v[2]] - vertices[v[0]];
  const Vec3 c = vertices[v[3]] - vertices[v[0]];
  return a.dot(b.cross(c)) / 6.0;
}

Vec3 TetMesh::Barycenter(std::size_t t) const
{
  const auto &v = tets[t];
  return 0.25 * (vertices[v[0]] + vertices[v[1]] + vertices[v[2]] + vertices[v[3]]);
}

int FacePermutationCode(int a, int b, int c)
{
  // Local positions sorted by global index.
  std::array<int, 3> g = {a, b, c};
  std::array<int, 3> pos = {0, 1, 2};
  std::sort(pos.begin(), pos.end(), [&](int i, int j) { return g[i] < g[j]; });
  static constexpr std::array<std::array<int, 3>, 6> kPerms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (int k = 0; k < 6; ++k)
  {
    if (kPerms[k] == pos)
    {
      return k;
    }
  }
  return -1;
}

namespace
{

// Structured grid of cubes of side h with origin `origin` and ni x nj x nk
// cells; `keep(ci, cj, ck)` selects the cells belonging to the domain.
template <typename KeepFn>
TetMesh BuildCubeSubdivision(const Vec3 &origin, int ni, int nj, int nk, double h, KeepFn keep)
{
  const int pi = ni + 1, pj = nj + 1, pk = nk + 1;
  auto grid_id = [&](int i, int j, int k) { return (static_cast<long>(i) * pj + j) * pk + k; };

  std::vector<std::uint8_t> used(static_cast<std::size_t>(pi) * pj * pk, 0);
  std::vector<std::array<int, 3>> cells;
  for (int i = 0; i < ni; ++i)
  {
    for (int j = 0; j < nj; ++j)
    {
      for (int k = 0; k < nk; ++k)
      {
        if (!keep(i, j, k))
        {
          continue;
        }
        cells.push_back({i, j, k});
        for (int a = 0; a < 2; ++a)
        {
          for (int b = 0; b < 2; ++b)
          {
            for (int c = 0; c < 2; ++c)
            {
              used[grid_id(i + a, j + b, k + c)] = 1;
            }
          }
        }
      }
    }
  }

  TetMesh mesh;
  std::vector<int> vid(used.size(), -1);
  for (int i = 0; i < pi; ++i)
  {
    for (int j = 0; j < pj; ++j)
    {
      for (int k = 0; k < pk; ++k)
      {
        const auto g = grid_id(i, j, k);
        if (used[g])
        {
          vid[g] = static_cast<int>(mesh.vertices.size());
          mesh.vertices.push_back(origin + h * Vec3(i, j, k));
        }
      }
    }
  }
  const int num_grid = static_cast<int>(mesh.vertices.size());
  for (const auto &cell : cells)
  {
    mesh.vertices.push_back(origin + h * Vec3(cell[0] + 0.5, cell[1] + 0.5, cell[2] + 0.5));
  }

  mesh.tets.reserve(12 * cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c)
  {
    const int center = num_grid + static_cast<int>(c);
    const auto [i, j, k] = cells[c];
    for (int axis = 0; axis < 3; ++axis)
    {
      const int d1 = (axis + 1) % 3 < (axis + 2) % 3 ? (axis + 1) % 3 : (axis + 2) % 3;
      const int d2 = 3 - axis - d1;
      for (int side = 0; side < 2; ++side)
      {
        std::array<int, 3> base = {i, j, k};
        base[axis] += side;
        auto corner = [&](int o1, int o2) {
          std::array<int, 3> p = base;
          p[d1] += o1;
          p[d2] += o2;
          return vid[grid_id(p[0], p[1], p[2])];
        };
        // Diagonal through the lexicographically smallest corner of the face.
        const int c00 = corner(0, 0), c10 = corner(1, 0), c01 = corner(0, 1), c11 = corner(1, 1);
        for (const auto &tri : {std::array<int, 3>{c00, c10, c11}, std::array<int, 3>{c00, c01, c11}})
        {
          std::array<int, 4> tet = {center, tri[0], tri[1], tri[2]};
          const Vec3 a = mesh.vertices[tet[1]] - mesh.vertices[tet[0]];
          const Vec3 b = mesh.vertices[tet[2]] - mesh.vertices[tet[0]];
          const Vec3 e = mesh.vertices[tet[3]] - mesh.vertices[tet[0]];
          if (a.dot(b.cross(e)) < 0.0)
          {
            std::swap(tet[2], tet[3]);
          }
          mesh.tets.push_back(tet);
        }
      }
    }
  }
  return mesh;
}

}  // namespace

TetMesh BuildCubeMesh(int n)
{
  if (n < 1)
  {
    throw Error(ErrorCode::InvalidArgument, "mesh resolution n must be >= 1");
  }
  const double h = 1.0 / n;
  TetMesh mesh = BuildCubeSubdivision(Vec3::Zero(), n, n, n, h, [](int, int, int) { return true; });
  mesh.h = h;
  mesh.n = n;
  mesh.domain = Domain::Cube;
  BuildTopology(mesh);
  return mesh;
}

TetMesh BuildThickLMesh(int n)
{
  if (n < 1)
  {
    throw Error(ErrorCode::InvalidArgument, "mesh resolution n must be >= 1");
  }
  const double h = 1.0 / n;
  // Cells with x1 <= 0 and x2 <= 0 are removed.
  TetMesh mesh = BuildCubeSubdivision(Vec3(-1.0, -1.0, 0.0), 2 * n, 2 * n, n, h,
                                      [n](int i, int j, int) { return !(i < n && j < n); });
  mesh.h = h;
  mesh.n = n;
  mesh.domain = Domain::ThickL;
  BuildTopology(mesh);
  return mesh;
}

TetMesh BuildMesh(Domain domain, int n)
{
  return domain == Domain::Cube ? BuildCubeMesh(n) : BuildThickLMesh(n);
}

void BuildTopology(TetMesh &mesh)
{
  const std::size_t nv = mesh.vertices.size();
  for (std::size_t t = 0; t < mesh.tets.size(); ++t)
  {
    for (int v : mesh.tets[t])
    {
      if (v < 0 || static_cast<std::size_t>(v) >= nv)
      {
        throw Error(ErrorCode::InvalidArgument, "tet " + std::to_string(t) + " references a missing vertex");
      }
    }
    if (!(mesh.SignedVolume(t) > 0.0))
    {
      throw Error(ErrorCode::InvertedTet, "tet " + std::to_string(t) + " has non-positive signed volume");
    }
  }

  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> faces;
  edges.reserve(6 * mesh.tets.size());
  faces.reserve(4 * mesh.tets.size());
  for (const auto &tet : mesh.tets)
  {
    for (const auto &e : kLocalEdges)
    {
      edges.push_back({std::min(tet[e[0]], tet[e[1]]), std::max(tet[e[0]], tet[e[1]])});
    }
    for (const auto &f : kLocalFaces)
    {
      std::array<int, 3> s = {tet[f[0]], tet[f[1]], tet[f[2]]};
      std::sort(s.begin(), s.end());
      faces.push_back(s);
    }
  }
  std::vector<std::array<int, 3>> all_faces = faces;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::sort(faces.begin(), faces.end());
  faces.erase(std::unique(faces.begin(), faces.end()), faces.end());

  mesh.edges = std::move(edges);
  mesh.faces = std::move(faces);

  auto edge_index = [&](int a, int b) {
    const std::array<int, 2> key = {std::min(a, b), std::max(a, b)};
    return static_cast<int>(std::lower_bound(mesh.edges.begin(), mesh.edges.end(), key) - mesh.edges.begin());
  };
  auto face_index = [&](const std::array<int, 3> &key) {
    return static_cast<int>(std::lower_bound(mesh.faces.begin(), mesh.faces.end(), key) - mesh.faces.begin());
  };

  const std::size_t nt = mesh.tets.size();
  mesh.tet_edges.assign(nt, {});
  mesh.tet_edge_signs.assign(nt, {});
  mesh.tet_faces.assign(nt, {});
  mesh.tet_face_perms.assign(nt, {});
  std::vector<int> face_count(mesh.faces.size(), 0);
  for (std::size_t t = 0; t < nt; ++t)
  {
    const auto &tet = mesh.tets[t];
    for (int k = 0; k < 6; ++k)
    {
      const int a = tet[kLocalEdges[k][0]], b = tet[kLocalEdges[k][1]];
      mesh.tet_edges[t][k] = edge_index(a, b);
      mesh.tet_edge_signs[t][k] = a < b ? 1 : -1;
    }
    for (int k = 0; k < 4; ++k)
    {
      const int a = tet[kLocalFaces[k][0]], b = tet[kLocalFaces[k][1]], c = tet[kLocalFaces[k][2]];
      const int f = face_index(all_faces[4 * t + k]);
      mesh.tet_faces[t][k] = f;
      mesh.tet_face_perms[t][k] = static_cast<std::int8_t>(FacePermutationCode(a, b, c));
      if (++face_count[f] > 2)
      {
        throw Error(ErrorCode::NonManifoldFace, "face " + std::to_string(f) + " is shared by more than two tets");
      }
    }
  }

  mesh.vertex_on_boundary.assign(nv, 0);
  mesh.edge_on_boundary.assign(mesh.edges.size(), 0);
  mesh.face_on_boundary.assign(mesh.faces.size(), 0);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f)
  {
    if (face_count[f] != 1)
    {
      continue;
    }
    mesh.face_on_boundary[f] = 1;
    const auto &fv = mesh.faces[f];
    for (int v : fv)
    {
      mesh.vertex_on_boundary[v] = 1;
    }
    mesh.edge_on_boundary[edge_index(fv[0], fv[1])] = 1;
    mesh.edge_on_boundary[edge_index(fv[0], fv[2])] = 1;
    mesh.edge_on_boundary[edge_index(fv[1], fv[2])] = 1;
  }
}

void ValidateMesh(const TetMesh &mesh)
{
  std::vector<int> face_count(mesh.faces.size(), 0);
  for (std::size_t t = 0; t < mesh.tets.size(); ++t)
  {
    if (!(mesh.SignedVolume(t) > 0.0))
    {
      throw Error(ErrorCode::InvertedTet, "tet " + std::to_string(t) + " has non-positive signed volume");
    }
    for (int f : mesh.tet_faces[t])
    {
      ++face_count[f];
    }
  }
  for (std::size_t f = 0; f < mesh.faces.size(); ++f)
  {
    if (face_count[f] < 1 || face_count[f] > 2)
    {
      throw Error(ErrorCode::NonManifoldFace, "face " + std::to_string(f) + " has " +
                                                  std::to_string(face_count[f]) + " neighbours");
    }
    if ((face_count[f] == 1) != (mesh.face_on_boundary[f] == 1))
    {
      throw Error(ErrorCode::InvalidArgument, "boundary flag of face " + std::to_string(f) + " is inconsistent");
    }
  }
}

void WriteMeshText(const TetMesh &mesh, std::ostream &os)
{
  std::ostringstream buf;
  buf.precision(17);
  for (const auto &v : mesh.vertices)
  {
    buf << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  }
  for (const auto &t : mesh.tets)
  {
    buf << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  }
  os << buf.str();
}

TetMesh ReadMeshText(std::istream &is)
{
  TetMesh mesh;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line))
  {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#')
    {
      continue;
    }
    if (tag == "v")
    {
      Vec3 p;
      if (!(ls >> p.x() >> p.y() >> p.z()))
      {
        throw Error(ErrorCode::Io, "malformed vertex on line " + std::to_string(lineno));
      }
      mesh.vertices.push_back(p);
    }
    else if (tag == "t")
    {
      std::array<int, 4> t{};
      if (!(ls >> t[0] >> t[1] >> t[2] >> t[3]))
      {
        throw Error(ErrorCode::Io, "malformed tet on line " + std::to_string(lineno));
      }
      mesh.tets.push_back(t);
    }
    else
    {
      throw Error(ErrorCode::Io, "unknown record \"" + tag + "\" on line " + std::to_string(lineno));
    }
  }
  BuildTopology(mesh);
  for (const auto &e : mesh.edges)
  {
    mesh.h = std::max(mesh.h, (mesh.vertices[e[1]] - mesh.vertices[e[0]]).norm());
  }
  return mesh;
}

}  // namespace maxtev
