// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace maxtev
{

using Vec3 = Eigen::Vector3d;

enum class Domain
{
  Cube,    // (0,1)^3
  ThickL,  // ((-1,1)^2 \ (-1,0]^2) x (0,1)
};

const char *DomainName(Domain d);
Domain ParseDomain(const std::string &name);

// Local edge k of a tet joins local vertices kLocalEdges[k][0] < kLocalEdges[k][1].
inline constexpr std::array<std::array<int, 2>, 6> kLocalEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
// Local face k is opposite local vertex k.
inline constexpr std::array<std::array<int, 3>, 4> kLocalFaces = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

//
// Conforming tetrahedral mesh with full edge/face incidence. Edges are stored
// with first index < second, faces with ascending vertex indices; that global
// ordering fixes the orientation of every edge and face degree of freedom.
//
struct TetMesh
{
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;

  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::array<int, 6>> tet_edges;
  // +1 if the local edge direction (lower local index to higher) agrees with
  // the global low->high direction.
  std::vector<std::array<std::int8_t, 6>> tet_edge_signs;
  std::vector<std::array<int, 4>> tet_faces;
  // Index into the 6 permutations of 3 items: which local face vertex holds
  // the smallest, middle and largest global index (see FacePermutationCode).
  std::vector<std::array<std::int8_t, 4>> tet_face_perms;

  std::vector<std::uint8_t> vertex_on_boundary;
  std::vector<std::uint8_t> edge_on_boundary;
  std::vector<std::uint8_t> face_on_boundary;

  double h = 0.0;
  int n = 0;
  Domain domain = Domain::Cube;

  std::size_t NumVertices() const { return vertices.size(); }
  std::size_t NumEdges() const { return edges.size(); }
  std::size_t NumFaces() const { return faces.size(); }
  std::size_t NumTets() const { return tets.size(); }
  std::size_t NumBoundaryVertices() const;
  std::size_t NumBoundaryEdges() const;
  std::size_t NumBoundaryFaces() const;

  double SignedVolume(std::size_t t) const;
  Vec3 Barycenter(std::size_t t) const;
  long EulerCharacteristic() const
  {
    return static_cast<long>(NumVertices()) - static_cast<long>(NumEdges()) +
           static_cast<long>(NumFaces()) - static_cast<long>(NumTets());
  }
};

// Permutation code in [0, 6) of three distinct global indices given in local order.
int FacePermutationCode(int a, int b, int c);

// Unit cube with n^3 cubes of side 1/n, each split into 12 tets around its center.
TetMesh BuildCubeMesh(int n);

// Thick L prism with 3 n^3 cubes of side 1/n, same per-cube subdivision.
TetMesh BuildThickLMesh(int n);

TetMesh BuildMesh(Domain domain, int n);

// Completes a mesh holding only vertices and tets: edges, faces, incidence,
// orientation data and boundary flags.
void BuildTopology(TetMesh &mesh);

// Throws unless every tet is positively oriented, every face has one or two
// neighbours and boundary flags are consistent.
void ValidateMesh(const TetMesh &mesh);

// "v x y z" / "t i0 i1 i2 i3" lines, 0-based indices.
void WriteMeshText(const TetMesh &mesh, std::ostream &os);
TetMesh ReadMeshText(std::istream &is);

}  // namespace maxtev
