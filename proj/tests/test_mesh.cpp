// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include "doctest.h"
#include "errors.hpp"
#include "mesh.hpp"

using namespace maxtev;

namespace
{

// Counts of the 12-tets-per-cube subdivision, from the lattice directly.
struct Counts
{
  long v, e, f, t, bf;
};

Counts CubeCounts(long n)
{
  const long v = (n + 1) * (n + 1) * (n + 1) + n * n * n;
  const long e = 3 * n * (n + 1) * (n + 1) + 3 * n * n * (n + 1) + 8 * n * n * n;
  const long t = 12 * n * n * n;
  return {v, e, 1 - v + e + t, t, 12 * n * n};
}

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

TEST_CASE("cube mesh counts follow the lattice formulas")
{
  for (int n = 1; n <= 4; ++n)
  {
    const TetMesh m = BuildCubeMesh(n);
    const Counts c = CubeCounts(n);
    CHECK(static_cast<long>(m.NumVertices()) == c.v);
    CHECK(static_cast<long>(m.NumEdges()) == c.e);
    CHECK(static_cast<long>(m.NumFaces()) == c.f);
    CHECK(static_cast<long>(m.NumTets()) == c.t);
    CHECK(static_cast<long>(m.NumBoundaryFaces()) == c.bf);
    CHECK(m.EulerCharacteristic() == 1);
    CHECK(m.h == doctest::Approx(1.0 / n));
    CHECK_NOTHROW(ValidateMesh(m));
  }
}

TEST_CASE("thick L mesh counts")
{
  for (int n = 1; n <= 3; ++n)
  {
    const TetMesh m = BuildThickLMesh(n);
    const long section = (2L * n + 1) * (2L * n + 1) - 1L * n * n;
    CHECK(static_cast<long>(m.NumVertices()) == section * (n + 1) + 3L * n * n * n);
    CHECK(static_cast<long>(m.NumTets()) == 36L * n * n * n);
    CHECK(m.EulerCharacteristic() == 1);
    CHECK_NOTHROW(ValidateMesh(m));
    // Caps 2 x 3n^2 squares, walls (perimeter 8) x height 1: 8n^2 squares; two triangles each.
    CHECK(static_cast<long>(m.NumBoundaryFaces()) == 2L * (6L * n * n + 8L * n * n));
  }
}

TEST_CASE("every tet has positive volume and volumes sum to the domain")
{
  for (Domain d : {Domain::Cube, Domain::ThickL})
  {
    const TetMesh m = BuildMesh(d, 2);
    double vol = 0.0;
    for (std::size_t t = 0; t < m.NumTets(); ++t)
    {
      CHECK(m.SignedVolume(t) > 0.0);
      vol += m.SignedVolume(t);
    }
    CHECK(vol == doctest::Approx(d == Domain::Cube ? 1.0 : 3.0).epsilon(1e-13));
  }
}

TEST_CASE("text round trip preserves the mesh")
{
  const TetMesh m = BuildThickLMesh(1);
  std::stringstream ss;
  WriteMeshText(m, ss);
  const TetMesh r = ReadMeshText(ss);
  REQUIRE(r.NumVertices() == m.NumVertices());
  REQUIRE(r.NumTets() == m.NumTets());
  CHECK(r.NumEdges() == m.NumEdges());
  CHECK(r.NumFaces() == m.NumFaces());
  for (std::size_t i = 0; i < m.NumVertices(); ++i)
  {
    CHECK((r.vertices[i] - m.vertices[i]).norm() == 0.0);
  }
  CHECK(r.tets == m.tets);
}

TEST_CASE("malformed input is rejected")
{
  std::stringstream bad("v 0 0 0\nt 0 1\n");
  CHECK(CodeOf([&] { ReadMeshText(bad); }) == ErrorCode::Io);

  TetMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  m.tets = {{0, 2, 1, 3}};
  CHECK(CodeOf([&] {
          BuildTopology(m);
          ValidateMesh(m);
        }) == ErrorCode::InvertedTet);
}

TEST_CASE("domain names")
{
  CHECK(ParseDomain("cube") == Domain::Cube);
  CHECK(ParseDomain("thickL") == Domain::ThickL);
  CHECK(CodeOf([] { ParseDomain("sphere"); }) == ErrorCode::InvalidArgument);
}
