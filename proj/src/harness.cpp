// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "elements.hpp"
#include "errors.hpp"

namespace maxtev
{

namespace
{

struct PresetRow
{
  const char *name;
  Domain domain;
  int order;
  const char *A;
  const char *N;
  int n_first, n_last;
  double lo, hi;
  ReferenceMode reference;
  const char *companion;
};

// clang-format off
constexpr PresetRow kPresets[] = {
    {"table1-case1", Domain::Cube,   0, "two_I", "sixteen_I", 6, 11, 1.0, 1.6, ReferenceMode::Given, "table3-case1"},
    {"table1-case2", Domain::Cube,   0, "F1",    "F2",        6, 11, 4.0, 5.0, ReferenceMode::Given, "table3-case2"},
    {"table1-case3", Domain::Cube,   0, "F4",    "F3",        6, 11, 3.6, 4.6, ReferenceMode::Given, "table3-case3"},
    {"table2-case1", Domain::ThickL, 0, "two_I", "sixteen_I", 4, 9,  0.6, 1.2, ReferenceMode::Given, "table4-case1"},
    {"table2-case2", Domain::ThickL, 0, "F1",    "F2",        4, 9,  2.8, 3.5, ReferenceMode::Given, "table4-case2"},
    {"table2-case3", Domain::ThickL, 0, "F4",    "F3",        4, 9,  2.4, 3.5, ReferenceMode::Given, "table4-case3"},
    {"table3-case1", Domain::Cube,   1, "two_I", "sixteen_I", 3, 8,  1.0, 1.6, ReferenceMode::Extrapolate, ""},
    {"table3-case2", Domain::Cube,   1, "F1",    "F2",        3, 8,  4.0, 5.0, ReferenceMode::Extrapolate, ""},
    {"table3-case3", Domain::Cube,   1, "F4",    "F3",        3, 8,  3.6, 4.6, ReferenceMode::Extrapolate, ""},
    {"table4-case1", Domain::ThickL, 1, "two_I", "sixteen_I", 1, 6,  0.6, 1.2, ReferenceMode::None, ""},
    {"table4-case2", Domain::ThickL, 1, "F1",    "F2",        1, 6,  2.8, 3.5, ReferenceMode::None, ""},
    {"table4-case3", Domain::ThickL, 1, "F4",    "F3",        1, 6,  2.4, 3.5, ReferenceMode::None, ""},
};
// clang-format on

constexpr int kMaxNev = 64;

std::string Format(const char *fmt, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string FormatK(cplx k, int digits)
{
  char buf[96];
  if (k.imag() == 0.0)
  {
    std::snprintf(buf, sizeof buf, "%.*f", digits, k.real());
  }
  else
  {
    std::snprintf(buf, sizeof buf, "%.*f%+.*fi", digits, k.real(), digits, k.imag());
  }
  return buf;
}

// Complex field sum_i x_i phi_i at reference point xhat of tet t.
Eigen::Vector3cd EvaluateField(const TetMesh &mesh, const SingleFieldDofs &dofs, int order, const CVec &coeffs,
                               std::size_t t, const Vec3 &xhat)
{
  const EdgeElement &el = EdgeElementFor(order, VertexRanks(mesh.tets[t]));
  const TetGeometry geo = TetGeometry::FromMesh(mesh, t);
  std::vector<Vec3> values(el.size()), curls(el.size());
  el.Evaluate(xhat, values, curls);
  const auto gd = dofs.TetDofs(t);
  Eigen::Vector3cd u = Eigen::Vector3cd::Zero();
  for (int i = 0; i < el.size(); ++i)
  {
    u += coeffs(gd[i]) * geo.PushValue(values[i]).cast<cplx>();
  }
  return u;
}

CVec ComponentCoefficients(const CoupledFieldSpace &H, const CVec &x, FieldComponent which)
{
  if (x.size() != H.dim())
  {
    std::ostringstream os;
    os << "vector of length " << x.size() << " does not match the coupled space (dim " << H.dim() << ")";
    throw Error(ErrorCode::SpaceMismatch, os.str());
  }
  switch (which)
  {
    case FieldComponent::V:
      return H.ExtractV(x);
    case FieldComponent::W:
      return H.ExtractW(x);
    case FieldComponent::WMinusV:
      break;
  }
  return H.ExtractW(x) - H.ExtractV(x);
}

}  // namespace

std::vector<std::string> PresetExperimentNames()
{
  std::vector<std::string> out;
  for (const auto &p : kPresets)
  {
    out.emplace_back(p.name);
  }
  return out;
}

ExperimentConfig PresetExperiment(const std::string &name)
{
  for (const auto &p : kPresets)
  {
    if (name != p.name)
    {
      continue;
    }
    ExperimentConfig c;
    c.name = p.name;
    c.domain = p.domain;
    c.order = p.order;
    c.A = p.A;
    c.N = p.N;
    for (int n = p.n_first; n <= p.n_last; ++n)
    {
      c.ns.push_back(n);
    }
    c.k_window = {p.lo, p.hi};
    c.reference = p.reference;
    c.companion = p.companion;
    return c;
  }
  std::string known;
  for (const auto &p : kPresets)
  {
    known += known.empty() ? "" : ", ";
    known += p.name;
  }
  throw Error(ErrorCode::UnknownPreset, "unknown preset '" + name + "' (known: " + known + ")");
}

WindowSolve SolveLowestInWindow(const Pencil &pencil, std::pair<double, double> window, int count,
                                SolveOptions opts)
{
  const auto [lo, hi] = window;
  if (!(lo >= 0.0 && hi > lo))
  {
    throw Error(ErrorCode::InvalidArgument, "k window must satisfy 0 <= lo < hi");
  }
  if (count < 1)
  {
    throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
  }
  const ShiftedFactorization factorization(pencil, opts.shift, opts.allow_real_factorization);
  const cplx sigma = factorization.shift();
  const int limit = std::min(kMaxNev, std::max(1, pencil.n_field - pencil.n_mult));

  WindowSolve out;
  for (int nev = std::min(std::max(opts.nev, count + 4), limit);; nev = std::min(2 * nev, limit))
  {
    opts.nev = nev;
    out.raw = ShiftInvertSolve(pencil, factorization, opts);
    out.nev_used = nev;
    out.pairs.clear();
    for (const auto &p : out.raw.pairs)
    {
      if (p.k.real() >= lo && p.k.real() <= hi)
      {
        out.pairs.push_back(p);
      }
    }
    // Everything with Re k between lo and the count-th accepted value must lie
    // inside the disc the solve has certainly resolved.
    const double kc =
        static_cast<int>(out.pairs.size()) >= count ? out.pairs[count - 1].k.real() : hi;
    const double need = 1.1 * std::max(std::abs(lo * lo - sigma), std::abs(kc * kc - sigma));
    double reach = 0.0;
    for (const auto &p : out.raw.pairs)
    {
      reach = std::max(reach, std::abs(p.lambda - sigma));
    }
    out.covered = out.raw.converged && reach >= need;
    if (out.covered || nev >= limit)
    {
      break;
    }
  }
  if (out.pairs.empty())
  {
    std::ostringstream os;
    os << "no eigenvalues with Re k in [" << lo << ", " << hi << "] near shift " << sigma;
    throw Error(ErrorCode::NoEigenvaluesInWindow, os.str());
  }
  if (static_cast<int>(out.pairs.size()) > count)
  {
    out.pairs.resize(count);
  }
  return out;
}

ConvergenceTable RunConvergence(const ExperimentConfig &config, const ProgressFn &progress)
{
  if (config.ns.empty())
  {
    throw Error(ErrorCode::InvalidArgument, "empty n list");
  }
  for (std::size_t i = 0; i < config.ns.size(); ++i)
  {
    if (config.ns[i] < 1 || (i > 0 && config.ns[i] <= config.ns[i - 1]))
    {
      throw Error(ErrorCode::InvalidArgument, "n list must be positive and strictly increasing");
    }
  }
  const CoefficientField A = ParseCoefficient(config.A);
  const CoefficientField N = ParseCoefficient(config.N);

  ConvergenceTable table;
  table.config = config;
  const auto [lo, hi] = config.k_window;
  const double mid = 0.5 * (lo + hi);
  for (int n : config.ns)
  {
    try
    {
      const Discretization d = Discretize(config.domain, n, config.order, A, N);
      SolveOptions opts;
      opts.shift = config.shift.value_or(cplx(mid * mid, 0.0));
      opts.nev = config.nev;
      opts.tol = config.tol;
      const WindowSolve ws = SolveLowestInWindow(d.pencil, config.k_window, config.count, opts);

      ConvergenceRow row;
      row.n = n;
      row.h = d.mesh->h;
      row.dofs = d.pencil.n_field;
      row.mult_dofs = d.pencil.n_mult;
      for (const auto &p : ws.pairs)
      {
        row.k.push_back(p.k);
        row.conjugate_pair.push_back(p.conjugate_pair);
        row.max_residual = std::max(row.max_residual, p.residual);
        row.max_constraint = std::max(row.max_constraint, p.constraint);
        row.max_multiplier = std::max(row.max_multiplier, p.multiplier);
      }
      if (progress)
      {
        std::ostringstream os;
        os << config.name << " n=" << n << " dofs=" << row.dofs << " nev=" << ws.nev_used;
        for (cplx k : row.k)
        {
          os << ' ' << FormatK(k, 6);
        }
        if (!ws.covered)
        {
          os << " (window not fully resolved)";
        }
        progress(os.str());
      }
      table.rows.push_back(std::move(row));
    }
    catch (const Error &e)
    {
      throw Error(e.code(), "n=" + std::to_string(n) + ": " + e.what());
    }
  }

  std::vector<std::optional<cplx>> ref;
  if (config.reference == ReferenceMode::Given)
  {
    if (!config.reference_values.empty())
    {
      ref.assign(config.reference_values.begin(), config.reference_values.end());
    }
    else if (!config.companion.empty())
    {
      const ExperimentConfig companion = PresetExperiment(config.companion);
      const ConvergenceTable ct = RunConvergence(companion, progress);
      ref = TableReference(ct, companion.reference == ReferenceMode::None ? ReferenceMode::Finest
                                                                         : companion.reference);
    }
  }
  else
  {
    ref = TableReference(table, config.reference);
  }
  ApplyReference(table, ref);
  return table;
}

std::vector<std::optional<cplx>> TableReference(const ConvergenceTable &table, ReferenceMode mode)
{
  const int count = table.config.count;
  std::vector<std::optional<cplx>> ref(count);
  if (table.rows.empty())
  {
    return ref;
  }
  for (int j = 0; j < count; ++j)
  {
    std::vector<cplx> values;
    std::vector<double> h;
    for (const auto &row : table.rows)
    {
      if (static_cast<int>(row.k.size()) > j)
      {
        values.push_back(row.k[j]);
        h.push_back(row.h);
      }
    }
    switch (mode)
    {
      case ReferenceMode::Extrapolate:
        if (values.size() >= 3)
        {
          ref[j] = ExtrapolateReference(values, h);
        }
        break;
      case ReferenceMode::Finest:
        if (static_cast<int>(table.rows.back().k.size()) > j)
        {
          ref[j] = table.rows.back().k[j];
        }
        break;
      case ReferenceMode::Given:
        if (j < static_cast<int>(table.config.reference_values.size()))
        {
          ref[j] = table.config.reference_values[j];
        }
        break;
      case ReferenceMode::None:
        break;
    }
  }
  return ref;
}

void ApplyReference(ConvergenceTable &table, const std::vector<std::optional<cplx>> &reference)
{
  const int count = table.config.count;
  table.reference.assign(count, std::nullopt);
  for (int j = 0; j < count && j < static_cast<int>(reference.size()); ++j)
  {
    table.reference[j] = reference[j];
  }
  table.rates.assign(table.rows.size(), std::vector<std::optional<double>>(count));
  for (int j = 0; j < count; ++j)
  {
    if (!table.reference[j])
    {
      continue;
    }
    for (std::size_t i = 1; i < table.rows.size(); ++i)
    {
      const auto &prev = table.rows[i - 1];
      const auto &cur = table.rows[i];
      if (static_cast<int>(prev.k.size()) <= j || static_cast<int>(cur.k.size()) <= j)
      {
        continue;
      }
      try
      {
        table.rates[i][j] = ConvergenceRate(*table.reference[j], prev.k[j], cur.k[j], prev.h, cur.h);
      }
      catch (const Error &)
      {
        // Undefined rate: printed as "--".
      }
    }
  }
}

cplx ExtrapolateReference(const std::vector<cplx> &values, const std::vector<double> &h)
{
  if (values.size() != h.size())
  {
    throw Error(ErrorCode::DimensionMismatch, "values and mesh sizes differ in length");
  }
  if (values.size() < 3)
  {
    throw Error(ErrorCode::InsufficientData, "extrapolation needs at least 3 values");
  }
  for (std::size_t i = 1; i < h.size(); ++i)
  {
    if (!(h[i] < h[i - 1]) || !(h[i] > 0.0))
    {
      throw Error(ErrorCode::InsufficientData, "mesh sizes must be positive and strictly decreasing");
    }
  }
  cplx mean = 0.0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
  {
    const double d4 = std::pow(h[i], 4) - std::pow(h[i + 1], 4);
    mean += (values[i] - values[i + 1]) / d4;
  }
  mean /= static_cast<double>(values.size() - 1);
  return values.back() - mean * std::pow(h.back(), 4);
}

double ConvergenceRate(cplx reference, cplx previous, cplx current, double h_previous, double h_current)
{
  const double scale = std::max(std::abs(reference), 1.0);
  const double e0 = std::abs(reference - previous);
  const double e1 = std::abs(reference - current);
  if (e0 <= 1e-14 * scale || e1 <= 1e-14 * scale)
  {
    throw Error(ErrorCode::DegenerateError, "error relative to the reference vanishes; rate undefined");
  }
  if (!(h_previous > 0.0 && h_current > 0.0) || h_previous == h_current)
  {
    throw Error(ErrorCode::DegenerateError, "mesh sizes must be positive and distinct");
  }
  return (std::log(e1) - std::log(e0)) / (std::log(h_current) - std::log(h_previous));
}

std::vector<std::optional<double>> ComputeRates(const std::vector<cplx> &values, const std::vector<double> &h,
                                                cplx reference)
{
  if (values.size() != h.size())
  {
    throw Error(ErrorCode::DimensionMismatch, "values and mesh sizes differ in length");
  }
  std::vector<std::optional<double>> out(values.size());
  for (std::size_t i = 1; i < values.size(); ++i)
  {
    try
    {
      out[i] = ConvergenceRate(reference, values[i - 1], values[i], h[i - 1], h[i]);
    }
    catch (const Error &)
    {
    }
  }
  return out;
}

void ConvergenceTable::WriteCsv(std::ostream &os) const
{
  const int count = config.count;
  os << "n,h,dofs,mult_dofs";
  for (int j = 1; j <= count; ++j)
  {
    os << ",re_k" << j << ",im_k" << j;
  }
  for (int j = 1; j <= count; ++j)
  {
    os << ",rate_k" << j;
  }
  os << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    const auto &r = rows[i];
    os << r.n << ',' << Format("%.10f", r.h) << ',' << r.dofs << ',' << r.mult_dofs;
    for (int j = 0; j < count; ++j)
    {
      if (j < static_cast<int>(r.k.size()))
      {
        os << ',' << Format("%.10f", r.k[j].real()) << ',' << Format("%.10f", r.k[j].imag());
      }
      else
      {
        os << ",,";
      }
    }
    for (int j = 0; j < count; ++j)
    {
      const bool has = i < rates.size() && j < static_cast<int>(rates[i].size()) && rates[i][j];
      os << ',' << (has ? Format("%.4f", *rates[i][j]) : std::string("--"));
    }
    os << '\n';
  }
  os << "ref,,,";
  for (int j = 0; j < count; ++j)
  {
    if (j < static_cast<int>(reference.size()) && reference[j])
    {
      os << ',' << Format("%.10f", reference[j]->real()) << ',' << Format("%.10f", reference[j]->imag());
    }
    else
    {
      os << ",--,--";
    }
  }
  for (int j = 0; j < count; ++j)
  {
    os << ",--";
  }
  os << '\n';
}

void ConvergenceTable::WriteText(std::ostream &os) const
{
  const int count = config.count;
  const int digits = config.order == 0 ? 5 : 6;
  os << config.name << (config.name.empty() ? "" : ": ") << DomainName(config.domain) << ", order "
     << config.order << ", A=" << config.A << ", N=" << config.N << ", k window [" << config.k_window.first
     << ", " << config.k_window.second << "]\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-6s %8s", "h", "dofs");
  os << buf;
  for (int j = 1; j <= count; ++j)
  {
    std::snprintf(buf, sizeof buf, " %22s %6s", ("k" + std::to_string(j)).c_str(), ("r" + std::to_string(j)).c_str());
    os << buf;
  }
  os << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    const auto &r = rows[i];
    std::snprintf(buf, sizeof buf, "%-6s %8ld", ("1/" + std::to_string(r.n)).c_str(), r.dofs);
    os << buf;
    for (int j = 0; j < count; ++j)
    {
      const std::string k = j < static_cast<int>(r.k.size()) ? FormatK(r.k[j], digits) : "-";
      const bool has = i < rates.size() && j < static_cast<int>(rates[i].size()) && rates[i][j];
      std::snprintf(buf, sizeof buf, " %22s %6s", k.c_str(), has ? Format("%.2f", *rates[i][j]).c_str() : "--");
      os << buf;
    }
    os << '\n';
  }
  bool any = false;
  for (const auto &ref : reference)
  {
    any = any || ref.has_value();
  }
  if (any)
  {
    std::snprintf(buf, sizeof buf, "%-6s %8s", "ref", "");
    os << buf;
    for (int j = 0; j < count; ++j)
    {
      const bool has = j < static_cast<int>(reference.size()) && reference[j];
      std::snprintf(buf, sizeof buf, " %22s %6s", has ? FormatK(*reference[j], digits).c_str() : "--", "");
      os << buf;
    }
    os << '\n';
  }
}

std::vector<Vec3> CellFieldValues(const CoupledFieldSpace &H, const CVec &x, FieldComponent which)
{
  const CVec coeffs = ComponentCoefficients(H, x, which);
  const TetMesh &mesh = H.mesh();
  const Vec3 center(0.25, 0.25, 0.25);
  std::vector<Vec3> out(mesh.NumTets());
  double vmax = 0.0;
  for (std::size_t t = 0; t < mesh.NumTets(); ++t)
  {
    out[t] = EvaluateField(mesh, H.field(), H.order(), coeffs, t, center).real();
    vmax = std::max(vmax, out[t].cwiseAbs().maxCoeff());
  }
  if (vmax > 0.0)
  {
    for (auto &v : out)
    {
      v /= vmax;
    }
  }
  return out;
}

double BoundaryTangentialRatio(const CoupledFieldSpace &H, const CVec &x)
{
  const CVec coeffs = ComponentCoefficients(H, x, FieldComponent::WMinusV);
  const TetMesh &mesh = H.mesh();
  const Vec3 ref_vertices[4] = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  double interior = 0.0;
  double tangential = 0.0;
  for (std::size_t t = 0; t < mesh.NumTets(); ++t)
  {
    interior = std::max(interior,
                        EvaluateField(mesh, H.field(), H.order(), coeffs, t, Vec3(0.25, 0.25, 0.25)).norm());
    for (int k = 0; k < 4; ++k)
    {
      if (!mesh.face_on_boundary[mesh.tet_faces[t][k]])
      {
        continue;
      }
      const auto &lf = kLocalFaces[k];
      const Vec3 xhat = (ref_vertices[lf[0]] + ref_vertices[lf[1]] + ref_vertices[lf[2]]) / 3.0;
      const Vec3 &p0 = mesh.vertices[mesh.tets[t][lf[0]]];
      const Vec3 &p1 = mesh.vertices[mesh.tets[t][lf[1]]];
      const Vec3 &p2 = mesh.vertices[mesh.tets[t][lf[2]]];
      const Eigen::Vector3cd nu = (p1 - p0).cross(p2 - p0).normalized().cast<cplx>();
      const Eigen::Vector3cd u = EvaluateField(mesh, H.field(), H.order(), coeffs, t, xhat);
      const Eigen::Vector3cd ut = u - nu * nu.dot(u);
      tangential = std::max(tangential, ut.norm());
    }
  }
  return interior > 0.0 ? tangential / interior : 0.0;
}

void WriteVtk(std::ostream &os, const TetMesh &mesh,
              const std::vector<std::pair<std::string, std::vector<Vec3>>> &cell_vectors)
{
  for (const auto &[name, values] : cell_vectors)
  {
    if (values.size() != mesh.NumTets())
    {
      throw Error(ErrorCode::DimensionMismatch, "cell field '" + name + "' does not have one value per tet");
    }
  }
  os << "# vtk DataFile Version 3.0\nmaxtev\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.NumVertices() << " double\n";
  for (const auto &v : mesh.vertices)
  {
    os << Format("%.17g", v.x()) << ' ' << Format("%.17g", v.y()) << ' ' << Format("%.17g", v.z()) << '\n';
  }
  os << "CELLS " << mesh.NumTets() << ' ' << 5 * mesh.NumTets() << '\n';
  for (const auto &t : mesh.tets)
  {
    os << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  }
  os << "CELL_TYPES " << mesh.NumTets() << '\n';
  for (std::size_t t = 0; t < mesh.NumTets(); ++t)
  {
    os << "10\n";
  }
  if (cell_vectors.empty())
  {
    return;
  }
  os << "CELL_DATA " << mesh.NumTets() << '\n';
  for (const auto &[name, values] : cell_vectors)
  {
    os << "VECTORS " << name << " double\n";
    for (const auto &v : values)
    {
      os << Format("%.10g", v.x()) << ' ' << Format("%.10g", v.y()) << ' ' << Format("%.10g", v.z()) << '\n';
    }
  }
}

long ReadVtkCellCount(std::istream &is)
{
  std::string token;
  while (is >> token)
  {
    if (token == "CELLS")
    {
      long cells = -1;
      if (is >> cells && cells >= 0)
      {
        return cells;
      }
      break;
    }
  }
  throw Error(ErrorCode::Io, "no CELLS section in VTK input");
}

}  // namespace maxtev
