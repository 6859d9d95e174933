// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include "maxtev/maxtev.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <unistd.h>

#include "discretization.hpp"
#include "eigensolver.hpp"
#include "errors.hpp"
#include "harness.hpp"
#include "parallel.hpp"
#include "verification.hpp"

struct maxtev_mesh
{
  std::shared_ptr<const maxtev::TetMesh> mesh;
};

struct maxtev_problem
{
  maxtev::Discretization d;
};

struct maxtev_result
{
  std::vector<maxtev::EigenPair> pairs;
  bool converged = false;
  int n_field = 0;
  int n_mult = 0;
};

struct maxtev_table
{
  maxtev::ConvergenceTable table;
};

struct maxtev_report
{
  maxtev::PropertyReport report;
};

namespace
{

thread_local std::string g_last_error;

maxtev_status Fail(maxtev_status status, const std::string &message)
{
  g_last_error = message;
  return status;
}

template <typename Fn>
maxtev_status Guard(Fn &&fn)
{
  try
  {
    fn();
    g_last_error.clear();
    return MAXTEV_OK;
  }
  catch (const maxtev::Error &e)
  {
    return Fail(static_cast<maxtev_status>(static_cast<int>(e.code())), e.what());
  }
  catch (const std::bad_alloc &)
  {
    return Fail(MAXTEV_INTERNAL, "out of memory");
  }
  catch (const std::exception &e)
  {
    return Fail(MAXTEV_INTERNAL, e.what());
  }
}

void Require(bool ok, const char *what)
{
  if (!ok)
  {
    throw maxtev::Error(maxtev::ErrorCode::InvalidArgument, what);
  }
}

void WriteAtomic(const char *path, const std::string &content)
{
  Require(path != nullptr && *path, "output path is empty");
  if (std::strcmp(path, "-") == 0)
  {
    std::cout << content << std::flush;
    return;
  }
  const std::string target(path);
  const std::string tmp = target + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    os << content;
    os.flush();
    if (!os)
    {
      std::remove(tmp.c_str());
      throw maxtev::Error(maxtev::ErrorCode::Io, "cannot write " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), target.c_str()) != 0)
  {
    std::remove(tmp.c_str());
    throw maxtev::Error(maxtev::ErrorCode::Io, "cannot rename " + tmp + " to " + target);
  }
}

void CopyString(char *dst, std::size_t size, const std::string &src)
{
  Require(src.size() < size, "string field too long");
  std::memcpy(dst, src.c_str(), src.size() + 1);
}

maxtev::ExperimentConfig ToConfig(const maxtev_experiment &e)
{
  maxtev::ExperimentConfig c;
  c.name = e.name;
  c.domain = maxtev::ParseDomain(e.domain);
  c.order = e.order;
  c.A = e.A;
  c.N = e.N;
  Require(e.n_count >= 0 && e.n_count <= MAXTEV_MAX_NS, "n_count out of range");
  c.ns.assign(e.ns, e.ns + e.n_count);
  c.k_window = {e.k_lo, e.k_hi};
  if (e.has_shift)
  {
    c.shift = maxtev::cplx(e.shift_re, e.shift_im);
  }
  Require(e.count >= 1 && e.count <= MAXTEV_MAX_COUNT, "count out of range");
  c.count = e.count;
  c.nev = e.nev;
  c.tol = e.tol;
  c.reference = static_cast<maxtev::ReferenceMode>(e.reference);
  Require(e.reference_count >= 0 && e.reference_count <= MAXTEV_MAX_COUNT, "reference_count out of range");
  for (int j = 0; j < e.reference_count; ++j)
  {
    c.reference_values.emplace_back(e.reference_re[j], e.reference_im[j]);
  }
  c.companion = e.companion;
  return c;
}

void FromConfig(const maxtev::ExperimentConfig &c, maxtev_experiment *e)
{
  std::memset(e, 0, sizeof *e);
  CopyString(e->name, sizeof e->name, c.name);
  CopyString(e->domain, sizeof e->domain, maxtev::DomainName(c.domain));
  e->order = c.order;
  CopyString(e->A, sizeof e->A, c.A);
  CopyString(e->N, sizeof e->N, c.N);
  Require(c.ns.size() <= MAXTEV_MAX_NS, "too many mesh sizes");
  for (std::size_t i = 0; i < c.ns.size(); ++i)
  {
    e->ns[i] = c.ns[i];
  }
  e->n_count = static_cast<int>(c.ns.size());
  e->k_lo = c.k_window.first;
  e->k_hi = c.k_window.second;
  e->has_shift = c.shift.has_value();
  e->shift_re = c.shift.value_or(0.0).real();
  e->shift_im = c.shift.value_or(0.0).imag();
  e->count = c.count;
  e->nev = c.nev;
  e->tol = c.tol;
  e->reference = static_cast<maxtev_reference>(c.reference);
  e->reference_count = static_cast<int>(c.reference_values.size());
  for (std::size_t j = 0; j < c.reference_values.size(); ++j)
  {
    e->reference_re[j] = c.reference_values[j].real();
    e->reference_im[j] = c.reference_values[j].imag();
  }
  CopyString(e->companion, sizeof e->companion, c.companion);
}

const maxtev::EigenPair &PairAt(const maxtev_result *result, std::size_t i)
{
  Require(result != nullptr, "null result");
  if (i >= result->pairs.size())
  {
    throw maxtev::Error(maxtev::ErrorCode::InvalidArgument, "eigenpair index out of range");
  }
  return result->pairs[i];
}

maxtev::CVec FieldPart(const maxtev_problem *problem, const maxtev_result *result, std::size_t i)
{
  Require(problem != nullptr, "null problem");
  const auto &p = PairAt(result, i);
  if (result->n_field != problem->d.pencil.n_field || result->n_mult != problem->d.pencil.n_mult)
  {
    throw maxtev::Error(maxtev::ErrorCode::SpaceMismatch, "result was computed for a different problem");
  }
  return p.vec.head(result->n_field);
}

std::string FormatReport(const maxtev_report *report, const char *format)
{
  Require(report && format, "null argument");
  std::ostringstream os;
  const std::string f(format);
  if (f == "csv")
  {
    report->report.WriteCsv(os);
  }
  else if (f == "text")
  {
    report->report.WriteText(os);
  }
  else
  {
    throw maxtev::Error(maxtev::ErrorCode::InvalidArgument, "unknown report format '" + f + "' (csv, text)");
  }
  return os.str();
}

}  // namespace

extern "C" {

const char *maxtev_version(void) { return "0.1.0"; }

const char *maxtev_status_name(maxtev_status status)
{
  if (status == MAXTEV_OK)
  {
    return "Ok";
  }
  if (status == MAXTEV_INTERNAL)
  {
    return "Internal";
  }
  if (status >= MAXTEV_INVALID_ARGUMENT && status <= MAXTEV_IO)
  {
    return maxtev::ErrorCodeName(static_cast<maxtev::ErrorCode>(static_cast<int>(status)));
  }
  return "Unknown";
}

const char *maxtev_last_error(void) { return g_last_error.c_str(); }

maxtev_status maxtev_mesh_build(const char *domain, int n, maxtev_mesh **out)
{
  return Guard([&] {
    Require(domain && out, "null argument");
    auto m = std::make_unique<maxtev_mesh>();
    m->mesh = std::make_shared<const maxtev::TetMesh>(maxtev::BuildMesh(maxtev::ParseDomain(domain), n));
    *out = m.release();
  });
}

maxtev_status maxtev_mesh_read(const char *path, maxtev_mesh **out)
{
  return Guard([&] {
    Require(path && out, "null argument");
    std::ifstream is(path);
    if (!is)
    {
      throw maxtev::Error(maxtev::ErrorCode::Io, std::string("cannot open ") + path);
    }
    auto m = std::make_unique<maxtev_mesh>();
    m->mesh = std::make_shared<const maxtev::TetMesh>(maxtev::ReadMeshText(is));
    *out = m.release();
  });
}

maxtev_status maxtev_mesh_write(const maxtev_mesh *mesh, const char *path)
{
  return Guard([&] {
    Require(mesh != nullptr, "null mesh");
    std::ostringstream os;
    maxtev::WriteMeshText(*mesh->mesh, os);
    WriteAtomic(path, os.str());
  });
}

maxtev_status maxtev_mesh_write_vtk(const maxtev_mesh *mesh, const char *path)
{
  return Guard([&] {
    Require(mesh != nullptr, "null mesh");
    std::ostringstream os;
    maxtev::WriteVtk(os, *mesh->mesh, {});
    WriteAtomic(path, os.str());
  });
}

maxtev_status maxtev_mesh_get_info(const maxtev_mesh *mesh, maxtev_mesh_info *info)
{
  return Guard([&] {
    Require(mesh && info, "null argument");
    const auto &m = *mesh->mesh;
    info->vertices = static_cast<long>(m.NumVertices());
    info->edges = static_cast<long>(m.NumEdges());
    info->faces = static_cast<long>(m.NumFaces());
    info->tets = static_cast<long>(m.NumTets());
    info->boundary_vertices = static_cast<long>(m.NumBoundaryVertices());
    info->boundary_edges = static_cast<long>(m.NumBoundaryEdges());
    info->boundary_faces = static_cast<long>(m.NumBoundaryFaces());
    info->h = m.h;
    info->n = m.n;
  });
}

void maxtev_mesh_free(maxtev_mesh *mesh) { delete mesh; }

maxtev_status maxtev_coefficient_validate(const char *spec)
{
  return Guard([&] {
    Require(spec != nullptr, "null argument");
    maxtev::ParseCoefficient(spec);
  });
}

maxtev_status maxtev_problem_create(const maxtev_mesh *mesh, int order, const char *A, const char *N,
                                    int pinned_vertex, maxtev_problem **out)
{
  return Guard([&] {
    Require(mesh && A && N && out, "null argument");
    maxtev::DiscretizationOptions opts;
    opts.pinned_vertex = pinned_vertex;
    auto p = std::make_unique<maxtev_problem>();
    p->d = maxtev::Discretize(mesh->mesh, order, maxtev::ParseCoefficient(A), maxtev::ParseCoefficient(N), opts);
    *out = p.release();
  });
}

maxtev_status maxtev_problem_get_info(const maxtev_problem *problem, maxtev_problem_info *info)
{
  return Guard([&] {
    Require(problem && info, "null argument");
    const auto &d = problem->d;
    const auto ids = maxtev::ObserveIdentities(d);
    info->order = d.order;
    info->field_dofs = d.pencil.n_field;
    info->mult_dofs = d.pencil.n_mult;
    info->nnz_k = static_cast<long>(d.pencil.K.nonZeros());
    info->bcg = ids.bcg;
    info->ag = ids.ag;
    info->k_herm = ids.k_herm;
    info->m_herm = ids.m_herm;
  });
}

maxtev_status maxtev_problem_write_matrix(const maxtev_problem *problem, const char *which, const char *path)
{
  return Guard([&] {
    Require(problem && which, "null argument");
    const auto &d = problem->d;
    const std::string w(which);
    const maxtev::SpMat *m = w == "K"   ? &d.pencil.K
                             : w == "M" ? &d.pencil.M
                             : w == "A" ? &d.a
                             : w == "B" ? &d.b
                             : w == "C" ? &d.c
                             : w == "G" ? &d.G
                                        : nullptr;
    if (!m)
    {
      throw maxtev::Error(maxtev::ErrorCode::InvalidArgument, "unknown matrix '" + w + "' (K, M, A, B, C, G)");
    }
    std::ostringstream os;
    maxtev::WriteMatrixMarket(*m, os);
    WriteAtomic(path, os.str());
  });
}

maxtev_status maxtev_problem_dense_spectrum(const maxtev_problem *problem, double *re, double *im, size_t capacity,
                                            size_t *count)
{
  return Guard([&] {
    Require(problem && count, "null argument");
    const auto values = maxtev::DenseQZ(problem->d.pencil);
    *count = values.size();
    for (std::size_t i = 0; i < values.size() && i < capacity; ++i)
    {
      Require(re && im, "null output arrays");
      re[i] = values[i].real();
      im[i] = values[i].imag();
    }
  });
}

void maxtev_problem_free(maxtev_problem *problem) { delete problem; }

void maxtev_solve_options_init(maxtev_solve_options *opts)
{
  if (!opts)
  {
    return;
  }
  const maxtev::SolveOptions d;
  std::memset(opts, 0, sizeof *opts);
  opts->count = 4;
  opts->nev = 8;
  opts->tol = d.tol;
  opts->block_size = d.block_size;
  opts->seed = d.seed;
}

maxtev_status maxtev_solve(const maxtev_problem *problem, const maxtev_solve_options *opts, maxtev_result **out)
{
  return Guard([&] {
    Require(problem && opts && out, "null argument");
    Require(opts->count >= 1, "count must be >= 1");
    maxtev::SolveOptions so;
    so.nev = std::max(opts->nev, opts->count);
    so.tol = opts->tol;
    so.block_size = opts->block_size;
    so.seed = opts->seed;
    const double mid = 0.5 * (opts->k_lo + opts->k_hi);
    so.shift = opts->has_shift    ? maxtev::cplx(opts->shift_re, opts->shift_im)
               : opts->has_window ? maxtev::cplx(mid * mid, 0.0)
                                  : maxtev::cplx(0.0, 0.0);
    auto r = std::make_unique<maxtev_result>();
    const auto &pencil = problem->d.pencil;
    if (opts->has_window)
    {
      const auto ws = maxtev::SolveLowestInWindow(pencil, {opts->k_lo, opts->k_hi}, opts->count, so);
      r->pairs = ws.pairs;
      r->converged = ws.raw.converged && ws.covered;
    }
    else
    {
      const auto er = maxtev::ShiftInvertSolve(pencil, so);
      r->pairs = maxtev::SelectLowest(er, opts->count);
      r->converged = er.converged;
    }
    r->n_field = pencil.n_field;
    r->n_mult = pencil.n_mult;
    *out = r.release();
  });
}

size_t maxtev_result_size(const maxtev_result *result) { return result ? result->pairs.size() : 0; }

maxtev_status maxtev_result_get(const maxtev_result *result, size_t i, maxtev_eigenpair_info *info)
{
  return Guard([&] {
    Require(info != nullptr, "null argument");
    const auto &p = PairAt(result, i);
    info->k_re = p.k.real();
    info->k_im = p.k.imag();
    info->lambda_re = p.lambda.real();
    info->lambda_im = p.lambda.imag();
    info->residual = p.residual;
    info->constraint = p.constraint;
    info->multiplier = p.multiplier;
    info->conjugate_pair = p.conjugate_pair ? 1 : 0;
  });
}

int maxtev_result_converged(const maxtev_result *result) { return result && result->converged ? 1 : 0; }

maxtev_status maxtev_result_write_vtk(const maxtev_problem *problem, const maxtev_result *result, size_t i,
                                      const char *path)
{
  return Guard([&] {
    const maxtev::CVec x = FieldPart(problem, result, i);
    const auto &H = *problem->d.H;
    std::ostringstream os;
    maxtev::WriteVtk(os, H.mesh(),
                     {{"v", maxtev::CellFieldValues(H, x, maxtev::FieldComponent::V)},
                      {"w_minus_v", maxtev::CellFieldValues(H, x, maxtev::FieldComponent::WMinusV)},
                      {"w", maxtev::CellFieldValues(H, x, maxtev::FieldComponent::W)}});
    WriteAtomic(path, os.str());
  });
}

maxtev_status maxtev_result_tangential_ratio(const maxtev_problem *problem, const maxtev_result *result, size_t i,
                                             double *ratio)
{
  return Guard([&] {
    Require(ratio != nullptr, "null argument");
    *ratio = maxtev::BoundaryTangentialRatio(*problem->d.H, FieldPart(problem, result, i));
  });
}

void maxtev_result_free(maxtev_result *result) { delete result; }

size_t maxtev_preset_count(void) { return maxtev::PresetExperimentNames().size(); }

const char *maxtev_preset_name(size_t i)
{
  static const std::vector<std::string> names = maxtev::PresetExperimentNames();
  return i < names.size() ? names[i].c_str() : nullptr;
}

maxtev_status maxtev_experiment_preset(const char *name, maxtev_experiment *out)
{
  return Guard([&] {
    Require(name && out, "null argument");
    FromConfig(maxtev::PresetExperiment(name), out);
  });
}

maxtev_status maxtev_table_run(const maxtev_experiment *experiment, maxtev_progress_fn progress, void *user,
                               maxtev_table **out)
{
  return Guard([&] {
    Require(experiment && out, "null argument");
    maxtev::ProgressFn fn;
    if (progress)
    {
      fn = [progress, user](const std::string &m) { progress(m.c_str(), user); };
    }
    auto t = std::make_unique<maxtev_table>();
    t->table = maxtev::RunConvergence(ToConfig(*experiment), fn);
    *out = t.release();
  });
}

size_t maxtev_table_rows(const maxtev_table *table) { return table ? table->table.rows.size() : 0; }

maxtev_status maxtev_table_get_row(const maxtev_table *table, size_t i, maxtev_table_row *row)
{
  return Guard([&] {
    Require(table && row, "null argument");
    const auto &t = table->table;
    Require(i < t.rows.size(), "row index out of range");
    const auto &r = t.rows[i];
    std::memset(row, 0, sizeof *row);
    row->n = r.n;
    row->h = r.h;
    row->dofs = r.dofs;
    row->mult_dofs = r.mult_dofs;
    row->count = static_cast<int>(std::min<std::size_t>(r.k.size(), MAXTEV_MAX_COUNT));
    for (int j = 0; j < row->count; ++j)
    {
      row->k_re[j] = r.k[j].real();
      row->k_im[j] = r.k[j].imag();
      if (i < t.rates.size() && j < static_cast<int>(t.rates[i].size()) && t.rates[i][j])
      {
        row->has_rate[j] = 1;
        row->rate[j] = *t.rates[i][j];
      }
    }
    row->max_residual = r.max_residual;
    row->max_constraint = r.max_constraint;
    row->max_multiplier = r.max_multiplier;
  });
}

maxtev_status maxtev_table_get_reference(const maxtev_table *table, int j, double *re, double *im, int *has)
{
  return Guard([&] {
    Require(table && re && im && has, "null argument");
    const auto &ref = table->table.reference;
    *has = j >= 0 && j < static_cast<int>(ref.size()) && ref[j].has_value();
    *re = *has ? ref[j]->real() : 0.0;
    *im = *has ? ref[j]->imag() : 0.0;
  });
}

maxtev_status maxtev_table_write(const maxtev_table *table, const char *format, const char *path)
{
  return Guard([&] {
    Require(table && format, "null argument");
    std::ostringstream os;
    const std::string f(format);
    if (f == "csv")
    {
      table->table.WriteCsv(os);
    }
    else if (f == "text")
    {
      table->table.WriteText(os);
    }
    else
    {
      throw maxtev::Error(maxtev::ErrorCode::InvalidArgument, "unknown table format '" + f + "' (csv, text)");
    }
    WriteAtomic(path, os.str());
  });
}

void maxtev_table_free(maxtev_table *table) { delete table; }

maxtev_status maxtev_verify(const char *property, const char *domain, int order, const char *A, const char *N,
                            const int *ns, size_t n_count, maxtev_report **out)
{
  return Guard([&] {
    Require(property && domain && A && N && out && (ns || n_count == 0), "null argument");
    const maxtev::Domain dom = maxtev::ParseDomain(domain);
    const maxtev::CoefficientField a = maxtev::ParseCoefficient(A);
    const maxtev::CoefficientField n = maxtev::ParseCoefficient(N);
    const std::vector<int> sizes(ns, ns + n_count);
    const std::string p(property);
    auto r = std::make_unique<maxtev_report>();
    if (p == "t_coercivity_a")
    {
      r->report = maxtev::CheckTCoercivity(maxtev::FormKind::A, dom, order, a, sizes);
    }
    else if (p == "t_coercivity_c")
    {
      r->report = maxtev::CheckTCoercivity(maxtev::FormKind::C, dom, order, n, sizes);
    }
    else if (p == "discrete_poincare")
    {
      r->report = maxtev::CheckDiscretePoincare(dom, order, n, sizes);
    }
    else if (p == "source_consistency")
    {
      r->report = maxtev::CheckSourceConsistency(dom, order, a, n, sizes);
    }
    else if (p == "matrix_identities")
    {
      r->report = maxtev::CheckIdentities(dom, order, a, n, sizes);
    }
    else
    {
      throw maxtev::Error(maxtev::ErrorCode::InvalidArgument, "unknown property '" + p + "'");
    }
    *out = r.release();
  });
}

int maxtev_report_passed(const maxtev_report *report) { return report && report->report.passed ? 1 : 0; }

maxtev_status maxtev_report_write(const maxtev_report *report, const char *format, const char *path)
{
  return Guard([&] { WriteAtomic(path, FormatReport(report, format)); });
}

maxtev_status maxtev_report_format(const maxtev_report *report, const char *format, char **out)
{
  return Guard([&] {
    Require(out != nullptr, "null argument");
    const std::string text = FormatReport(report, format);
    char *buf = static_cast<char *>(std::malloc(text.size() + 1));
    if (!buf)
    {
      throw std::bad_alloc();
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void maxtev_report_free(maxtev_report *report) { delete report; }

maxtev_status maxtev_write_file(const char *path, const char *data, size_t size)
{
  return Guard([&] {
    Require(data != nullptr || size == 0, "null data");
    WriteAtomic(path, std::string(data ? data : "", size));
  });
}

void maxtev_string_free(char *s) { std::free(s); }

void maxtev_set_threads(int threads) { maxtev::SetThreadCap(threads); }

}  // extern "C"
