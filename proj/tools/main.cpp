// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "maxtev/maxtev.h"

namespace
{

using maxtev::cli::RunConfig;
using nlohmann::json;

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

class StatusError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

void Check(maxtev_status s, const std::string &context)
{
  if (s != MAXTEV_OK)
  {
    throw StatusError(context + ": " + maxtev_status_name(s) + ": " + maxtev_last_error());
  }
}

template <typename T, void (*Free)(T *)>
struct Handle
{
  T *p = nullptr;
  Handle() = default;
  Handle(const Handle &) = delete;
  ~Handle() { Free(p); }
};

using Mesh = Handle<maxtev_mesh, maxtev_mesh_free>;
using Problem = Handle<maxtev_problem, maxtev_problem_free>;
using Result = Handle<maxtev_result, maxtev_result_free>;
using Table = Handle<maxtev_table, maxtev_table_free>;
using Report = Handle<maxtev_report, maxtev_report_free>;

const char *OutPath(const RunConfig &c) { return c.out.empty() ? "-" : c.out.c_str(); }

std::string FormatK(double re, double im)
{
  char buf[96];
  if (im == 0.0)
  {
    std::snprintf(buf, sizeof buf, "%.8f", re);
  }
  else
  {
    std::snprintf(buf, sizeof buf, "%.8f%+.8fi", re, im);
  }
  return buf;
}

void BuildProblem(const RunConfig &c, Mesh &mesh, Problem &problem)
{
  Check(maxtev_mesh_build(c.domain.c_str(), c.ns.front(), &mesh.p), "mesh");
  Check(maxtev_problem_create(mesh.p, c.order, c.A.c_str(), c.N.c_str(), c.pinned_vertex, &problem.p),
        "discretization");
}

void Solve(const RunConfig &c, const Problem &problem, Result &result)
{
  maxtev_solve_options opts;
  maxtev_solve_options_init(&opts);
  opts.count = c.count;
  opts.nev = c.nev;
  opts.tol = c.tol;
  if (c.k_window)
  {
    opts.has_window = 1;
    opts.k_lo = c.k_window->first;
    opts.k_hi = c.k_window->second;
  }
  if (c.shift)
  {
    opts.has_shift = 1;
    opts.shift_re = c.shift->real();
    opts.shift_im = c.shift->imag();
  }
  Check(maxtev_solve(problem.p, &opts, &result.p), "eigensolve");
}

std::string PairsCsv(const Result &result)
{
  std::ostringstream os;
  os << "index,re_k,im_k,re_lambda,im_lambda,residual,constraint,multiplier,conjugate_pair\n";
  char buf[512];
  for (std::size_t i = 0; i < maxtev_result_size(result.p); ++i)
  {
    maxtev_eigenpair_info e;
    Check(maxtev_result_get(result.p, i, &e), "result");
    std::snprintf(buf, sizeof buf, "%zu,%.12f,%.12f,%.12f,%.12f,%.3e,%.3e,%.3e,%d\n", i, e.k_re, e.k_im,
                  e.lambda_re, e.lambda_im, e.residual, e.constraint, e.multiplier, e.conjugate_pair);
    os << buf;
  }
  return os.str();
}

void WriteText(const RunConfig &c, const std::string &text)
{
  Check(maxtev_write_file(OutPath(c), text.data(), text.size()), "write " + std::string(OutPath(c)));
}

int RunMesh(const RunConfig &c)
{
  Mesh mesh;
  Check(maxtev_mesh_build(c.domain.c_str(), c.ns.front(), &mesh.p), "mesh");
  maxtev_mesh_info info;
  Check(maxtev_mesh_get_info(mesh.p, &info), "mesh");
  std::fprintf(stderr, "%s n=%d h=%.6f vertices=%ld edges=%ld faces=%ld tets=%ld boundary faces=%ld\n",
               c.domain.c_str(), info.n, info.h, info.vertices, info.edges, info.faces, info.tets,
               info.boundary_faces);
  if (!c.out.empty())
  {
    Check(c.format == "vtk" ? maxtev_mesh_write_vtk(mesh.p, c.out.c_str()) : maxtev_mesh_write(mesh.p, c.out.c_str()),
          "write " + c.out);
  }
  return 0;
}

int RunSolve(const RunConfig &c)
{
  Mesh mesh;
  Problem problem;
  BuildProblem(c, mesh, problem);
  maxtev_problem_info pi;
  Check(maxtev_problem_get_info(problem.p, &pi), "discretization");
  Result result;
  Solve(c, problem, result);
  if (c.format == "csv")
  {
    WriteText(c, PairsCsv(result));
    return 0;
  }
  std::ostringstream os;
  os << c.domain << " n=" << c.ns.front() << " order=" << c.order << " A=" << c.A << " N=" << c.N
     << " dofs=" << pi.field_dofs << " multiplier dofs=" << pi.mult_dofs << '\n';
  for (std::size_t i = 0; i < maxtev_result_size(result.p); ++i)
  {
    maxtev_eigenpair_info e;
    Check(maxtev_result_get(result.p, i, &e), "result");
    char buf[256];
    std::snprintf(buf, sizeof buf, "k%zu = %s%s  (residual %.1e)\n", i + 1, FormatK(e.k_re, e.k_im).c_str(),
                  e.conjugate_pair ? "  [and conjugate]" : "", e.residual);
    os << buf;
  }
  if (!maxtev_result_converged(result.p))
  {
    os << "warning: not every requested eigenvalue converged\n";
  }
  WriteText(c, os.str());
  return 0;
}

void Progress(const char *message, void *) { std::fprintf(stderr, "%s\n", message); }

int RunConverge(const RunConfig &c)
{
  maxtev_experiment e{};
  if (!c.preset.empty())
  {
    Check(maxtev_experiment_preset(c.preset.c_str(), &e), "preset");
  }
  else
  {
    std::snprintf(e.name, sizeof e.name, "%s", "custom");
    e.reference = MAXTEV_REFERENCE_NONE;
  }
  std::snprintf(e.domain, sizeof e.domain, "%s", c.domain.c_str());
  e.order = c.order;
  if (c.A.size() >= sizeof e.A || c.N.size() >= sizeof e.N)
  {
    throw StatusError("coefficient string too long");
  }
  std::snprintf(e.A, sizeof e.A, "%s", c.A.c_str());
  std::snprintf(e.N, sizeof e.N, "%s", c.N.c_str());
  e.n_count = static_cast<int>(c.ns.size());
  for (std::size_t i = 0; i < c.ns.size(); ++i)
  {
    e.ns[i] = c.ns[i];
  }
  e.k_lo = c.k_window->first;
  e.k_hi = c.k_window->second;
  e.has_shift = c.shift.has_value();
  if (c.shift)
  {
    e.shift_re = c.shift->real();
    e.shift_im = c.shift->imag();
  }
  e.count = c.count;
  e.nev = c.nev;
  e.tol = c.tol;
  Table table;
  Check(maxtev_table_run(&e, Progress, nullptr, &table.p), "convergence run");
  Check(maxtev_table_write(table.p, c.format.c_str(), OutPath(c)), "write table");
  return 0;
}

int RunVerify(const RunConfig &c)
{
  struct Job
  {
    std::string property, domain;
    int order;
    std::string A, N;
    std::vector<int> ns;
  };
  std::vector<Job> jobs;
  const std::vector<std::string> props =
      c.properties.empty() ? maxtev::cli::PropertyNames() : c.properties;
  if (c.all)
  {
    const std::vector<std::pair<std::string, std::string>> settings = {
        {"two_I", "sixteen_I"}, {"F1", "F2"}, {"F4", "F3"}};
    std::vector<int> ns0, ns1;
    for (int n = 1; n <= c.max_n; ++n)
    {
      ns0.push_back(n);
      if (n <= 2)
      {
        ns1.push_back(n);
      }
    }
    for (const auto &p : props)
    {
      for (const auto &[a, n] : settings)
      {
        jobs.push_back({p, "cube", 0, a, n, ns0});
        jobs.push_back({p, "cube", 1, a, n, ns1});
      }
    }
  }
  else
  {
    for (const auto &p : props)
    {
      jobs.push_back({p, c.domain, c.order, c.A, c.N, c.ns});
    }
  }
  bool all_passed = true;
  std::string combined;
  bool first = true;
  for (const auto &job : jobs)
  {
    Report report;
    Check(maxtev_verify(job.property.c_str(), job.domain.c_str(), job.order, job.A.c_str(), job.N.c_str(),
                        job.ns.data(), job.ns.size(), &report.p),
          job.property);
    all_passed = all_passed && maxtev_report_passed(report.p);
    char *raw = nullptr;
    Check(maxtev_report_format(report.p, c.format.c_str(), &raw), "format report");
    std::string text(raw);
    maxtev_string_free(raw);
    if (c.format == "csv" && !first)
    {
      text = text.substr(text.find('\n') + 1);
    }
    first = false;
    if (c.out.empty())
    {
      std::cout << text << std::flush;
    }
    combined += text;
  }
  if (!c.out.empty())
  {
    WriteText(c, combined);
  }
  std::fprintf(stderr, "verify: %s\n", all_passed ? "all properties hold" : "some properties FAILED");
  return all_passed ? 0 : kExitCheckFailed;
}

int RunExport(const RunConfig &c)
{
  Mesh mesh;
  Problem problem;
  BuildProblem(c, mesh, problem);
  if (c.format == "mm")
  {
    const std::string prefix = c.out.empty() ? "maxtev" : c.out;
    for (const auto &m : c.matrices)
    {
      const std::string path = prefix + "_" + m + ".mtx";
      Check(maxtev_problem_write_matrix(problem.p, m.c_str(), path.c_str()), "write " + path);
      std::fprintf(stderr, "wrote %s\n", path.c_str());
    }
    return 0;
  }
  Result result;
  Solve(c, problem, result);
  if (c.format == "csv")
  {
    WriteText(c, PairsCsv(result));
    return 0;
  }
  if (static_cast<std::size_t>(c.index) >= maxtev_result_size(result.p))
  {
    throw StatusError("eigenpair index " + std::to_string(c.index) + " not available");
  }
  const std::string path = c.out.empty() ? "maxtev.vtk" : c.out;
  Check(maxtev_result_write_vtk(problem.p, result.p, c.index, path.c_str()), "write " + path);
  double ratio = 0.0;
  Check(maxtev_result_tangential_ratio(problem.p, result.p, c.index, &ratio), "tangential trace");
  maxtev_eigenpair_info e;
  Check(maxtev_result_get(result.p, c.index, &e), "result");
  std::fprintf(stderr, "wrote %s: k = %s, boundary tangential ratio of w - v = %.2e\n", path.c_str(),
               FormatK(e.k_re, e.k_im).c_str(), ratio);
  return 0;
}

struct Flags
{
  std::string config, preset, domain, n_list, A, N, shift, out, format, properties, matrices;
  int n = 0, order = 0, nev = 0, count = 0, max_n = 0, index = 0, pinned_vertex = 0, threads = 0;
  std::vector<double> k_window;
  double tol = 0.0;
  bool all = false;
};

void AddCommon(CLI::App *sub, Flags &f)
{
  sub->add_option("--config", f.config, "JSON config file (flags override its keys)");
  sub->add_option("--preset", f.preset, "built-in experiment, e.g. table3-case1");
  sub->add_option("--domain", f.domain, "cube | thickL");
  sub->add_option("--n", f.n, "cells per unit length");
  sub->add_option("--n-list", f.n_list, "mesh sizes, e.g. 6..11 or 3,4,5");
  sub->add_option("--order", f.order, "edge element order (0 or 1)");
  sub->add_option("--A", f.A, "coefficient A: preset, <c>I, or 9 comma separated reals");
  sub->add_option("--N", f.N, "coefficient N (same forms as --A)");
  sub->add_option("--k-window", f.k_window, "Re k range [lo hi]")->expected(2);
  sub->add_option("--shift", f.shift, "shift in lambda = k^2: re or re,im");
  sub->add_option("--nev", f.nev, "eigenvalues requested from Arnoldi");
  sub->add_option("--count", f.count, "eigenvalues reported");
  sub->add_option("--tol", f.tol, "relative residual tolerance");
  sub->add_option("--out", f.out, "output path (default stdout)");
  sub->add_option("--format", f.format, "output format");
  sub->add_option("--pinned-vertex", f.pinned_vertex, "pinned multiplier vertex");
  sub->add_option("--threads", f.threads, "thread cap (also MAXTEV_THREADS)");
}

json FlagsToJson(const CLI::App *sub, const Flags &f)
{
  json j = json::object();
  auto given = [&](const char *name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };
  if (given("--preset")) j["preset"] = f.preset;
  if (given("--domain")) j["domain"] = f.domain;
  if (given("--n")) j["n"] = f.n;
  if (given("--n-list")) j["n_list"] = f.n_list;
  if (given("--order")) j["order"] = f.order;
  if (given("--A")) j["A"] = f.A;
  if (given("--N")) j["N"] = f.N;
  if (given("--k-window")) j["k_window"] = f.k_window;
  if (given("--shift")) j["shift"] = f.shift;
  if (given("--nev")) j["nev"] = f.nev;
  if (given("--count")) j["count"] = f.count;
  if (given("--tol")) j["tol"] = f.tol;
  if (given("--out")) j["out"] = f.out;
  if (given("--format")) j["format"] = f.format;
  if (given("--pinned-vertex")) j["pinned_vertex"] = f.pinned_vertex;
  if (given("--threads")) j["threads"] = f.threads;
  if (given("--all")) j["all"] = f.all;
  if (given("--max-n")) j["max_n"] = f.max_n;
  if (given("--properties")) j["properties"] = f.properties;
  if (given("--index")) j["index"] = f.index;
  if (given("--matrices")) j["matrices"] = f.matrices;
  return j;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"maxtev: Maxwell transmission eigenvalues in anisotropic media"};
  app.require_subcommand(1);
  app.set_version_flag("--version", maxtev_version());
  Flags f;
  std::vector<CLI::App *> subs;
  subs.push_back(app.add_subcommand("mesh", "build a mesh and print its statistics"));
  subs.push_back(app.add_subcommand("solve", "lowest eigenvalues on one mesh"));
  subs.push_back(app.add_subcommand("converge", "convergence table over a list of mesh sizes"));
  subs.push_back(app.add_subcommand("verify", "discrete property checks"));
  subs.push_back(app.add_subcommand("export", "eigenvector fields (vtk), matrices (mm) or eigenpairs (csv)"));
  for (auto *s : subs)
  {
    AddCommon(s, f);
  }
  subs[3]->add_flag("--all", f.all, "every property, three coefficient settings, orders 0 and 1");
  subs[3]->add_option("--max-n", f.max_n, "largest n for --all / default n list");
  subs[3]->add_option("--properties", f.properties, "comma separated property names");
  subs[4]->add_option("--index", f.index, "eigenpair index for vtk export");
  subs[4]->add_option("--matrices", f.matrices, "matrices for mm export, e.g. K,M,B");
  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }
  CLI::App *sub = nullptr;
  for (auto *s : subs)
  {
    if (s->parsed())
    {
      sub = s;
    }
  }

  RunConfig config;
  try
  {
    json base = f.config.empty() ? json::object() : maxtev::cli::LoadConfigFile(f.config);
    if (base.contains("command") && base["command"] != sub->get_name())
    {
      throw maxtev::cli::ConfigError("$.command: config file says '" + base["command"].dump() +
                                     "' but the subcommand is '" + sub->get_name() + "'");
    }
    json merged = maxtev::cli::MergeConfig(base, FlagsToJson(sub, f));
    merged["command"] = sub->get_name();
    config = maxtev::cli::ParseConfig(merged);
  }
  catch (const maxtev::cli::ConfigError &e)
  {
    std::fprintf(stderr, "maxtev: configuration error: %s\n", e.what());
    return kExitConfig;
  }
  if (config.threads > 0)
  {
    maxtev_set_threads(config.threads);
  }

  try
  {
    const std::string &cmd = config.command;
    if (cmd == "mesh")
    {
      return RunMesh(config);
    }
    if (cmd == "solve")
    {
      return RunSolve(config);
    }
    if (cmd == "converge")
    {
      return RunConverge(config);
    }
    if (cmd == "verify")
    {
      return RunVerify(config);
    }
    return RunExport(config);
  }
  catch (const std::exception &e)
  {
    std::fprintf(stderr, "maxtev: %s\n", e.what());
    return kExitRuntime;
  }
}
