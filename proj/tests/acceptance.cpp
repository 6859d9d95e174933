// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. Detail lines start with "  ".

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "discretization.hpp"
#include "eigensolver.hpp"
#include "errors.hpp"
#include "harness.hpp"
#include "verification.hpp"

using namespace maxtev;

namespace
{

// Tolerances.
constexpr double kTable1TolConstant = 5e-4;
constexpr double kTable1Tol = 2e-3;
constexpr double kTable3Tol = 5e-4;
constexpr double kRefTol = 2e-5;
constexpr double kImLo = 0.020, kImHi = 0.035;
constexpr double kImLimit = 0.0279, kImLimitTol = 1e-3;
constexpr double kDofRelTol = 0.01;
constexpr double kRateLo0 = 1.6, kRateHi0 = 2.6;
constexpr double kRateLo1 = 3.2, kRateHi1 = 4.8;
constexpr double kOracleRelTol = 1e-9;
constexpr double kMinAbsLambda = 0.1;
constexpr double kBcgTol = 1e-11, kAgTol = 1e-12, kHermTol = 1e-14;
constexpr double kConstraintTol = 1e-8, kMultiplierTol = 1e-8;
constexpr double kInvarianceTol = 1e-9;
constexpr double kConjugateTol = 1e-9;
constexpr int kDenseLimit = 3000;

const char *const kSettings[3][2] = {{"two_I", "sixteen_I"}, {"F1", "F2"}, {"F4", "F3"}};

// Reference values, rows h = 1/6..1/11, columns k1..k4.
constexpr double kTable1[3][6][4] = {
    {{1.20351, 1.20369, 1.20374, 1.46189},
     {1.20512, 1.20519, 1.20524, 1.46473},
     {1.20618, 1.20625, 1.20626, 1.46673},
     {1.20694, 1.20695, 1.20697, 1.46814},
     {1.20748, 1.20749, 1.20750, 1.46907},
     {1.20787, 1.20788, 1.20789, 1.46981}},
    {{4.39829, 4.40194, 4.40234, 4.88009},
     {4.39598, 4.39922, 4.39995, 4.88302},
     {4.39446, 4.39776, 4.39838, 4.88502},
     {4.39352, 4.39674, 4.39732, 4.88663},
     {4.39286, 4.39610, 4.39666, 4.88765},
     {4.39239, 4.39560, 4.39617, 4.88834}},
    {{3.85795, 4.26145, 4.43888, 4.47280},
     {3.85954, 4.26528, 4.43646, 4.47031},
     {3.86100, 4.26733, 4.43489, 4.46890},
     {3.86187, 4.26905, 4.43386, 4.46790},
     {3.86244, 4.27014, 4.43321, 4.46728},
     {3.86288, 4.27096, 4.43275, 4.46680}},
};

// Rows h = 1/3..1/8.
constexpr double kTable3[3][6][4] = {
    {{1.209189, 1.209218, 1.209314, 1.471039},
     {1.209586, 1.209593, 1.209595, 1.472310},
     {1.209744, 1.209745, 1.209749, 1.472861},
     {1.209803, 1.209805, 1.209807, 1.473065},
     {1.209834, 1.209835, 1.209835, 1.473167},
     {1.209850, 1.209850, 1.209851, 1.473220}},
    {{4.391999, 4.395247, 4.395818, 4.893018},
     {4.391001, 4.394126, 4.394706, 4.892394},
     {4.390704, 4.393812, 4.394379, 4.892225},
     {4.390606, 4.393707, 4.394278, 4.892147},
     {4.390562, 4.393664, 4.394233, 4.892115},
     {4.390542, 4.393643, 4.394212, 4.892098}},
    {{3.866098, 4.275852, 4.432275, 4.466491},
     {3.865268, 4.275364, 4.431310, 4.465404},
     {3.865103, 4.275249, 4.431012, 4.465107},
     {3.865043, 4.275201, 4.430912, 4.465010},
     {3.865018, 4.275177, 4.430870, 4.464972},
     {3.865004, 4.275168, 4.430852, 4.464952}},
};
constexpr double kTable3Ref[3][4] = {
    {1.209871, 1.209870, 1.209870, 1.473293},
    {4.390513, 4.393612, 4.394182, 4.892076},
    {3.864985, 4.275154, 4.430824, 4.464924},
};

struct Outcome
{
  bool pass = true;
  std::vector<std::string> details;

  void Require(bool ok, const std::string &what)
  {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
  }
};

std::string Fmt(const char *fmt, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char *fmt, ...)
{
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

void Progress(const std::string &msg)
{
  std::fprintf(stderr, "[acceptance] %s\n", msg.c_str());
  std::fflush(stderr);
}

int g_failed = 0;

void Report(int id, const char *title, const std::function<Outcome()> &run)
{
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try
  {
    o = run();
  }
  catch (const std::exception &e)
  {
    o.pass = false;
    o.details.push_back(std::string("FAIL  exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto &d : o.details)
  {
    std::printf("  %s\n", d.c_str());
  }
  std::printf("criterion %d: %s  %s  (%.0f s)\n", id, o.pass ? "PASS" : "FAIL", title, secs);
  std::fflush(stdout);
  g_failed += o.pass ? 0 : 1;
}

long FieldDim(Domain d, int n, int order)
{
  return CoupledFieldSpace(std::make_shared<const TetMesh>(BuildMesh(d, n)), order).dim();
}

struct Tables
{
  ConvergenceTable t1[3], t3[3], t2c3, t4c3;
};

std::vector<cplx> SortedK(const std::vector<EigenPair> &pairs)
{
  std::vector<cplx> k;
  for (const auto &p : pairs)
  {
    k.push_back(p.k);
  }
  return k;
}

double MaxRelDiff(const std::vector<cplx> &a, const std::vector<cplx> &b)
{
  if (a.size() != b.size())
  {
    return std::numeric_limits<double>::infinity();
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    m = std::max(m, std::abs(a[i] - b[i]) / std::abs(b[i]));
  }
  return m;
}

double NearestRel(const std::vector<cplx> &spectrum, cplx lambda)
{
  double best = std::numeric_limits<double>::infinity();
  for (cplx s : spectrum)
  {
    best = std::min(best, std::abs(s - lambda) / std::abs(lambda));
  }
  return best;
}

void CheckTable(Outcome &o, const ConvergenceTable &t, const double (*expected)[4], double tol)
{
  double worst = 0.0;
  bool complete = true;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
  {
    const auto &row = t.rows[r];
    if (row.k.size() < 4)
    {
      complete = false;
      o.Require(false, Fmt("%s n=%d: only %zu eigenvalues in the window", t.config.name.c_str(), row.n, row.k.size()));
      continue;
    }
    std::string line = Fmt("%s n=%-2d", t.config.name.c_str(), row.n);
    double row_worst = 0.0;
    for (int j = 0; j < 4; ++j)
    {
      const double dev = std::abs(row.k[j].real() - expected[r][j]);
      row_worst = std::max(row_worst, dev);
      line += Fmt("  k%d=%.6f (%+.1e)", j + 1, row.k[j].real(), row.k[j].real() - expected[r][j]);
    }
    worst = std::max(worst, row_worst);
    o.Require(row_worst <= tol, line);
  }
  o.details.push_back(Fmt("%s max |k - reference| = %.2e (tol %.0e)%s", t.config.name.c_str(), worst, tol,
                          complete ? "" : ", incomplete rows"));
}

void CheckRates(Outcome &o, const ConvergenceTable &t, double lo, double hi)
{
  const std::size_t rows = t.rows.size();
  if (rows < 3)
  {
    o.Require(false, Fmt("%s: fewer than three meshes", t.config.name.c_str()));
    return;
  }
  for (std::size_t r = rows - 2; r < rows; ++r)
  {
    std::string line = Fmt("%s h=1/%d->1/%d", t.config.name.c_str(), t.rows[r - 1].n, t.rows[r].n);
    bool ok = true;
    for (int j = 0; j < 4; ++j)
    {
      const auto &rate = j < static_cast<int>(t.rates[r].size()) ? t.rates[r][j] : std::nullopt;
      if (!rate)
      {
        line += Fmt("  r%d=--", j + 1);
        ok = false;
        continue;
      }
      line += Fmt("  r%d=%.2f", j + 1, *rate);
      ok = ok && *rate >= lo && *rate <= hi;
    }
    o.Require(ok, line + Fmt("  (range [%.1f, %.1f])", lo, hi));
  }
}

void CheckComplexK4(Outcome &o, const ConvergenceTable &t)
{
  for (const auto &row : t.rows)
  {
    if (row.k.size() < 4)
    {
      o.Require(false, Fmt("%s n=%d: fourth eigenvalue missing", t.config.name.c_str(), row.n));
      continue;
    }
    const cplx k4 = row.k[3];
    o.Require(k4.imag() >= kImLo && k4.imag() <= kImHi && row.conjugate_pair[3],
              Fmt("%s n=%-2d k4 = %.6f%+.6fi%s", t.config.name.c_str(), row.n, k4.real(), k4.imag(),
                  row.conjugate_pair[3] ? " [and conjugate]" : ""));
  }
  if (!t.rows.empty() && t.rows.back().k.size() >= 4)
  {
    const double im = t.rows.back().k[3].imag();
    o.Require(std::abs(im - kImLimit) <= kImLimitTol,
              Fmt("%s finest Im k4 = %.6f, |Im k4 - %.4f| <= %.0e", t.config.name.c_str(), im, kImLimit, kImLimitTol));
  }
}

ConvergenceTable Run(const std::string &preset, const std::vector<std::optional<cplx>> *given = nullptr)
{
  ExperimentConfig c = PresetExperiment(preset);
  if (given)
  {
    c.reference_values.clear();
    for (const auto &v : *given)
    {
      c.reference_values.push_back(v.value_or(cplx(std::nan(""), 0.0)));
    }
  }
  return RunConvergence(c, Progress);
}

}  // namespace

int main()
{
  Tables tables;

  Report(1, "degree-of-freedom bookkeeping", [] {
    Outcome o;
    struct Exact
    {
      Domain d;
      int n, order;
      long expected;
    };
    for (const Exact &e : {Exact{Domain::Cube, 6, 0, 6084}, Exact{Domain::Cube, 11, 0, 37334},
                           Exact{Domain::Cube, 3, 1, 4140}, Exact{Domain::Cube, 8, 1, 77920},
                           Exact{Domain::ThickL, 1, 1, 476}})
    {
      const long got = FieldDim(e.d, e.n, e.order);
      o.Require(got == e.expected, Fmt("%s n=%d order=%d dofs=%ld expected %ld", DomainName(e.d), e.n, e.order, got,
                                       e.expected));
    }
    for (const Exact &e : {Exact{Domain::ThickL, 4, 0, 5416}, Exact{Domain::ThickL, 9, 0, 61326},
                           Exact{Domain::ThickL, 6, 1, 98616}})
    {
      const long got = FieldDim(e.d, e.n, e.order);
      const double rel = std::abs(static_cast<double>(got - e.expected)) / static_cast<double>(e.expected);
      o.Require(rel <= kDofRelTol, Fmt("%s n=%d order=%d dofs=%ld expected %ld (rel %.2e, tol %.0e)",
                                       DomainName(e.d), e.n, e.order, got, e.expected, rel, kDofRelTol));
    }
    return o;
  });

  Report(2, "linear elements on the cube", [&] {
    Outcome o;
    // The quadratic-element tables supply the references.
    for (int s = 0; s < 3; ++s)
    {
      tables.t3[s] = Run("table3-case" + std::to_string(s + 1));
    }
    for (int s = 0; s < 3; ++s)
    {
      tables.t1[s] = Run("table1-case" + std::to_string(s + 1), &tables.t3[s].reference);
      CheckTable(o, tables.t1[s], kTable1[s], s == 0 ? kTable1TolConstant : kTable1Tol);
    }
    return o;
  });

  Report(3, "quadratic elements on the cube", [&] {
    Outcome o;
    for (int s = 0; s < 3; ++s)
    {
      CheckTable(o, tables.t3[s], kTable3[s], kTable3Tol);
      std::string line = Fmt("%s reference", tables.t3[s].config.name.c_str());
      bool ok = true;
      for (int j = 0; j < 4; ++j)
      {
        const auto &ref = tables.t3[s].reference[j];
        const double dev = ref ? std::abs(ref->real() - kTable3Ref[s][j]) : std::numeric_limits<double>::infinity();
        ok = ok && dev <= kRefTol;
        line += ref ? Fmt("  %.6f (%+.1e)", ref->real(), ref->real() - kTable3Ref[s][j]) : std::string("  --");
      }
      o.Require(ok, line + Fmt("  (tol %.0e)", kRefTol));
    }
    return o;
  });

  Report(4, "complex eigenvalue on the thick L", [&] {
    Outcome o;
    tables.t2c3 = Run("table2-case3");
    CheckComplexK4(o, tables.t2c3);
    tables.t4c3 = Run("table4-case3");
    CheckComplexK4(o, tables.t4c3);

    // Dense oracle on the coarsest dense-feasible thick-L mesh that carries the complex pair.
    const CoefficientField A = MakePreset("F4"), N = MakePreset("F3");
    SolveOptions opts;
    opts.shift = 2.95 * 2.95;
    bool found = false;
    struct Mesh
    {
      int n, order;
    };
    for (const Mesh &m : {Mesh{1, 0}, Mesh{2, 0}, Mesh{3, 0}, Mesh{1, 1}})
    {
      const Discretization d = Discretize(Domain::ThickL, m.n, m.order, A, N);
      if (d.pencil.dim() > kDenseLimit)
      {
        continue;
      }
      const WindowSolve ws = SolveLowestInWindow(d.pencil, {2.4, 3.5}, 4, opts);
      if (ws.pairs.size() < 4 || ws.pairs[3].lambda.imag() == 0.0)
      {
        o.details.push_back(Fmt("thickL n=%d order=%d (dim %d): k4 = %.6f is real on this mesh", m.n, m.order,
                                d.pencil.dim(), ws.pairs.size() < 4 ? 0.0 : ws.pairs[3].k.real()));
        continue;
      }
      const std::vector<cplx> dense = DenseQZ(d.pencil);
      const cplx l4 = ws.pairs[3].lambda;
      const double self = NearestRel(dense, l4), conj = NearestRel(dense, std::conj(l4));
      o.Require(self <= kConjugateTol && conj <= kConjugateTol,
                Fmt("thickL n=%d order=%d dense spectrum: lambda4 = %.6f%+.6fi  rel dist %.1e, conjugate %.1e", m.n,
                    m.order, l4.real(), l4.imag(), self, conj));
      found = true;
      break;
    }
    if (!found)
    {
      o.Require(false, Fmt("no thick-L mesh within the dense oracle limit (%d) carries the complex pair", kDenseLimit));
    }
    return o;
  });

  Report(5, "convergence rates on the cube", [&] {
    Outcome o;
    for (int s = 0; s < 3; ++s)
    {
      CheckRates(o, tables.t1[s], kRateLo0, kRateHi0);
    }
    for (int s = 0; s < 3; ++s)
    {
      CheckRates(o, tables.t3[s], kRateLo1, kRateHi1);
    }
    return o;
  });

  Report(6, "sparse solver against the dense oracle", [] {
    Outcome o;
    struct Case
    {
      Domain d;
      int n, order;
    };
    for (const Case &c : {Case{Domain::Cube, 2, 0}, Case{Domain::ThickL, 1, 0}, Case{Domain::ThickL, 1, 1}})
    {
      for (int s = 0; s < 3; ++s)
      {
        const ExperimentConfig preset =
            PresetExperiment((c.d == Domain::Cube ? "table1-case" : "table2-case") + std::to_string(s + 1));
        const Discretization d = Discretize(c.d, c.n, c.order, MakePreset(kSettings[s][0]), MakePreset(kSettings[s][1]));
        const std::vector<cplx> dense = DenseQZ(d.pencil);
        double min_abs = std::numeric_limits<double>::infinity();
        for (cplx l : dense)
        {
          min_abs = std::min(min_abs, std::abs(l));
        }
        // Lowest four nearest the window centre.
        const double mid = 0.5 * (preset.k_window.first + preset.k_window.second);
        SolveOptions opts;
        opts.shift = mid * mid;
        opts.nev = 4;
        const EigenResult r = ShiftInvertSolve(d.pencil, opts);
        double worst = 0.0;
        const int m = std::min<int>(4, static_cast<int>(r.pairs.size()));
        for (int i = 0; i < m; ++i)
        {
          worst = std::max(worst, NearestRel(dense, r.pairs[i].lambda));
          if (r.pairs[i].conjugate_pair)
          {
            worst = std::max(worst, NearestRel(dense, std::conj(r.pairs[i].lambda)));
          }
        }
        o.Require(m == 4 && worst <= kOracleRelTol && min_abs > kMinAbsLambda,
                  Fmt("%s n=%d order=%d %s/%s: %d pairs, max rel dist %.1e, min |lambda| %.3f", DomainName(c.d), c.n,
                      c.order, kSettings[s][0], kSettings[s][1], m, worst, min_abs));
      }
    }
    return o;
  });

  Report(7, "discrete identities", [] {
    Outcome o;
    double bcg = 0.0, ag = 0.0, kh = 0.0, mh = 0.0;
    int count = 0;
    for (Domain dom : {Domain::Cube, Domain::ThickL})
    {
      for (int order : {0, 1})
      {
        for (int n = 1; n <= (order == 0 ? 3 : 2); ++n)
        {
          for (int s = 0; s < 3; ++s)
          {
            const Discretization d = Discretize(dom, n, order, MakePreset(kSettings[s][0]), MakePreset(kSettings[s][1]));
            const IdentityObservation obs = ObserveIdentities(d);
            const bool ok = obs.bcg <= kBcgTol && obs.ag <= kAgTol && obs.k_herm <= kHermTol && obs.m_herm <= kHermTol;
            if (!ok)
            {
              o.Require(false, Fmt("%s n=%d order=%d %s: bcg %.1e ag %.1e herm %.1e/%.1e", DomainName(dom), n, order,
                                   kSettings[s][0], obs.bcg, obs.ag, obs.k_herm, obs.m_herm));
            }
            bcg = std::max(bcg, obs.bcg);
            ag = std::max(ag, obs.ag);
            kh = std::max(kh, obs.k_herm);
            mh = std::max(mh, obs.m_herm);
            ++count;
          }
        }
      }
    }
    o.Require(bcg <= kBcgTol && ag <= kAgTol && kh <= kHermTol && mh <= kHermTol,
              Fmt("%d discretizations: max |B-CG| %.1e, |AG| %.1e, K herm %.1e, M herm %.1e", count, bcg, ag, kh, mh));
    return o;
  });

  Report(8, "T-coercivity and discrete Poincare constants", [] {
    Outcome o;
    const std::vector<int> ns{1, 2, 3, 4};
    for (int s = 0; s < 3; ++s)
    {
      const CoefficientField A = MakePreset(kSettings[s][0]), N = MakePreset(kSettings[s][1]);
      for (const PropertyReport &rep :
           {CheckTCoercivity(FormKind::A, Domain::Cube, 0, A, ns), CheckTCoercivity(FormKind::C, Domain::Cube, 0, N, ns),
            CheckDiscretePoincare(Domain::Cube, 0, N, ns)})
      {
        std::string line = Fmt("%s %s/%s", rep.property.c_str(), kSettings[s][0], kSettings[s][1]);
        for (const auto &row : rep.rows)
        {
          line += Fmt("  n=%d:", row.n);
          for (const auto &[name, value] : row.observed)
          {
            line += Fmt(" %s=%.4g", name.c_str(), value);
          }
        }
        o.Require(rep.passed, line);
      }
    }
    return o;
  });

  Report(9, "eigenvector structure and invariance", [&] {
    Outcome o;
    double constraint = 0.0, multiplier = 0.0;
    int rows = 0;
    auto scan = [&](const ConvergenceTable &t) {
      for (const auto &row : t.rows)
      {
        constraint = std::max(constraint, row.max_constraint);
        multiplier = std::max(multiplier, row.max_multiplier);
        ++rows;
      }
    };
    for (int s = 0; s < 3; ++s)
    {
      scan(tables.t1[s]);
      scan(tables.t3[s]);
    }
    scan(tables.t2c3);
    scan(tables.t4c3);
    o.Require(rows > 0 && constraint <= kConstraintTol && multiplier <= kMultiplierTol,
              Fmt("%d table rows: max |B^H x|/|x| %.1e, max |y|/|x| %.1e", rows, constraint, multiplier));

    struct Case
    {
      Domain d;
      int n, order;
      const char *preset;
    };
    for (const Case &c : {Case{Domain::Cube, 3, 0, "table1-case"}, Case{Domain::ThickL, 2, 1, "table2-case"}})
    {
      for (int s = 0; s < 3; ++s)
      {
        const ExperimentConfig preset = PresetExperiment(c.preset + std::to_string(s + 1));
        const CoefficientField A = MakePreset(kSettings[s][0]), N = MakePreset(kSettings[s][1]);
        const Discretization d0 = Discretize(c.d, c.n, c.order, A, N);
        int last_boundary = -1;
        for (std::size_t v = 0; v < d0.mesh->NumVertices(); ++v)
        {
          if (d0.mesh->vertex_on_boundary[v])
          {
            last_boundary = static_cast<int>(v);
          }
        }
        DiscretizationOptions alt;
        alt.pinned_vertex = last_boundary;
        const Discretization d1 = Discretize(c.d, c.n, c.order, A, N, alt);
        const double mid = 0.5 * (preset.k_window.first + preset.k_window.second);
        SolveOptions opts;
        opts.shift = mid * mid;
        const WindowSolve base = SolveLowestInWindow(d0.pencil, preset.k_window, 4, opts);
        const WindowSolve pinned = SolveLowestInWindow(d1.pencil, preset.k_window, 4, opts);
        opts.shift = cplx(1.05 * mid * mid, 0.02);
        const WindowSolve shifted = SolveLowestInWindow(d0.pencil, preset.k_window, 4, opts);
        const std::vector<cplx> k0 = SortedK(base.pairs);
        const double dp = MaxRelDiff(SortedK(pinned.pairs), k0);
        const double ds = MaxRelDiff(SortedK(shifted.pairs), k0);
        double pc = 0.0;
        for (const auto *ws : {&base, &pinned, &shifted})
        {
          for (const auto &p : ws->pairs)
          {
            pc = std::max({pc, p.constraint, p.multiplier});
          }
        }
        o.Require(dp <= kInvarianceTol && ds <= kInvarianceTol && pc <= kConstraintTol,
                  Fmt("%s n=%d order=%d %s/%s: pinned vertex %d rel %.1e, shift rel %.1e, constraint %.1e",
                      DomainName(c.d), c.n, c.order, kSettings[s][0], kSettings[s][1], last_boundary, dp, ds, pc));
      }
    }
    return o;
  });

  std::printf("acceptance: %d of 9 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
