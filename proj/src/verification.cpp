// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include "verification.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/UmfPackSupport>

#include "eigensolver.hpp"
#include "errors.hpp"

namespace maxtev
{

namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

CVec RandomVector(int n, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  CVec x(n);
  for (int i = 0; i < n; ++i)
  {
    x(i) = cplx(uni(rng), uni(rng));
  }
  return x;
}

std::string Label(const TetMesh &mesh, int order, const std::string &extra)
{
  std::ostringstream os;
  os << DomainName(mesh.domain) << " n=" << mesh.n << " order=" << order;
  if (!extra.empty())
  {
    os << " " << extra;
  }
  return os.str();
}

// Coupled seminorm matrix: curl energy (form A) or L2 mass (form C) of both fields.
SpMat SeminormMatrix(const CoupledFieldSpace &H, FormKind form)
{
  const SpMat Ew = H.WEmbedding(), Ev = H.VEmbedding();
  const SpMat s = form == FormKind::A ? AssembleFieldCurlCurl(H, nullptr) : AssembleFieldMass(H, nullptr);
  SpMat r = SpMat(Ew * s * SpMat(Ew.transpose())) + SpMat(Ev * s * SpMat(Ev.transpose()));
  r.makeCompressed();
  return r;
}

double RelDiff(const CVec &a, const CVec &b)
{
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

}  // namespace

void PropertyReport::WriteText(std::ostream &os) const
{
  os << property << ": " << (passed ? "PASS" : "FAIL") << "  (" << threshold << ")\n";
  for (const auto &row : rows)
  {
    os << "  " << (row.passed ? "ok  " : "FAIL") << "  " << row.label;
    for (const auto &[key, value] : row.observed)
    {
      os << "  " << key << "=" << std::setprecision(6) << value;
    }
    os << "\n";
  }
}

void PropertyReport::WriteCsv(std::ostream &os) const
{
  os << "property,label,n,order,key,value,passed\n";
  for (const auto &row : rows)
  {
    for (const auto &[key, value] : row.observed)
    {
      os << property << ",\"" << row.label << "\"," << row.n << "," << row.order << "," << key << ","
         << std::setprecision(17) << value << "," << (row.passed ? 1 : 0) << "\n";
    }
  }
}

SpMat BuildTMatrix(const CoupledFieldSpace &H, TVariant variant)
{
  std::vector<Eigen::Triplet<cplx>> trips;
  const int nd = H.field().size;
  trips.reserve(3 * static_cast<std::size_t>(nd));
  for (int d = 0; d < nd; ++d)
  {
    const int iw = H.WIndex(d), iv = H.VIndex(d);
    if (iw == iv)
    {
      trips.emplace_back(iw, iw, variant == TVariant::Plus ? 1.0 : -1.0);
      continue;
    }
    if (variant == TVariant::Plus)
    {
      trips.emplace_back(iw, iw, 1.0);
      trips.emplace_back(iv, iw, 2.0);
      trips.emplace_back(iv, iv, -1.0);
    }
    else
    {
      trips.emplace_back(iw, iw, 1.0);
      trips.emplace_back(iw, iv, -2.0);
      trips.emplace_back(iv, iv, -1.0);
    }
  }
  SpMat T(H.dim(), H.dim());
  T.setFromTriplets(trips.begin(), trips.end());
  return T;
}

TCoercivityObservation ObserveTCoercivity(const CoupledFieldSpace &H, FormKind form, const CoefficientField &X,
                                          int trials, std::uint64_t seed, int dense_limit)
{
  if (trials < 1)
  {
    throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  }
  const auto [lo, hi] = SampledBounds(X, H.mesh().domain);
  TCoercivityObservation obs;
  obs.variant = SelectTVariant(lo, hi);
  const SpMat F = form == FormKind::A ? AssembleA(H, X) : AssembleC(H, X);
  const SpMat R = SeminormMatrix(H, form);
  const SpMat T = BuildTMatrix(H, obs.variant);

  std::mt19937_64 rng(seed);
  obs.trial_min = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t)
  {
    const CVec x = RandomVector(H.dim(), rng);
    const cplx num = (T * x).dot(F * x);
    const double den = std::real(x.dot(R * x));
    obs.trial_min = std::min(obs.trial_min, std::abs(num) / den);
  }

  obs.exact_min = kNaN;
  if (H.dim() <= dense_limit)
  {
    const Eigen::MatrixXcd TF = Eigen::MatrixXcd(SpMat(SpMat(T.adjoint()) * F));
    const Eigen::MatrixXcd S = 0.5 * (TF + TF.adjoint());
    const Eigen::MatrixXcd Rd(R);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> rs(Rd);
    const Eigen::VectorXd ev = rs.eigenvalues();
    const double cut = 1e-10 * ev.cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
    {
      if (ev(i) > cut)
      {
        keep.push_back(i);
      }
    }
    Eigen::MatrixXcd U(Rd.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
    {
      U.col(static_cast<Eigen::Index>(i)) = rs.eigenvectors().col(keep[i]) / std::sqrt(ev(keep[i]));
    }
    const Eigen::MatrixXcd Sr = U.adjoint() * S * U;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ss(0.5 * (Sr + Sr.adjoint()), Eigen::EigenvaluesOnly);
    obs.exact_min = ss.eigenvalues()(0);
  }
  return obs;
}

PropertyReport CheckTCoercivity(FormKind form, Domain domain, int order, const CoefficientField &X,
                                const std::vector<int> &ns, int trials)
{
  PropertyReport rep;
  rep.property = form == FormKind::A ? "t_coercivity_a" : "t_coercivity_c";
  rep.threshold = "ratio > 0 and >= 50% of coarsest-mesh value";
  double first_trial = kNaN, first_exact = kNaN;
  rep.passed = !ns.empty();
  for (int n : ns)
  {
    auto mesh = std::make_shared<const TetMesh>(BuildMesh(domain, n));
    const CoupledFieldSpace H(mesh, order);
    const auto obs = ObserveTCoercivity(H, form, X, trials);
    if (std::isnan(first_trial))
    {
      first_trial = obs.trial_min;
      first_exact = obs.exact_min;
    }
    PropertyRow row;
    row.label = Label(*mesh, order, (form == FormKind::A ? "A=" : "N=") + X.label() +
                                        (obs.variant == TVariant::Plus ? " T=plus" : " T=minus"));
    row.n = n;
    row.order = order;
    row.observed = {{"trial_min", obs.trial_min}, {"exact_min", obs.exact_min}};
    row.passed = obs.trial_min > 0.0 && obs.trial_min >= 0.5 * first_trial;
    if (!std::isnan(obs.exact_min))
    {
      row.passed = row.passed && obs.exact_min > 0.0 && (std::isnan(first_exact) || obs.exact_min >= 0.5 * first_exact);
    }
    rep.passed = rep.passed && row.passed;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

PoincareObservation ObservePoincare(const CoupledFieldSpace &H, const SpMat &B)
{
  if (H.dim() > 3000)
  {
    throw Error(ErrorCode::DimensionTooLarge,
                "discrete Poincare check is dense; field dimension " + std::to_string(H.dim()) + " exceeds 3000");
  }
  if (B.rows() != H.dim())
  {
    throw Error(ErrorCode::DimensionMismatch, "B rows do not match the field space");
  }
  const Eigen::MatrixXcd R(SeminormMatrix(H, FormKind::A));
  const Eigen::MatrixXcd M(SeminormMatrix(H, FormKind::C));
  const Eigen::MatrixXcd Z = OrthonormalKernelOfAdjoint(Eigen::MatrixXcd(B));
  PoincareObservation obs;
  {
    const Eigen::MatrixXcd Rz = Z.adjoint() * R * Z, Mz = Z.adjoint() * M * Z;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(0.5 * (Rz + Rz.adjoint()),
                                                                   0.5 * (Mz + Mz.adjoint()), Eigen::EigenvaluesOnly);
    obs.constrained_min = ges.eigenvalues()(0);
  }
  {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(R, M, Eigen::EigenvaluesOnly);
    obs.unconstrained_min = ges.eigenvalues()(0);
  }
  return obs;
}

PropertyReport CheckDiscretePoincare(Domain domain, int order, const CoefficientField &N, const std::vector<int> &ns)
{
  PropertyReport rep;
  rep.property = "discrete_poincare";
  rep.threshold = "constrained min > 0, >= 50% of coarsest-mesh value; unconstrained min ~ 0";
  double first = kNaN;
  rep.passed = !ns.empty();
  for (int n : ns)
  {
    auto mesh = std::make_shared<const TetMesh>(BuildMesh(domain, n));
    const CoupledFieldSpace H(mesh, order);
    const MultiplierSpace Q(mesh, order + 1);
    const SpMat B = AssembleB(Q, H, N);
    const auto obs = ObservePoincare(H, B);
    if (std::isnan(first))
    {
      first = obs.constrained_min;
    }
    PropertyRow row;
    row.label = Label(*mesh, order, "N=" + N.label());
    row.n = n;
    row.order = order;
    row.observed = {{"constrained_min", obs.constrained_min}, {"unconstrained_min", obs.unconstrained_min}};
    row.passed = obs.constrained_min > 0.0 && obs.constrained_min >= 0.5 * first &&
                 std::abs(obs.unconstrained_min) <= 1e-8 * obs.constrained_min;
    rep.passed = rep.passed && row.passed;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

SourceObservation ObserveSourceConsistency(const Discretization &d, std::uint64_t seed)
{
  const Pencil &p = d.pencil;
  const int n = p.dim(), nf = p.n_field, nm = p.n_mult;
  if (n > 3000)
  {
    throw Error(ErrorCode::DimensionTooLarge,
                "source consistency check is dense; dimension " + std::to_string(n) + " exceeds 3000");
  }
  Eigen::UmfPackLU<SpMat> lu;
  SpMat K = p.K;
  K.makeCompressed();
  lu.compute(K);
  if (lu.info() != Eigen::Success)
  {
    throw Error(ErrorCode::SingularSystem, "sparse factorization of the source-problem matrix failed");
  }
  const Eigen::MatrixXcd Kd(p.K);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> dlu(Kd);

  auto rhs_for = [&](const CVec &f) {
    CVec r = CVec::Zero(n);
    r.head(nf) = d.c * f;
    return r;
  };
  auto solve = [&](const CVec &rhs) -> CVec { return lu.solve(rhs); };

  std::mt19937_64 rng(seed);
  const CVec f = RandomVector(nf, rng);
  const CVec rhs = rhs_for(f);
  const CVec z = solve(rhs);
  const CVec zd = dlu.solve(rhs);

  SourceObservation obs;
  obs.residual = (p.K * z - rhs).norm() / rhs.norm();
  obs.sparse_dense_diff = RelDiff(z, zd);

  // G^H C G y = B^H f: the gradient part of the source drives the multiplier.
  const Eigen::MatrixXcd G(d.G);
  const Eigen::MatrixXcd GCG = G.adjoint() * Eigen::MatrixXcd(d.c) * G;
  const CVec bf = d.b.adjoint() * f;
  const CVec y_proj = GCG.partialPivLu().solve(bf);
  obs.multiplier_vs_projection = RelDiff(z.tail(nm), y_proj);

  const CVec f_perp = f - G * y_proj;
  const CVec z_perp = solve(rhs_for(f_perp));
  obs.projected_multiplier = z_perp.tail(nm).norm() / z_perp.head(nf).norm();

  const CVec z2 = solve(2.0 * rhs);
  obs.linearity = RelDiff(z2, 2.0 * z);
  obs.zero_source_norm = solve(CVec::Zero(n)).norm();
  return obs;
}

PropertyReport CheckSourceConsistency(Domain domain, int order, const CoefficientField &A, const CoefficientField &N,
                                      const std::vector<int> &ns)
{
  PropertyReport rep;
  rep.property = "source_consistency";
  rep.threshold = "residual, sparse/dense, multiplier checks <= 1e-9; linearity <= 1e-12; zero source -> 0";
  rep.passed = !ns.empty();
  for (int n : ns)
  {
    const Discretization d = Discretize(domain, n, order, A, N);
    const auto obs = ObserveSourceConsistency(d);
    PropertyRow row;
    row.label = Label(*d.mesh, order, "A=" + A.label() + " N=" + N.label());
    row.n = n;
    row.order = order;
    row.observed = {{"residual", obs.residual},
                    {"sparse_dense_diff", obs.sparse_dense_diff},
                    {"multiplier_vs_projection", obs.multiplier_vs_projection},
                    {"projected_multiplier", obs.projected_multiplier},
                    {"linearity", obs.linearity},
                    {"zero_source_norm", obs.zero_source_norm}};
    row.passed = obs.residual <= 1e-9 && obs.sparse_dense_diff <= 1e-9 && obs.multiplier_vs_projection <= 1e-9 &&
                 obs.projected_multiplier <= 1e-9 && obs.linearity <= 1e-12 && obs.zero_source_norm == 0.0;
    rep.passed = rep.passed && row.passed;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

IdentityObservation ObserveIdentities(const Discretization &d)
{
  IdentityObservation obs;
  obs.bcg = MaxAbs(SpMat(d.b - d.c * d.G)) / MaxAbs(d.b);
  obs.ag = MaxAbs(SpMat(d.a * d.G)) / MaxAbs(d.a);
  obs.k_herm = HermitianDefect(d.pencil.K);
  obs.m_herm = HermitianDefect(d.pencil.M);
  return obs;
}

PropertyReport CheckIdentities(Domain domain, int order, const CoefficientField &A, const CoefficientField &N,
                               const std::vector<int> &ns)
{
  PropertyReport rep;
  rep.property = "matrix_identities";
  rep.threshold = "|B - CG| <= 1e-11 |B|, |AG| <= 1e-12 |A| (max-abs); K, M Hermitian to 1e-14";
  rep.passed = !ns.empty();
  for (int n : ns)
  {
    const Discretization d = Discretize(domain, n, order, A, N);
    const auto obs = ObserveIdentities(d);
    PropertyRow row;
    row.label = Label(*d.mesh, order, "A=" + A.label() + " N=" + N.label());
    row.n = n;
    row.order = order;
    row.observed = {{"bcg", obs.bcg}, {"ag", obs.ag}, {"k_herm", obs.k_herm}, {"m_herm", obs.m_herm}};
    row.passed = obs.bcg <= 1e-11 && obs.ag <= 1e-12 && obs.k_herm <= 1e-14 && obs.m_herm <= 1e-14;
    rep.passed = rep.passed && row.passed;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace maxtev
