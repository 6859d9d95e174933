// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include "eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/UmfPackSupport>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "errors.hpp"

namespace maxtev
{

cplx TransmissionK(cplx lambda)
{
  cplx k = std::sqrt(lambda);
  if (k.real() < 0.0 || (k.real() == 0.0 && k.imag() < 0.0))
  {
    k = -k;
  }
  return k;
}

namespace
{

bool IsReal(const SpMat &X)
{
  for (int j = 0; j < X.outerSize(); ++j)
  {
    for (SpMat::InnerIterator it(X, j); it; ++it)
    {
      if (it.value().imag() != 0.0)
      {
        return false;
      }
    }
  }
  return true;
}

void NormalizePhase(CVec &x)
{
  x /= x.norm();
  Eigen::Index imax = 0;
  x.cwiseAbs().maxCoeff(&imax);
  const cplx phase = std::abs(x(imax)) > 0.0 ? std::conj(x(imax)) / std::abs(x(imax)) : cplx(1.0);
  x *= phase;
}

bool KLess(const EigenPair &a, const EigenPair &b)
{
  if (a.k.real() != b.k.real())
  {
    return a.k.real() < b.k.real();
  }
  return a.k.imag() < b.k.imag();
}

}  // namespace

// Sparse LU of K - sigma M. Real pencils with a real shift are factored in
// real arithmetic and applied to the real and imaginary parts separately.
struct ShiftedFactorization::Impl
{
  Impl(const Pencil &p, cplx sigma, bool allow_real) : shift(sigma)
  {
    real_ = allow_real && sigma.imag() == 0.0 && IsReal(p.K) && IsReal(p.M);
    const SpMat shifted = p.K - sigma * p.M;
    bool ok = false;
    if (real_)
    {
      rmat_ = shifted.real();
      rmat_.makeCompressed();
      rlu_ = std::make_unique<Eigen::UmfPackLU<Eigen::SparseMatrix<double>>>();
      Configure(rlu_->umfpackControl());
      rlu_->compute(rmat_);
      ok = rlu_->info() == Eigen::Success;
    }
    else
    {
      cmat_ = shifted;
      cmat_.makeCompressed();
      clu_ = std::make_unique<Eigen::UmfPackLU<SpMat>>();
      Configure(clu_->umfpackControl());
      clu_->compute(cmat_);
      ok = clu_->info() == Eigen::Success;
    }
    if (!ok)
    {
      std::ostringstream os;
      os << "sparse LU of K - sigma M failed for sigma = " << sigma
         << " (shift may coincide with an eigenvalue; retry with a perturbed shift)";
      throw Error(ErrorCode::FactorizationFailed, os.str());
    }
  }

  template <typename Control>
  static void Configure(Control &c)
  {
    c(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
    c(UMFPACK_IRSTEP) = 1;
  }

  CVec Solve(const CVec &b) const
  {
    if (!real_)
    {
      return clu_->solve(b);
    }
    const Eigen::VectorXd re = rlu_->solve(Eigen::VectorXd(b.real()));
    const Eigen::VectorXd im = rlu_->solve(Eigen::VectorXd(b.imag()));
    CVec x(b.size());
    x.real() = re;
    x.imag() = im;
    return x;
  }

  cplx shift;
  bool real_ = false;
  Eigen::SparseMatrix<double> rmat_;
  SpMat cmat_;
  std::unique_ptr<Eigen::UmfPackLU<Eigen::SparseMatrix<double>>> rlu_;
  std::unique_ptr<Eigen::UmfPackLU<SpMat>> clu_;
};


ShiftedFactorization::ShiftedFactorization(const Pencil &pencil, cplx sigma, bool allow_real)
    : impl_(std::make_unique<Impl>(pencil, sigma, allow_real))
{
}

ShiftedFactorization::~ShiftedFactorization() = default;

cplx ShiftedFactorization::shift() const { return impl_->shift; }

bool ShiftedFactorization::real() const { return impl_->real_; }

CVec ShiftedFactorization::Solve(const CVec &b) const { return impl_->Solve(b); }

EigenResult ShiftInvertSolve(const Pencil &pencil, const SolveOptions &opts)
{
  const ShiftedFactorization solver(pencil, opts.shift, opts.allow_real_factorization);
  return ShiftInvertSolve(pencil, solver, opts);
}

EigenResult ShiftInvertSolve(const Pencil &pencil, const ShiftedFactorization &solver, SolveOptions opts)
{
  opts.shift = solver.shift();
  const int n = pencil.dim();
  if (opts.nev < 1)
  {
    throw Error(ErrorCode::InvalidArgument, "nev must be >= 1");
  }
  if (opts.block_size < 1)
  {
    throw Error(ErrorCode::InvalidArgument, "block_size must be >= 1");
  }
  if (n < 2)
  {
    throw Error(ErrorCode::DimensionMismatch, "pencil too small for Arnoldi");
  }
  const int p = std::min(opts.block_size, n - 1);
  const int m0 = std::min(opts.krylov_dim > 0 ? opts.krylov_dim : 4 * opts.nev + 20, n - p);
  const int mmax = std::max(m0, std::min(opts.max_krylov_dim > 0 ? opts.max_krylov_dim
                                                                  : std::max(3 * m0, 160),
                                         n - p));

  EigenResult result;
  result.shift = opts.shift;
  result.real_factorization = solver.real();

  auto apply = [&](const CVec &x) {
    ++result.operator_applications;
    return solver.Solve(pencil.M * x);
  };

  // Block Arnoldi: column j of H holds the coefficients of Op v_j in the basis,
  // so H is banded Hessenberg with bandwidth p. Columns are applied one at a
  // time; rank-deficient directions are dropped.
  Eigen::MatrixXcd V(n, mmax + p);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(mmax + p, mmax);
  int nv = 0;
  auto orthonormalize_into = [&](CVec w, CVec *coeffs) {
    const double w0 = w.norm();
    auto basis = V.leftCols(nv);
    CVec h = basis.adjoint() * w;
    w -= basis * h;
    const CVec h2 = basis.adjoint() * w;
    w -= basis * h2;
    h += h2;
    if (coeffs)
    {
      *coeffs = h;
    }
    const double beta = w.norm();
    if (beta > 1e-12 * std::max(w0, 1e-300))
    {
      V.col(nv++) = w / beta;
      return beta;
    }
    return 0.0;
  };
  {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int b = 0; b < p; ++b)
    {
      CVec r(n);
      for (int i = 0; i < n; ++i)
      {
        r(i) = cplx(uni(rng), uni(rng));
      }
      // One application purges components along the infinite eigenvalues.
      orthonormalize_into(apply(r), nullptr);
    }
  }
  if (nv == 0)
  {
    throw Error(ErrorCode::NoConvergence, "starting block lies in the kernel of M");
  }

  int j = 0;
  int check_at = m0;
  std::vector<EigenPair> accepted;
  while (true)
  {
    CVec h;
    const int row = nv;
    const double beta = orthonormalize_into(apply(V.col(j)), &h);
    H.col(j).head(h.size()) = h;
    if (beta > 0.0)
    {
      H(row, j) = beta;
    }
    ++j;
    const bool exhausted = nv <= j;
    if (j < check_at && !exhausted && j < mmax)
    {
      continue;
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(H.topLeftCorner(j, j));
    const CVec theta = ces.eigenvalues();
    std::vector<int> order(j);
    for (int i = 0; i < j; ++i)
    {
      order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return std::abs(theta(x)) > std::abs(theta(y)); });
    const double tmax = std::abs(theta(order[0]));

    accepted.clear();
    int wanted_ok = 0;
    const int candidates = std::min(j, 2 * opts.nev + 4);
    for (int c = 0; c < candidates; ++c)
    {
      const int idx = order[c];
      if (std::abs(theta(idx)) < 1e-10 * tmax)
      {
        break;
      }
      const cplx lambda = opts.shift + 1.0 / theta(idx);
      CVec x = V.leftCols(j) * ces.eigenvectors().col(idx);
      NormalizePhase(x);
      const CVec kx = pencil.K * x;
      const CVec mx = pencil.M * x;
      const double res = (kx - lambda * mx).norm() / (kx.norm() + std::abs(lambda) * mx.norm());
      if (!(res <= opts.tol))
      {
        continue;
      }
      if (c < opts.nev)
      {
        ++wanted_ok;
      }
      // A Ritz value within 1e-10 of an accepted one is a second copy only if
      // its vector is independent of the accepted vectors for that value.
      std::vector<const CVec *> close;
      for (const auto &e : accepted)
      {
        if (std::abs(e.lambda - lambda) <= 1e-10 * std::abs(lambda))
        {
          close.push_back(&e.vec);
        }
      }
      if (!close.empty())
      {
        Eigen::MatrixXcd Q(n, static_cast<Eigen::Index>(close.size()));
        for (std::size_t q = 0; q < close.size(); ++q)
        {
          Q.col(static_cast<Eigen::Index>(q)) = *close[q];
        }
        const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Q);
        const Eigen::MatrixXcd Qo = qr.householderQ() * Eigen::MatrixXcd::Identity(n, Q.cols());
        const double indep = (x - Qo * (Qo.adjoint() * x)).norm();
        if (indep <= 1e-3)
        {
          continue;
        }
      }
      EigenPair ep;
      // Real eigenvalues come back with rounding-level imaginary parts.
      ep.lambda = std::abs(lambda.imag()) <= 1e-10 * std::abs(lambda) ? cplx(lambda.real(), 0.0) : lambda;
      ep.k = TransmissionK(ep.lambda);
      ep.residual = res;
      const double fnorm = x.head(pencil.n_field).norm();
      ep.constraint = kx.tail(pencil.n_mult).norm() / fnorm;
      ep.multiplier = x.tail(pencil.n_mult).norm() / fnorm;
      ep.vec = std::move(x);
      accepted.push_back(std::move(ep));
    }
    result.krylov_dim = j;
    if (wanted_ok >= std::min(opts.nev, j))
    {
      result.converged = true;
      break;
    }
    if (exhausted || j >= mmax)
    {
      break;
    }
    check_at = std::min(j + std::max(opts.nev, 10), mmax);
  }

  // Report each conjugate pair once, with Im k >= 0.
  std::vector<bool> drop(accepted.size(), false);
  for (std::size_t a = 0; a < accepted.size(); ++a)
  {
    const cplx la = accepted[a].lambda;
    if (std::abs(la.imag()) <= 1e-9 * std::abs(la) || accepted[a].k.imag() >= 0.0)
    {
      continue;
    }
    for (std::size_t b = 0; b < accepted.size(); ++b)
    {
      if (b != a && !drop[b] && std::abs(accepted[b].lambda - std::conj(la)) <= 1e-8 * std::abs(la))
      {
        drop[a] = true;
        accepted[b].conjugate_pair = true;
        break;
      }
    }
  }
  for (std::size_t a = 0; a < accepted.size(); ++a)
  {
    if (!drop[a])
    {
      result.pairs.push_back(std::move(accepted[a]));
    }
  }
  std::sort(result.pairs.begin(), result.pairs.end(), KLess);
  return result;
}

Eigen::MatrixXcd OrthonormalKernelOfAdjoint(const Eigen::MatrixXcd &B)
{
  const Eigen::Index n = B.rows();
  if (B.cols() == 0)
  {
    return Eigen::MatrixXcd::Identity(n, n);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(B);
  qr.setThreshold(1e-12);
  const Eigen::Index r = qr.rank();
  const Eigen::MatrixXcd Q = qr.householderQ();
  return Q.rightCols(n - r);
}

std::vector<cplx> DenseQZ(const Pencil &pencil)
{
  const int n = pencil.dim();
  if (n > 3000)
  {
    throw Error(ErrorCode::DimensionTooLarge,
                "dense QZ limited to dimension 3000, pencil has " + std::to_string(n));
  }
  const int nf = pencil.n_field;
  const Eigen::MatrixXcd K(pencil.K), M(pencil.M);
  // Finite eigenvectors satisfy B^H w = 0; restricting to an orthonormal basis
  // Z of ker B^H removes the multiplier block and every infinite eigenvalue.
  const Eigen::MatrixXcd Z = OrthonormalKernelOfAdjoint(K.topRightCorner(nf, pencil.n_mult));
  Eigen::MatrixXcd a = Z.adjoint() * K.topLeftCorner(nf, nf) * Z;
  Eigen::MatrixXcd b = Z.adjoint() * M.topLeftCorner(nf, nf) * Z;
  const int m = static_cast<int>(a.rows());
  // Unit max entry so the |beta| threshold is absolute.
  const double ks = a.cwiseAbs().maxCoeff(), ms = b.cwiseAbs().maxCoeff();
  a /= ks;
  b /= ms;
  std::vector<cplx> alpha(m), beta(m);
  const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', m, a.data(), m, b.data(), m, alpha.data(),
                                        beta.data(), nullptr, 1, nullptr, 1);
  if (info != 0)
  {
    throw Error(ErrorCode::NoConvergence, "zggev failed with info = " + std::to_string(info));
  }
  std::vector<cplx> out;
  for (int i = 0; i < m; ++i)
  {
    if (std::abs(beta[i]) < 1e-12)
    {
      continue;
    }
    out.push_back(alpha[i] / beta[i] * (ks / ms));
  }
  std::sort(out.begin(), out.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return out;
}

std::vector<EigenPair> SelectLowest(const EigenResult &result, int count,
                                    std::optional<std::pair<double, double>> window)
{
  std::vector<EigenPair> out;
  for (const auto &p : result.pairs)
  {
    if (window && (p.k.real() < window->first || p.k.real() > window->second))
    {
      continue;
    }
    out.push_back(p);
  }
  if (out.empty())
  {
    throw Error(ErrorCode::NoEigenvaluesInWindow, "no converged eigenvalue in the requested window");
  }
  std::sort(out.begin(), out.end(), KLess);
  if (static_cast<int>(out.size()) > count)
  {
    out.resize(count);
  }
  return out;
}

}  // namespace maxtev
