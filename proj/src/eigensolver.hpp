// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "assembly.hpp"

namespace maxtev
{

struct EigenPair
{
  cplx lambda;               // k^2
  cplx k;                    // principal square root, Re k >= 0
  CVec vec;                  // [field | multiplier], unit 2-norm
  double residual = 0.0;     // |Kx - lambda Mx| / (|Kx| + |lambda| |Mx|)
  double constraint = 0.0;   // |B^H x_field| / |x_field|
  double multiplier = 0.0;   // |x_mult| / |x_field|
  bool conjugate_pair = false;  // conj(lambda) is also an eigenvalue (reported once)
};

struct EigenResult
{
  std::vector<EigenPair> pairs;  // sorted by Re k, then Im k
  cplx shift;
  int krylov_dim = 0;
  int operator_applications = 0;
  bool converged = false;  // all nev wanted pairs met the tolerance
  bool real_factorization = false;
};

struct SolveOptions
{
  cplx shift = 0.0;
  int nev = 6;
  double tol = 1e-10;
  int krylov_dim = 0;      // 0 -> 4 nev + 20
  int max_krylov_dim = 0;  // 0 -> max(3 krylov_dim, 160), capped at the problem size
  int block_size = 3;      // starting vectors; resolves multiplicities up to this size
  std::uint64_t seed = 20240917;
  bool allow_real_factorization = true;
};

// Principal branch, Re k >= 0; Im k >= 0 when Re k == 0.
cplx TransmissionK(cplx lambda);

//
// Arnoldi on (K - sigma M)^{-1} M; Ritz values theta map to lambda = sigma + 1/theta.
// Values with |theta| < 1e-10 max|theta| belong to the infinite eigenvalues of
// the singular M and are discarded. Returns the nev eigenvalues nearest the
// shift that pass the residual test. FactorizationFailed if K - sigma M is
// singular.
//
EigenResult ShiftInvertSolve(const Pencil &pencil, const SolveOptions &opts);

// Sparse LU of K - sigma M, reusable across solves with the same shift.
// Real pencils with a real shift are factored in real arithmetic.
class ShiftedFactorization
{
public:
  ShiftedFactorization(const Pencil &pencil, cplx sigma, bool allow_real = true);
  ~ShiftedFactorization();
  ShiftedFactorization(const ShiftedFactorization &) = delete;
  ShiftedFactorization &operator=(const ShiftedFactorization &) = delete;

  cplx shift() const;
  bool real() const;
  CVec Solve(const CVec &b) const;  // (K - sigma M)^{-1} b

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Same, with a prepared factorization; opts.shift is taken from it.
EigenResult ShiftInvertSolve(const Pencil &pencil, const ShiftedFactorization &factorization, SolveOptions opts);

// Orthonormal basis of ker B^H for a dense n x m block B (column-pivoted QR,
// rank threshold 1e-12 relative).
Eigen::MatrixXcd OrthonormalKernelOfAdjoint(const Eigen::MatrixXcd &B);

// All finite generalized eigenvalues via LAPACK zggev (dimension <= 3000).
std::vector<cplx> DenseQZ(const Pencil &pencil);

// Pairs whose Re k lies in [k_lo, k_hi] (if given), sorted by Re k, at most
// `count`. NoEigenvaluesInWindow if nothing is left.
std::vector<EigenPair> SelectLowest(const EigenResult &result, int count,
                                    std::optional<std::pair<double, double>> window = std::nullopt);

}  // namespace maxtev
