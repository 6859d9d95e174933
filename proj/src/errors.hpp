// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace maxtev
{

enum class ErrorCode
{
  InvalidArgument = 1,
  NonManifoldFace,
  InvertedTet,
  UnsupportedOrder,
  UnsupportedDegree,
  DegenerateTet,
  UnknownPreset,
  NotHermitian,
  NoCaseMatch,
  CaseUnsupported,
  SpaceMismatch,
  DimensionMismatch,
  FactorizationFailed,
  NoConvergence,
  DimensionTooLarge,
  NoEigenvaluesInWindow,
  InsufficientData,
  DegenerateError,
  SingularSystem,
  Io,
};

const char *ErrorCodeName(ErrorCode code);

// All library failures are reported by throwing this type; the C API maps the
// code onto its status enum.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace maxtev
