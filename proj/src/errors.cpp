// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include "errors.hpp"

namespace maxtev
{

const char *ErrorCodeName(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::InvalidArgument:
      return "InvalidArgument";
    case ErrorCode::NonManifoldFace:
      return "NonManifoldFace";
    case ErrorCode::InvertedTet:
      return "InvertedTet";
    case ErrorCode::UnsupportedOrder:
      return "UnsupportedOrder";
    case ErrorCode::UnsupportedDegree:
      return "UnsupportedDegree";
    case ErrorCode::DegenerateTet:
      return "DegenerateTet";
    case ErrorCode::UnknownPreset:
      return "UnknownPreset";
    case ErrorCode::NotHermitian:
      return "NotHermitian";
    case ErrorCode::NoCaseMatch:
      return "NoCaseMatch";
    case ErrorCode::CaseUnsupported:
      return "CaseUnsupported";
    case ErrorCode::SpaceMismatch:
      return "SpaceMismatch";
    case ErrorCode::DimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::FactorizationFailed:
      return "FactorizationFailed";
    case ErrorCode::NoConvergence:
      return "NoConvergence";
    case ErrorCode::DimensionTooLarge:
      return "DimensionTooLarge";
    case ErrorCode::NoEigenvaluesInWindow:
      return "NoEigenvaluesInWindow";
    case ErrorCode::InsufficientData:
      return "InsufficientData";
    case ErrorCode::DegenerateError:
      return "DegenerateError";
    case ErrorCode::SingularSystem:
      return "SingularSystem";
    case ErrorCode::Io:
      return "Io";
  }
  return "Unknown";
}

}  // namespace maxtev
