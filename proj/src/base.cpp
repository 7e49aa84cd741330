#include "pmeround/base.hpp"

namespace pmeround {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotIsometry: return "NotIsometry";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotDensity: return "NotDensity";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::EmptyDiagonal: return "EmptyDiagonal";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::NotProjective: return "NotProjective";
    case ErrorCode::NotProjectionGame: return "NotProjectionGame";
    case ErrorCode::SingularRho: return "SingularRho";
    case ErrorCode::NotBinary: return "NotBinary";
    case ErrorCode::OverlappingSets: return "OverlappingSets";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace pmeround
