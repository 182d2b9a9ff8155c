#include "dek/error.hpp"

namespace dek {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::NonNumericContinuous: return "NonNumericContinuous";
    case ErrorCode::MissingValue: return "MissingValue";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::InvalidSchema: return "InvalidSchema";
    case ErrorCode::Io: return "Io";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NotEnoughCentroids: return "NotEnoughCentroids";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ObjectiveNonFinite: return "ObjectiveNonFinite";
    case ErrorCode::TooFewClusters: return "TooFewClusters";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::CurveTooShort: return "CurveTooShort";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
  }
  return "Unknown";
}

bool Error::is_data_error() const noexcept {
  switch (code_) {
    case ErrorCode::UnknownColumn:
    case ErrorCode::UnknownCategory:
    case ErrorCode::NonNumericContinuous:
    case ErrorCode::MissingValue:
    case ErrorCode::EmptyDataset:
    case ErrorCode::InvalidSchema:
    case ErrorCode::SchemaMismatch:
    case ErrorCode::TooFewRows:
      return true;
    default:
      return false;
  }
}

}  // namespace dek
