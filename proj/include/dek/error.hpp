#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dek {

enum class ErrorCode {
  // dataset
  UnknownColumn,
  UnknownCategory,
  NonNumericContinuous,
  MissingValue,
  EmptyDataset,
  InvalidSchema,
  Io,
  // gower / dek_core
  SchemaMismatch,
  LengthMismatch,
  NotEnoughCentroids,
  TooFewRows,
  // de_engine
  InvalidConfig,
  ObjectiveNonFinite,
  // metrics / model selection
  TooFewClusters,
  InvalidRange,
  CurveTooShort,
  // synth_bench
  InvalidSpec,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Error type thrown by every module. The code is stable and machine-checkable;
/// the message carries the human-readable detail (row, column, value).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Data-level failures (bad input files) as opposed to runtime/usage failures.
  bool is_data_error() const noexcept;

 private:
  ErrorCode code_;
};

}  // namespace dek
