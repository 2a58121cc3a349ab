#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace emissionscope {

/// Error kinds raised across the pipeline. The name of each kind is part of
/// the CLI contract: it is printed verbatim on failure.
enum class Errc {
  MalformedHeader,
  MalformedRow,
  NonMonotonicTime,
  SamplingGap,
  RangeViolation,
  EmptyStream,
  MissingChannel,
  UnitMismatch,
  SeriesTooShort,
  EmptyWindow,
  NoTemporalOverlap,
  AllWindowsDropped,
  DegenerateDesign,
  DimensionMismatch,
  NonFiniteLoss,
  EmptyDataset,
  InvalidConfig,
  LengthMismatch,
  NonFiniteInput,
  TooFewRows,
  EmptyInput,
  IoError,
  UsageError,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

}  // namespace emissionscope
