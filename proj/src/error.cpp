#include "emissionscope/error.hpp"

namespace emissionscope {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::NonMonotonicTime: return "NonMonotonicTime";
    case Errc::SamplingGap: return "SamplingGap";
    case Errc::RangeViolation: return "RangeViolation";
    case Errc::EmptyStream: return "EmptyStream";
    case Errc::MissingChannel: return "MissingChannel";
    case Errc::UnitMismatch: return "UnitMismatch";
    case Errc::SeriesTooShort: return "SeriesTooShort";
    case Errc::EmptyWindow: return "EmptyWindow";
    case Errc::NoTemporalOverlap: return "NoTemporalOverlap";
    case Errc::AllWindowsDropped: return "AllWindowsDropped";
    case Errc::DegenerateDesign: return "DegenerateDesign";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonFiniteLoss: return "NonFiniteLoss";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::TooFewRows: return "TooFewRows";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::IoError: return "IoError";
    case Errc::UsageError: return "UsageError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code) {}

}  // namespace emissionscope
