#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace floquet {

enum class Errc {
  // circuit algebra
  DuplicateGate,
  MissingGate,
  OutOfRange,
  InvalidClassParameters,
  InvalidP,
  IllegalSwap,
  TooLarge,
  InternalInvariantViolation,
  // unitary engine
  NonUnitaryGate,
  DimensionOverflow,
  InvalidSector,
  NotBlockDiagonal,
  NonUnitarySpectrum,
  // spectral statistics
  TooFewPhases,
  EmptySample,
  InvalidQ,
  // anything else the caller got wrong
  InvalidArgument,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::DuplicateGate: return "DuplicateGate";
    case Errc::MissingGate: return "MissingGate";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::InvalidClassParameters: return "InvalidClassParameters";
    case Errc::InvalidP: return "InvalidP";
    case Errc::IllegalSwap: return "IllegalSwap";
    case Errc::TooLarge: return "TooLarge";
    case Errc::InternalInvariantViolation: return "InternalInvariantViolation";
    case Errc::NonUnitaryGate: return "NonUnitaryGate";
    case Errc::DimensionOverflow: return "DimensionOverflow";
    case Errc::InvalidSector: return "InvalidSector";
    case Errc::NotBlockDiagonal: return "NotBlockDiagonal";
    case Errc::NonUnitarySpectrum: return "NonUnitarySpectrum";
    case Errc::TooFewPhases: return "TooFewPhases";
    case Errc::EmptySample: return "EmptySample";
    case Errc::InvalidQ: return "InvalidQ";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// The single exception type thrown by the library. `code()` identifies the
/// failure; `value()` carries the offending integer when there is one (for
/// instance the duplicated gate number).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail, std::optional<long long> value = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), value_(value) {}

  Errc code() const noexcept { return code_; }
  std::optional<long long> value() const noexcept { return value_; }

 private:
  Errc code_;
  std::optional<long long> value_;
};

}  // namespace floquet
