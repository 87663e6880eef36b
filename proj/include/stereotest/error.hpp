#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stereo {

enum class ErrorCode {
  InvalidProfile,
  InvalidGeometry,
  NotIntegerMultiple,
  ProtocolViolation,
  StimulusTooLarge,
  InvalidSpec,
  EmptyTable,
  SessionFinished,
  ReplayMismatch,
  LowConfidence,
  NoFigure,
  UnmappableValue,
  DegenerateMarginals,
  NoEffectivePairs,
  InvalidInput,
  MalformedDataset,
  ImageIo,
  SessionNotFound,
  SessionBusy,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (CLI, HTTP service, Python bindings) can map it without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stereo
