#include "stereotest/error.hpp"

namespace stereo {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::NotIntegerMultiple: return "NotIntegerMultiple";
    case ErrorCode::ProtocolViolation: return "ProtocolViolation";
    case ErrorCode::StimulusTooLarge: return "StimulusTooLarge";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::SessionFinished: return "SessionFinished";
    case ErrorCode::ReplayMismatch: return "ReplayMismatch";
    case ErrorCode::LowConfidence: return "LowConfidence";
    case ErrorCode::NoFigure: return "NoFigure";
    case ErrorCode::UnmappableValue: return "UnmappableValue";
    case ErrorCode::DegenerateMarginals: return "DegenerateMarginals";
    case ErrorCode::NoEffectivePairs: return "NoEffectivePairs";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::MalformedDataset: return "MalformedDataset";
    case ErrorCode::ImageIo: return "ImageIo";
    case ErrorCode::SessionNotFound: return "SessionNotFound";
    case ErrorCode::SessionBusy: return "SessionBusy";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace stereo
