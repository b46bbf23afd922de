#include "narrative/error.hpp"

namespace narrative {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NoScenesFound: return "NoScenesFound";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::DegenerateMatrix: return "DegenerateMatrix";
    case ErrorCode::ZeroProfile: return "ZeroProfile";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::NoCommonSegments: return "NoCommonSegments";
    case ErrorCode::RankTooLow: return "RankTooLow";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace narrative
