#pragma once

#include <stdexcept>
#include <string>

namespace narrative {

enum class ErrorCode {
  NoScenesFound,
  EmptyDocument,
  DegenerateMatrix,
  ZeroProfile,
  TooShort,
  NoCommonSegments,
  RankTooLow,
  InvalidArgument,
  Io,
  Internal,  // invariant violation; the CLI maps this to exit code 2
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace narrative
