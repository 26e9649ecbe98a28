#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rwr {

enum class ErrorCode {
  ClickAfterTerminal,
  PositionOutOfRange,
  UnsupportedRule,
  InvalidRule,
  EmptyHypothesisPool,
  InvalidConfig,
  MalformedLine,
  NonMonotonicSequence,
  UnknownVersion,
  SeriesTooShort,
  EmptyAfterExclusion,
  EvenWindow,
  UnsupportedFormat,
  UnknownSession,
  SessionFinished,
  BindFailure,
  DataDirUnwritable,
  IoError,
};

std::string_view to_string(ErrorCode code);

// All engine failures surface as this exception; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rwr
