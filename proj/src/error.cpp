#include "rwr/error.hpp"

namespace rwr {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ClickAfterTerminal: return "ClickAfterTerminal";
    case ErrorCode::PositionOutOfRange: return "PositionOutOfRange";
    case ErrorCode::UnsupportedRule: return "UnsupportedRule";
    case ErrorCode::InvalidRule: return "InvalidRule";
    case ErrorCode::EmptyHypothesisPool: return "EmptyHypothesisPool";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::NonMonotonicSequence: return "NonMonotonicSequence";
    case ErrorCode::UnknownVersion: return "UnknownVersion";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::EmptyAfterExclusion: return "EmptyAfterExclusion";
    case ErrorCode::EvenWindow: return "EvenWindow";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::SessionFinished: return "SessionFinished";
    case ErrorCode::BindFailure: return "BindFailure";
    case ErrorCode::DataDirUnwritable: return "DataDirUnwritable";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace rwr
