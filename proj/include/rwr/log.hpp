#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "rwr/figure.hpp"
#include "rwr/rule.hpp"
#include "rwr/session.hpp"

namespace rwr {

// One click record.
struct TrialEvent {
  std::string session_id;
  int seq = 1;
  std::int64_t t_ms = 0;  // since session start
  int set_seq = 1;
  int position = 0;
  Figure figure;
  Feedback feedback = Feedback::Wrong;

  friend bool operator==(const TrialEvent&, const TrialEvent&) = default;
};

struct LogHeader {
  std::string session_id;
  std::uint64_t seed = 0;
  RightnessRule rule;
  std::string started;  // ISO 8601, UTC

  friend bool operator==(const LogHeader&, const LogHeader&) = default;
};

struct SessionLog {
  LogHeader header;
  std::vector<TrialEvent> events;
};

// RWRLOG v1, line oriented:
//   RWRLOG v1 session=<id> seed=<u64> rule=<kind>[:stride] started=<ISO8601>
//   <seq>,<t_ms>,<set_seq>,<position>,<shape>,<shade>,<size>,<R|W>
std::string format_header(const LogHeader& header);
std::string format_event(const TrialEvent& event);
std::string format_log(const SessionLog& log);

// Validates every line. Errors carry the 1-based line number in the message:
// MalformedLine, PositionOutOfRange, NonMonotonicSequence, UnknownVersion.
SessionLog parse_log(std::string_view text);
SessionLog parse_log(std::istream& in);

std::string iso8601_utc(std::int64_t unix_ms);

}  // namespace rwr
