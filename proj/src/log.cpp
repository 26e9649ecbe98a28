#include "rwr/log.hpp"

#include <charconv>
#include <ctime>
#include <iterator>
#include <sstream>

#include <fmt/format.h>

#include "rwr/error.hpp"

namespace rwr {

namespace {

constexpr std::string_view kMagic = "RWRLOG";
constexpr std::string_view kVersion = "v1";

[[noreturn]] void fail(ErrorCode code, std::size_t line, const std::string& what) {
  throw Error(code, fmt::format("line {}: {}", line, what));
}

std::vector<std::string_view> split(std::string_view text, char delimiter) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto end = text.find(delimiter, start);
    if (end == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, end - start));
    start = end + 1;
  }
}

template <typename Int>
std::optional<Int> parse_int(std::string_view text) {
  Int value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

LogHeader parse_header(std::string_view line) {
  const auto tokens = split(line, ' ');
  if (tokens.empty() || tokens[0] != kMagic) fail(ErrorCode::MalformedLine, 1, "missing RWRLOG header");
  if (tokens.size() < 2 || tokens[1] != kVersion) {
    fail(ErrorCode::UnknownVersion, 1,
         fmt::format("unsupported log version '{}'", tokens.size() < 2 ? "" : tokens[1]));
  }

  LogHeader header;
  bool has_session = false, has_seed = false, has_rule = false, has_started = false;
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string_view::npos) fail(ErrorCode::MalformedLine, 1, "expected key=value");
    const auto key = tokens[i].substr(0, eq);
    const auto value = tokens[i].substr(eq + 1);
    if (key == "session" && !value.empty()) {
      header.session_id = std::string(value);
      has_session = true;
    } else if (key == "seed") {
      const auto seed = parse_int<std::uint64_t>(value);
      if (!seed) fail(ErrorCode::MalformedLine, 1, "bad seed");
      header.seed = *seed;
      has_seed = true;
    } else if (key == "rule") {
      try {
        header.rule = parse_rule(value);
      } catch (const Error& e) {
        fail(ErrorCode::MalformedLine, 1, e.what());
      }
      has_rule = true;
    } else if (key == "started") {
      header.started = std::string(value);
      has_started = true;
    } else {
      fail(ErrorCode::MalformedLine, 1, fmt::format("unknown header key '{}'", key));
    }
  }
  if (!(has_session && has_seed && has_rule && has_started)) {
    fail(ErrorCode::MalformedLine, 1, "header needs session, seed, rule and started");
  }
  return header;
}

TrialEvent parse_event(std::string_view line, std::size_t line_no, const std::string& session_id) {
  const auto fields = split(line, ',');
  if (fields.size() != 8) {
    fail(ErrorCode::MalformedLine, line_no, fmt::format("expected 8 fields, got {}", fields.size()));
  }
  TrialEvent event;
  event.session_id = session_id;

  const auto seq = parse_int<int>(fields[0]);
  const auto t_ms = parse_int<std::int64_t>(fields[1]);
  const auto set_seq = parse_int<int>(fields[2]);
  const auto position = parse_int<int>(fields[3]);
  if (!seq || *seq < 1) fail(ErrorCode::MalformedLine, line_no, "bad seq");
  if (!t_ms || *t_ms < 0) fail(ErrorCode::MalformedLine, line_no, "bad t_ms");
  if (!set_seq || *set_seq < 1) fail(ErrorCode::MalformedLine, line_no, "bad set_seq");
  if (!position) fail(ErrorCode::MalformedLine, line_no, "bad position");
  if (*position < 0 || *position >= kSetSize) {
    fail(ErrorCode::PositionOutOfRange, line_no, fmt::format("position {} outside 0..8", *position));
  }
  event.seq = *seq;
  event.t_ms = *t_ms;
  event.set_seq = *set_seq;
  event.position = *position;

  const auto shape = parse_shape(fields[4]);
  const auto shade = parse_shade(fields[5]);
  const auto size = parse_size(fields[6]);
  if (!shape || !shade || !size) fail(ErrorCode::MalformedLine, line_no, "unknown figure attribute");
  event.figure = Figure{*shape, *shade, *size};

  if (fields[7] == "R") {
    event.feedback = Feedback::Right;
  } else if (fields[7] == "W") {
    event.feedback = Feedback::Wrong;
  } else {
    fail(ErrorCode::MalformedLine, line_no, "feedback must be R or W");
  }
  return event;
}

void check_order(const TrialEvent& previous, const TrialEvent& next, std::size_t line_no) {
  if (next.seq <= previous.seq) fail(ErrorCode::NonMonotonicSequence, line_no, "seq not increasing");
  if (next.t_ms < previous.t_ms) fail(ErrorCode::NonMonotonicSequence, line_no, "t_ms decreasing");
  const int expected_set = previous.set_seq + (previous.feedback == Feedback::Right ? 1 : 0);
  if (next.set_seq != expected_set) {
    fail(ErrorCode::NonMonotonicSequence, line_no,
         fmt::format("set_seq {} where {} expected", next.set_seq, expected_set));
  }
}

}  // namespace

std::string format_header(const LogHeader& header) {
  return fmt::format("{} {} session={} seed={} rule={} started={}", kMagic, kVersion,
                     header.session_id, header.seed, to_string(header.rule), header.started);
}

std::string format_event(const TrialEvent& event) {
  return fmt::format("{},{},{},{},{},{},{},{}", event.seq, event.t_ms, event.set_seq,
                     event.position, to_string(event.figure.shape), to_string(event.figure.shade),
                     to_string(event.figure.size), event.feedback == Feedback::Right ? "R" : "W");
}

std::string format_log(const SessionLog& log) {
  std::string text = format_header(log.header);
  text += '\n';
  for (const auto& event : log.events) {
    text += format_event(event);
    text += '\n';
  }
  return text;
}

SessionLog parse_log(std::string_view text) {
  auto lines = split(text, '\n');
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) fail(ErrorCode::MalformedLine, 1, "empty log");

  SessionLog log;
  log.header = parse_header(lines[0]);
  log.events.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    TrialEvent event = parse_event(lines[i], line_no, log.header.session_id);
    if (!log.events.empty()) check_order(log.events.back(), event, line_no);
    log.events.push_back(std::move(event));
  }
  return log;
}

SessionLog parse_log(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_log(std::string_view(text));
}

std::string iso8601_utc(std::int64_t unix_ms) {
  const std::time_t seconds = static_cast<std::time_t>(unix_ms / 1000);
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

}  // namespace rwr
