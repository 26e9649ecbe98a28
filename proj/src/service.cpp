#include "rwr/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <random>

#include <fmt/format.h>

#include "rwr/analysis.hpp"
#include "rwr/error.hpp"
#include "rwr/log.hpp"
#include "rwr/report.hpp"

namespace rwr {

namespace {

// Append-only log file; every line goes out in one write() and is fsync'ed.
class AppendLog {
 public:
  explicit AppendLog(const std::filesystem::path& path)
      : fd_(::open(path.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_APPEND | O_CLOEXEC, 0644)) {
    if (fd_ < 0) {
      throw Error(ErrorCode::IoError,
                  fmt::format("cannot create {}: {}", path.string(), std::strerror(errno)));
    }
  }
  ~AppendLog() {
    if (fd_ >= 0) ::close(fd_);
  }
  AppendLog(const AppendLog&) = delete;
  AppendLog& operator=(const AppendLog&) = delete;

  void append_line(std::string line) {
    line += '\n';
    std::size_t written = 0;
    while (written < line.size()) {
      const auto n = ::write(fd_, line.data() + written, line.size() - written);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw Error(ErrorCode::IoError, fmt::format("log write failed: {}", std::strerror(errno)));
      }
      written += static_cast<std::size_t>(n);
    }
    if (::fsync(fd_) != 0) {
      throw Error(ErrorCode::IoError, fmt::format("log fsync failed: {}", std::strerror(errno)));
    }
  }

 private:
  int fd_;
};

SetView view_of(const FigureSet& set) { return {set.set_seq, set.figures}; }

std::uint64_t entropy_seed() {
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

}  // namespace

struct SessionService::Record {
  Record(std::string id, RightnessRule rule, std::uint64_t seed, const std::filesystem::path& path,
         std::chrono::system_clock::time_point now)
      : session(std::move(id), rule, seed), log(path), created_at(now), last_event_at(now) {}

  std::mutex mutex;
  Session session;
  AppendLog log;
  std::chrono::system_clock::time_point created_at;
  std::chrono::system_clock::time_point last_event_at;
  int seq = 0;
  std::int64_t last_t_ms = 0;
};

SessionService::SessionService(ServiceConfig config, Clock clock)
    : config_(std::move(config)), clock_(std::move(clock)), id_rng_(entropy_seed()) {
  std::error_code ec;
  std::filesystem::create_directories(config_.data_dir, ec);
  const auto probe = config_.data_dir / ".rwr-write-probe";
  std::ofstream out(probe);
  if (ec || !out) {
    throw Error(ErrorCode::DataDirUnwritable,
                fmt::format("data directory {} is not writable", config_.data_dir.string()));
  }
  out.close();
  std::filesystem::remove(probe, ec);
}

SessionService::~SessionService() = default;

std::string SessionService::new_session_id() {
  std::lock_guard lock(id_mutex_);
  return fmt::format("{:016x}", id_rng_.next());
}

std::filesystem::path SessionService::log_path(const std::string& session_id) const {
  return config_.data_dir / (session_id + ".rwrlog");
}

CreatedSession SessionService::create_session(std::optional<std::string_view> rule_text,
                                              std::optional<std::uint64_t> seed) {
  const RightnessRule rule = rule_text ? parse_rule(*rule_text) : config_.default_rule;
  const std::uint64_t rng_seed = seed ? *seed : entropy_seed();

  std::string id = new_session_id();
  const auto now = clock_();
  auto record = std::make_shared<Record>(id, rule, rng_seed, log_path(id), now);
  const auto unix_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
  record->log.append_line(format_header({id, rng_seed, rule, iso8601_utc(unix_ms)}));

  CreatedSession created{id, view_of(record->session.current_set())};
  std::unique_lock lock(sessions_mutex_);
  sessions_.emplace(std::move(id), std::move(record));
  return created;
}

std::shared_ptr<SessionService::Record> SessionService::find(const std::string& session_id) {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::UnknownSession, fmt::format("unknown session '{}'", session_id));
  }
  return it->second;
}

void SessionService::expire_if_idle(Record& record) {
  if (record.session.status() == SessionStatus::Active &&
      clock_() - record.last_event_at > config_.idle_timeout) {
    record.session.abandon();
  }
}

SetView SessionService::current_set(const std::string& session_id) {
  auto record = find(session_id);
  std::lock_guard lock(record->mutex);
  expire_if_idle(*record);
  return view_of(record->session.current_set());
}

SessionStatus SessionService::status(const std::string& session_id) {
  auto record = find(session_id);
  std::lock_guard lock(record->mutex);
  expire_if_idle(*record);
  return record->session.status();
}

ClickResponse SessionService::submit_click(const std::string& session_id, int position) {
  auto record = find(session_id);
  std::lock_guard lock(record->mutex);
  expire_if_idle(*record);
  if (record->session.status() != SessionStatus::Active) {
    throw Error(ErrorCode::SessionFinished,
                fmt::format("session '{}' is {}", session_id, to_string(record->session.status())));
  }
  if (position < 0 || position >= kSetSize) {
    throw Error(ErrorCode::PositionOutOfRange, fmt::format("position {} outside 0..8", position));
  }

  const auto now = clock_();
  const ClickResult result = record->session.judge_click(position);
  // Wall clock may step backwards; the log keeps t_ms non-decreasing.
  const std::int64_t t_ms = std::max<std::int64_t>(
      record->last_t_ms,
      std::chrono::duration_cast<std::chrono::milliseconds>(now - record->created_at).count());
  record->last_t_ms = t_ms;
  record->log.append_line(format_event({session_id, ++record->seq, t_ms, result.set_seq, position,
                                        result.clicked, result.feedback}));
  record->last_event_at = now;

  ClickResponse response;
  response.feedback = result.feedback;
  response.status = result.status;
  if (result.feedback == Feedback::Right && result.status == SessionStatus::Active) {
    response.next_set = view_of(record->session.current_set());
  }
  return response;
}

std::string SessionService::summary_json(const std::string& session_id) {
  auto record = find(session_id);
  std::string text;
  {
    std::lock_guard lock(record->mutex);
    std::ifstream in(log_path(session_id), std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read log of session " + session_id);
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  const SessionAnalysis analysis = analyze_session(parse_log(std::string_view(text)));
  return emit_report(std::span<const SessionAnalysis>(&analysis, 1), ReportFormat::Json);
}

}  // namespace rwr
