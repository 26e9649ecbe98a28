#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "rwr/rng.hpp"
#include "rwr/session.hpp"

namespace rwr {

struct ServiceConfig {
  std::filesystem::path data_dir = "data";
  std::chrono::minutes idle_timeout{60};
  RightnessRule default_rule{};
};

// What a participant may see of a set: figures only, never rightness.
struct SetView {
  int set_seq = 1;
  std::array<Figure, kSetSize> figures{};
};

struct CreatedSession {
  std::string session_id;
  SetView set;
};

struct ClickResponse {
  Feedback feedback = Feedback::Wrong;
  SessionStatus status = SessionStatus::Active;
  std::optional<SetView> next_set;
};

inline constexpr std::string_view kRightChoice = "Right choice";
inline constexpr std::string_view kWrongChoice = "Wrong choice";

// Hosts many sessions. Clicks on one session are serialized; each click is
// appended (and fsync'ed) to <data_dir>/<session_id>.rwrlog before the
// response is built.
class SessionService {
 public:
  using Clock = std::function<std::chrono::system_clock::time_point()>;

  // Throws Error{DataDirUnwritable}.
  explicit SessionService(ServiceConfig config, Clock clock = [] { return std::chrono::system_clock::now(); });
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  // Throws Error{InvalidRule}; nothing is created on failure.
  CreatedSession create_session(std::optional<std::string_view> rule = std::nullopt,
                                std::optional<std::uint64_t> seed = std::nullopt);

  // Throw Error{UnknownSession}.
  SetView current_set(const std::string& session_id);
  SessionStatus status(const std::string& session_id);

  // Throws UnknownSession, SessionFinished, PositionOutOfRange.
  ClickResponse submit_click(const std::string& session_id, int position);

  // JSON report of the session log with default analysis options; same bytes
  // as the offline JSON report of that log. Throws UnknownSession, SeriesTooShort.
  std::string summary_json(const std::string& session_id);

  std::filesystem::path log_path(const std::string& session_id) const;
  const ServiceConfig& config() const noexcept { return config_; }

 private:
  struct Record;

  std::shared_ptr<Record> find(const std::string& session_id);
  void expire_if_idle(Record& record);
  std::string new_session_id();

  ServiceConfig config_;
  Clock clock_;
  std::shared_mutex sessions_mutex_;
  std::unordered_map<std::string, std::shared_ptr<Record>> sessions_;
  std::mutex id_mutex_;
  Rng id_rng_;
};

}  // namespace rwr
