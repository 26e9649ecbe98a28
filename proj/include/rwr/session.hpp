#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "rwr/figure_set.hpp"
#include "rwr/rng.hpp"
#include "rwr/rule.hpp"

namespace rwr {

enum class Feedback { Right, Wrong };
enum class SessionStatus { Active, Solved, Abandoned };

inline constexpr int kRightsToSolve = 6;

std::string_view to_string(SessionStatus status);

struct ClickResult {
  Feedback feedback = Feedback::Wrong;
  Figure clicked;
  int position = 0;
  int set_seq = 1;  // set the click was made in
  SessionStatus status = SessionStatus::Active;
};

// Server-side state of one participant's dialogue. Single writer: callers
// serialize clicks on the same session.
class Session {
 public:
  Session(std::string session_id, RightnessRule rule, std::uint64_t rng_seed);

  // Judges a click on the current set. A Right replaces the set (unless the
  // session becomes Solved); a Wrong keeps it and resets the success streak.
  // Already-refused positions may be clicked again and are judged again.
  ClickResult judge_click(int position);

  void abandon();

  const std::string& session_id() const noexcept { return session_id_; }
  const RightnessRule& rule() const noexcept { return rule_; }
  std::uint64_t rng_seed() const noexcept { return rng_.seed(); }
  const FigureSet& current_set() const noexcept { return current_set_; }
  const std::optional<Figure>& previous_right() const noexcept { return previous_right_; }
  int consecutive_rights() const noexcept { return consecutive_rights_; }
  int total_clicks() const noexcept { return total_clicks_; }
  SessionStatus status() const noexcept { return status_; }

 private:
  std::string session_id_;
  RightnessRule rule_;
  Rng rng_;
  FigureSet current_set_;
  std::optional<Figure> previous_right_;
  int consecutive_rights_ = 0;
  int total_clicks_ = 0;
  SessionStatus status_ = SessionStatus::Active;
};

}  // namespace rwr
