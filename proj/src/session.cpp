#include "rwr/session.hpp"

#include "rwr/error.hpp"

namespace rwr {

std::string_view to_string(SessionStatus status) {
  switch (status) {
    case SessionStatus::Active: return "active";
    case SessionStatus::Solved: return "solved";
    case SessionStatus::Abandoned: return "abandoned";
  }
  return "unknown";
}

Session::Session(std::string session_id, RightnessRule rule, std::uint64_t rng_seed)
    : session_id_(std::move(session_id)), rule_(rule), rng_(rng_seed) {
  current_set_ = generate_set(previous_right_, rule_, rng_, 1);
}

ClickResult Session::judge_click(int position) {
  if (status_ != SessionStatus::Active) {
    throw Error(ErrorCode::ClickAfterTerminal,
                "session " + session_id_ + " is " + std::string(to_string(status_)));
  }
  if (position < 0 || position >= kSetSize) {
    throw Error(ErrorCode::PositionOutOfRange,
                "position " + std::to_string(position) + " outside 0..8");
  }

  ClickResult result;
  result.position = position;
  result.clicked = current_set_.figures[position];
  result.set_seq = current_set_.set_seq;
  ++total_clicks_;

  if (is_right(rule_, previous_right_, result.clicked, current_set_.designated())) {
    result.feedback = Feedback::Right;
    previous_right_ = result.clicked;
    if (++consecutive_rights_ >= kRightsToSolve) {
      status_ = SessionStatus::Solved;
    } else {
      current_set_ = generate_set(previous_right_, rule_, rng_, current_set_.set_seq + 1);
    }
  } else {
    result.feedback = Feedback::Wrong;
    consecutive_rights_ = 0;
  }
  result.status = status_;
  return result;
}

void Session::abandon() {
  if (status_ == SessionStatus::Active) status_ = SessionStatus::Abandoned;
}

}  // namespace rwr
