#include "fixtures.hpp"

#include <cmath>
#include <stdexcept>

namespace rwr::testing {

const std::vector<FixtureSpec>& table_fixtures() {
  static const std::vector<FixtureSpec> fixtures{
      {"K", 21.1, 209, true, 101},
      {"M", 48.9, 39, true, 102},
      {"B", 13.5, 83, true, 103},
      {"Ch", 16.7, 71, false, 104},
      {"G", 14.4, 219, false, 105},
  };
  return fixtures;
}

std::optional<int> wrong_position(const Session& session, Rng& rng) {
  std::vector<int> wrong;
  const auto& set = session.current_set();
  for (int p = 0; p < kSetSize; ++p) {
    if (!is_right(session.rule(), session.previous_right(), set.figures[p], set.designated())) {
      wrong.push_back(p);
    }
  }
  if (wrong.empty()) return std::nullopt;
  return wrong[static_cast<std::size_t>(rng.below(static_cast<int>(wrong.size())))];
}

SessionLog scripted_log(const std::string& id, std::uint64_t seed, const RightnessRule& rule,
                        const std::vector<int>& runs, int trailing_wrongs, std::int64_t total_ms) {
  Session session(id, rule, seed);
  Rng rng = Rng(seed).split(7);
  std::vector<ClickResult> clicks;
  const auto click_wrong = [&] {
    const auto position = wrong_position(session, rng);
    if (!position) throw std::runtime_error("set has no wrong figure");
    clicks.push_back(session.judge_click(*position));
  };
  for (const int run : runs) {
    for (int i = 0; i < run; ++i) click_wrong();
    clicks.push_back(session.judge_click(session.current_set().designated_position));
  }
  for (int i = 0; i < trailing_wrongs; ++i) click_wrong();

  SessionLog log;
  log.header = {id, seed, rule, "2009-03-02T10:00:00Z"};
  const auto n = static_cast<std::int64_t>(clicks.size());
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& c = clicks[static_cast<std::size_t>(i)];
    log.events.push_back({id, static_cast<int>(i + 1), (i + 1) * total_ms / n, c.set_seq, c.position,
                          c.clicked, c.feedback});
  }
  return log;
}

SessionLog build_fixture(const FixtureSpec& spec) {
  Rng rng(spec.seed);
  std::vector<int> runs;
  // Solvers end with one wrong click, then six rights in succession.
  int budget = spec.solved ? spec.clicks - kRightsToSolve - 1 : spec.clicks;
  int zero_streak = 0;
  while (budget > 0) {
    const double progress = 1.0 - static_cast<double>(budget) / spec.clicks;
    const int widest = spec.solved ? std::max(2, static_cast<int>(std::lround(9 - 7 * progress))) : 9;
    int run = rng.below(widest);
    if (zero_streak >= 4 && run == 0) run = 1;
    if (run + 1 > budget) break;
    runs.push_back(run);
    budget -= run + 1;
    zero_streak = run == 0 ? zero_streak + 1 : 0;
  }
  int trailing = budget;
  if (spec.solved) {
    runs.push_back(budget + 1);
    for (int i = 1; i < kRightsToSolve; ++i) runs.push_back(0);
    trailing = 0;
  }
  const auto total_ms = static_cast<std::int64_t>(std::llround(spec.minutes * 60000.0));
  return scripted_log(spec.id, spec.seed, RightnessRule{}, runs, trailing, total_ms);
}

std::string feedback_string(const std::vector<TrialEvent>& events) {
  std::string text;
  for (const auto& e : events) text += e.feedback == Feedback::Right ? 'R' : 'w';
  return text;
}

}  // namespace rwr::testing
