#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rwr/log.hpp"
#include "rwr/rng.hpp"
#include "rwr/session.hpp"

namespace rwr::testing {

// Participant-style record: id, minutes, clicks, solved, as in the pilot
// table (K, M, B, Ch, G).
struct FixtureSpec {
  std::string id;
  double minutes = 0.0;
  int clicks = 0;
  bool solved = false;
  std::uint64_t seed = 0;
};

const std::vector<FixtureSpec>& table_fixtures();

// Drives a real session with a scripted error-run plan so the log has exactly
// spec.clicks events spread evenly over spec.minutes.
SessionLog build_fixture(const FixtureSpec& spec);

// Known-rule driver: plays `runs[i]` wrong clicks then one right click per
// set, followed by `trailing_wrongs` wrong clicks.
SessionLog scripted_log(const std::string& id, std::uint64_t seed, const RightnessRule& rule,
                        const std::vector<int>& runs, int trailing_wrongs, std::int64_t total_ms);

// A position whose figure is wrong in the current set, or nullopt if every
// figure is right.
std::optional<int> wrong_position(const Session& session, Rng& rng);

std::string feedback_string(const std::vector<TrialEvent>& events);

}  // namespace rwr::testing
