#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rwr/log.hpp"
#include "rwr/rule.hpp"

namespace rwr {

enum class AgentKind { RandomClicker, HypothesisAgent };

struct AgentConfig {
  AgentKind kind = AgentKind::RandomClicker;
  std::size_t hypothesis_pool_size = 0;
  int evidence_threshold = 3;        // consecutive failed predictions before a switch
  double adoption_probability = 0.0;  // chance a switch lands on the true rule
  int max_clicks = 1000;
  std::uint64_t rng_seed = 0;

  // Throws Error{InvalidConfig}.
  void validate() const;
};

AgentConfig random_preset(std::uint64_t seed);
AgentConfig solver_preset(std::uint64_t seed);
AgentConfig non_solver_preset(std::uint64_t seed);
// "random", "solver", "non-solver". Throws Error{InvalidConfig}.
AgentConfig preset_by_name(std::string_view name, std::uint64_t seed);

struct AgentRun {
  LogHeader header;
  std::vector<TrialEvent> events;
  bool solved = false;
  int clicks_used = 0;

  SessionLog log() const { return {header, events}; }
};

// Candidate selection rules a participant might entertain. Relational kinds
// compare the candidate with the previous right figure and have no opinion
// before one exists.
enum class HypothesisKind {
  SameVariant,        // repeat the previous right figure
  SameAttribute,      // same grade of `attribute` as previous right
  AttributeIs,        // grade of `attribute` equals `value`
  DiffersIn,          // other grade of `attribute` than previous right
  StepsUp,            // grade of `attribute` one above previous right, cyclic
  VariantIs,          // exactly variant `value`
};

struct Hypothesis {
  HypothesisKind kind = HypothesisKind::AttributeIs;
  int attribute = 0;
  int value = 0;

  std::optional<bool> endorses(const std::optional<Figure>& previous_right,
                               const Figure& candidate) const;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

const std::vector<Hypothesis>& hypothesis_catalog();

// Rights observed before the hypothesis agent commits to its first hypothesis,
// and how many recent right-to-right transitions a new hypothesis must fit.
inline constexpr int kRightsBeforeFirstHypothesis = 3;
inline constexpr std::size_t kTransitionMemory = 3;

AgentRun run_random_agent(const RightnessRule& rule, const AgentConfig& config);
AgentRun run_hypothesis_agent(const RightnessRule& rule, const AgentConfig& config);
// Dispatches on config.kind.
AgentRun run_agent(const RightnessRule& rule, const AgentConfig& config);

}  // namespace rwr
