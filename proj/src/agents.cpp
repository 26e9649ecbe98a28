#include "rwr/agents.hpp"

#include <bitset>
#include <deque>

#include <fmt/format.h>

#include "rwr/error.hpp"
#include "rwr/rng.hpp"
#include "rwr/session.hpp"

namespace rwr {

namespace {

constexpr std::string_view kAgentEpoch = "1970-01-01T00:00:00Z";
constexpr std::int64_t kMinThinkMs = 1500;
constexpr int kThinkJitterMs = 4500;

// Shared bookkeeping for both agents: drives the session and records events.
class Recorder {
 public:
  Recorder(const RightnessRule& rule, const AgentConfig& config)
      : session_(fmt::format("agent-{:016x}", config.rng_seed), rule, config.rng_seed),
        clock_(Rng(config.rng_seed).split(2)),
        max_clicks_(config.max_clicks) {
    run_.header = {session_.session_id(), config.rng_seed, rule, std::string(kAgentEpoch)};
  }

  bool can_click() const {
    return session_.status() == SessionStatus::Active && run_.clicks_used < max_clicks_;
  }

  const Session& session() const { return session_; }

  ClickResult click(int position) {
    const ClickResult result = session_.judge_click(position);
    t_ms_ += kMinThinkMs + clock_.below(kThinkJitterMs);
    ++run_.clicks_used;
    run_.events.push_back({session_.session_id(), run_.clicks_used, t_ms_, result.set_seq,
                           position, result.clicked, result.feedback});
    return result;
  }

  AgentRun finish() {
    run_.solved = session_.status() == SessionStatus::Solved;
    return std::move(run_);
  }

 private:
  Session session_;
  Rng clock_;
  int max_clicks_;
  std::int64_t t_ms_ = 0;
  AgentRun run_;
};

int pick(const std::vector<int>& positions, Rng& rng) {
  return positions[static_cast<std::size_t>(rng.below(static_cast<int>(positions.size())))];
}

struct Transition {
  std::optional<Figure> from;
  Figure to;
};

}  // namespace

void AgentConfig::validate() const {
  if (!(adoption_probability >= 0.0 && adoption_probability <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "adoption_probability must lie in [0, 1]");
  }
  if (evidence_threshold < 1) throw Error(ErrorCode::InvalidConfig, "evidence_threshold must be >= 1");
  if (max_clicks < 1) throw Error(ErrorCode::InvalidConfig, "max_clicks must be >= 1");
}

AgentConfig random_preset(std::uint64_t seed) {
  return {AgentKind::RandomClicker, 0, 1, 0.0, 1000, seed};
}

AgentConfig solver_preset(std::uint64_t seed) {
  return {AgentKind::HypothesisAgent, hypothesis_catalog().size(), 3, 0.3, 5000, seed};
}

AgentConfig non_solver_preset(std::uint64_t seed) {
  return {AgentKind::HypothesisAgent, 6, 3, 0.0, 200, seed};
}

AgentConfig preset_by_name(std::string_view name, std::uint64_t seed) {
  if (name == "random") return random_preset(seed);
  if (name == "solver") return solver_preset(seed);
  if (name == "non-solver") return non_solver_preset(seed);
  throw Error(ErrorCode::InvalidConfig, fmt::format("unknown agent preset '{}'", name));
}

std::optional<bool> Hypothesis::endorses(const std::optional<Figure>& previous_right,
                                         const Figure& candidate) const {
  switch (kind) {
    case HypothesisKind::AttributeIs:
      return candidate.attribute(attribute) == value;
    case HypothesisKind::VariantIs:
      return candidate.index() == value;
    default:
      break;
  }
  if (!previous_right) return std::nullopt;
  const int previous = previous_right->attribute(attribute);
  const int grade = candidate.attribute(attribute);
  switch (kind) {
    case HypothesisKind::SameVariant: return candidate == *previous_right;
    case HypothesisKind::SameAttribute: return grade == previous;
    case HypothesisKind::DiffersIn: return grade != previous;
    case HypothesisKind::StepsUp: return grade == (previous + 1) % kGradesPerAttribute;
    default: return std::nullopt;
  }
}

const std::vector<Hypothesis>& hypothesis_catalog() {
  static const std::vector<Hypothesis> catalog = [] {
    std::vector<Hypothesis> all;
    all.push_back({HypothesisKind::SameVariant, 0, 0});
    for (int a = 0; a < kAttributeCount; ++a) all.push_back({HypothesisKind::SameAttribute, a, 0});
    for (int a = 0; a < kAttributeCount; ++a) {
      for (int v = 0; v < kGradesPerAttribute; ++v) all.push_back({HypothesisKind::AttributeIs, a, v});
    }
    for (int a = 0; a < kAttributeCount; ++a) all.push_back({HypothesisKind::DiffersIn, a, 0});
    for (int a = 0; a < kAttributeCount; ++a) all.push_back({HypothesisKind::StepsUp, a, 0});
    for (int v = 0; v < kVariantCount; ++v) all.push_back({HypothesisKind::VariantIs, 0, v});
    return all;
  }();
  return catalog;
}

AgentRun run_random_agent(const RightnessRule& rule, const AgentConfig& config) {
  config.validate();
  Recorder recorder(rule, config);
  Rng rng = Rng(config.rng_seed).split(1);
  std::bitset<kSetSize> refused;
  std::vector<int> candidates;
  while (recorder.can_click()) {
    candidates.clear();
    for (int p = 0; p < kSetSize; ++p) {
      if (!refused[p]) candidates.push_back(p);
    }
    const int position = pick(candidates, rng);
    if (recorder.click(position).feedback == Feedback::Right) {
      refused.reset();
    } else {
      refused.set(position);
    }
  }
  return recorder.finish();
}

AgentRun run_hypothesis_agent(const RightnessRule& rule, const AgentConfig& config) {
  config.validate();
  if (config.hypothesis_pool_size == 0) {
    throw Error(ErrorCode::EmptyHypothesisPool, "hypothesis agent needs a non-empty pool");
  }
  Recorder recorder(rule, config);
  Rng rng = Rng(config.rng_seed).split(1);

  // The agent's private pool: a random subset of the catalog.
  std::vector<Hypothesis> pool = hypothesis_catalog();
  const std::size_t pool_size = std::min(config.hypothesis_pool_size, pool.size());
  for (std::size_t i = 0; i < pool_size; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(static_cast<int>(pool.size() - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(pool_size);

  std::optional<Hypothesis> current;
  bool adopted = false;
  bool gave_up = false;
  std::deque<Transition> transitions;
  int rights_seen = 0;
  int failed_tests = 0;
  bool first_click_in_set = true;
  std::bitset<kSetSize> refused;

  const auto choose_hypothesis = [&]() -> std::optional<Hypothesis> {
    if (pool.empty()) return std::nullopt;
    std::vector<std::size_t> consistent;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      bool fits = true;
      for (const auto& t : transitions) fits = fits && pool[i].endorses(t.from, t.to) != false;
      if (fits) consistent.push_back(i);
    }
    if (consistent.empty()) return pool[static_cast<std::size_t>(rng.below(static_cast<int>(pool.size())))];
    return pool[consistent[static_cast<std::size_t>(rng.below(static_cast<int>(consistent.size())))]];
  };

  const auto switch_hypothesis = [&] {
    std::erase(pool, *current);
    current.reset();
    if (rng.unit() < config.adoption_probability) {
      adopted = true;
      return;
    }
    current = choose_hypothesis();
    gave_up = !current;
  };

  std::vector<int> candidates;
  std::vector<int> preferred;
  while (recorder.can_click()) {
    const auto& set = recorder.session().current_set();
    const auto previous = recorder.session().previous_right();

    candidates.clear();
    preferred.clear();
    for (int p = 0; p < kSetSize; ++p) {
      if (gave_up || !refused[p]) candidates.push_back(p);
    }
    for (const int p : candidates) {
      std::optional<bool> verdict;
      if (adopted) {
        verdict = predicts_right(rule, previous, set.figures[p]);
      } else if (current) {
        verdict = current->endorses(previous, set.figures[p]);
      }
      if (verdict.value_or(false)) preferred.push_back(p);
    }
    const int position = pick(preferred.empty() ? candidates : preferred, rng);
    const ClickResult result = recorder.click(position);

    if (result.feedback == Feedback::Right) {
      ++rights_seen;
      transitions.push_back({previous, result.clicked});
      if (transitions.size() > kTransitionMemory) transitions.pop_front();
      if (first_click_in_set) failed_tests = 0;
      first_click_in_set = true;
      refused.reset();
      if (!current && !adopted && !gave_up && rights_seen >= kRightsBeforeFirstHypothesis) {
        current = choose_hypothesis();
      }
    } else {
      refused.set(position);
      if (first_click_in_set && current && ++failed_tests >= config.evidence_threshold) {
        failed_tests = 0;
        switch_hypothesis();
      }
      first_click_in_set = false;
    }
  }
  return recorder.finish();
}

AgentRun run_agent(const RightnessRule& rule, const AgentConfig& config) {
  return config.kind == AgentKind::RandomClicker ? run_random_agent(rule, config)
                                                 : run_hypothesis_agent(rule, config);
}

}  // namespace rwr
