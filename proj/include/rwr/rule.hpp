#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "rwr/figure.hpp"

namespace rwr {

class Rng;

enum class RuleKind { DesignatedSuccessor, AllAttributesDifferent, AnyDifferent };

struct RightnessRule {
  RuleKind kind = RuleKind::DesignatedSuccessor;
  int stride = 1;  // DesignatedSuccessor only, 1..26

  friend bool operator==(const RightnessRule&, const RightnessRule&) = default;
};

// Text form used in log headers and on the wire:
// "designated_successor[:stride]", "all_attributes_different", "any_different".
std::string to_string(const RightnessRule& rule);
std::string_view to_string(RuleKind kind);

// Throws Error{InvalidRule} on unknown names or strides outside 1..26.
RightnessRule parse_rule(std::string_view text);

// The rightness predicate. `designated` is the variant the generator placed
// for the current set; only DesignatedSuccessor consults it.
bool is_right(const RightnessRule& rule, const std::optional<Figure>& previous_right,
              const Figure& candidate, const Figure& designated);

// What the rule says about `candidate` when the designated variant is not
// known to the caller. Empty when the rule cannot decide without it (first
// set under DesignatedSuccessor).
std::optional<bool> predicts_right(const RightnessRule& rule,
                                   const std::optional<Figure>& previous_right,
                                   const Figure& candidate);

// Picks the variant guaranteed to be right in the next set.
Figure designate(const RightnessRule& rule, const std::optional<Figure>& previous_right,
                 Rng& rng);

}  // namespace rwr
