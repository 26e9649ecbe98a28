#pragma once

#include <array>
#include <optional>

#include "rwr/figure.hpp"
#include "rwr/rule.hpp"

namespace rwr {

class Rng;

struct FigureSet {
  std::array<Figure, kSetSize> figures{};
  int designated_position = 0;
  int set_seq = 1;

  const Figure& designated() const { return figures[designated_position]; }
};

int count_right(const FigureSet& set, const RightnessRule& rule,
                const std::optional<Figure>& previous_right);

// Draw order is fixed (designated variant, its position, then the other
// eight slots in position order) so a seed fully determines the set.
FigureSet generate_set(const std::optional<Figure>& previous_right,
                       const RightnessRule& rule, Rng& rng, int set_seq = 1);

}  // namespace rwr
