#include "rwr/figure_set.hpp"

#include "rwr/rng.hpp"

namespace rwr {

int count_right(const FigureSet& set, const RightnessRule& rule,
                const std::optional<Figure>& previous_right) {
  int right = 0;
  for (const Figure& figure : set.figures) {
    if (is_right(rule, previous_right, figure, set.designated())) ++right;
  }
  return right;
}

FigureSet generate_set(const std::optional<Figure>& previous_right,
                       const RightnessRule& rule, Rng& rng, int set_seq) {
  FigureSet set;
  set.set_seq = set_seq;
  const Figure designated = designate(rule, previous_right, rng);
  set.designated_position = rng.below(kSetSize);
  for (int position = 0; position < kSetSize; ++position) {
    set.figures[position] = position == set.designated_position
                                ? designated
                                : Figure::from_index(rng.below(kVariantCount));
  }
  return set;
}

}  // namespace rwr
