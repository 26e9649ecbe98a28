#include "rwr/baseline.hpp"

#include <cmath>

#include "rwr/error.hpp"
#include "rwr/figure_set.hpp"
#include "rwr/rng.hpp"

namespace rwr {

double expected_errors_before_right(int right) {
  // Wrong figures ahead of the first right one in a random order:
  // each of the (n - k) wrong figures precedes all k right ones w.p. 1/(k+1).
  return static_cast<double>(kSetSize - right) / static_cast<double>(right + 1);
}

BaselineStats baseline_analytic(const RightnessRule& rule) {
  if (rule.kind != RuleKind::DesignatedSuccessor) {
    throw Error(ErrorCode::UnsupportedRule,
                "closed form exists only for designated_successor; use Monte Carlo");
  }
  // k right figures = the designated one plus matches among the 8 random
  // slots, each matching with probability 1/27.
  constexpr int kRandomSlots = kSetSize - 1;
  const double match = 1.0 / kVariantCount;
  BaselineStats stats;
  double binomial = 1.0;  // C(8, j)
  for (int j = 0; j <= kRandomSlots; ++j) {
    if (j > 0) binomial = binomial * (kRandomSlots - j + 1) / j;
    const double p = binomial * std::pow(match, j) * std::pow(1.0 - match, kRandomSlots - j);
    const int right = j + 1;
    stats.p_right_count[right - 1] = p;
    stats.mean_right += right * p;
    stats.mean_errors_random += p * expected_errors_before_right(right);
  }
  return stats;
}

BaselineStats baseline_monte_carlo(const RightnessRule& rule, std::uint64_t n_sets, Rng& rng) {
  BaselineStats stats;
  stats.n_sets = n_sets;
  if (n_sets == 0) return stats;

  std::array<std::uint64_t, kSetSize> counts{};
  std::uint64_t total_right = 0;
  std::uint64_t total_errors = 0;
  std::optional<Figure> previous = Figure::from_index(rng.below(kVariantCount));

  for (std::uint64_t n = 0; n < n_sets; ++n) {
    const FigureSet set = generate_set(previous, rule, rng);
    std::array<bool, kSetSize> right{};
    int right_count = 0;
    for (int position = 0; position < kSetSize; ++position) {
      right[position] = is_right(rule, previous, set.figures[position], set.designated());
      right_count += right[position] ? 1 : 0;
    }
    ++counts[right_count - 1];
    total_right += static_cast<std::uint64_t>(right_count);

    // Uniform no-repeat clicking until the first right figure.
    std::array<int, kSetSize> order{0, 1, 2, 3, 4, 5, 6, 7, 8};
    for (int i = 0; i < kSetSize; ++i) {
      std::swap(order[i], order[i + rng.below(kSetSize - i)]);
      if (right[order[i]]) {
        total_errors += static_cast<std::uint64_t>(i);
        previous = set.figures[order[i]];
        break;
      }
    }
  }

  const auto n = static_cast<double>(n_sets);
  for (int k = 0; k < kSetSize; ++k) stats.p_right_count[k] = static_cast<double>(counts[k]) / n;
  stats.mean_right = static_cast<double>(total_right) / n;
  stats.mean_errors_random = static_cast<double>(total_errors) / n;
  return stats;
}

}  // namespace rwr
