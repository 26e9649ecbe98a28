#pragma once

#include <array>
#include <cstdint>

#include "rwr/figure.hpp"
#include "rwr/rule.hpp"

namespace rwr {

class Rng;

// Statistics of the set generator under a rule. p_right_count[k - 1] is the
// probability that a set holds exactly k right figures.
struct BaselineStats {
  std::array<double, kSetSize> p_right_count{};
  double mean_right = 0.0;
  // Expected wrong clicks before the first right one when clicking uniformly
  // without repeats inside a set.
  double mean_errors_random = 0.0;
  std::uint64_t n_sets = 0;  // 0 for the closed form
};

// Expected wrong clicks before the first right one, uniform no-repeat
// clicking over a set of kSetSize holding `right` right figures.
double expected_errors_before_right(int right);

// Closed form for DesignatedSuccessor. Throws Error{UnsupportedRule} otherwise.
BaselineStats baseline_analytic(const RightnessRule& rule);

BaselineStats baseline_monte_carlo(const RightnessRule& rule, std::uint64_t n_sets, Rng& rng);

}  // namespace rwr
