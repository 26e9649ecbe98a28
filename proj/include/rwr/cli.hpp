#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "rwr/baseline.hpp"
#include "rwr/rule.hpp"

namespace rwr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitAnalysis = 4;

// Figures reported for the generator (p_1..p_5, mean right, random errors).
struct ReportedBaseline {
  static constexpr double p[5] = {0.735, 0.194, 0.056, 0.01, 0.001};
  static constexpr double mean_right = 1.344;
  static constexpr double mean_errors_random = 3.38;
};

std::string format_baseline_table(const RightnessRule& rule, std::uint64_t n_sets,
                                  std::uint64_t seed, const BaselineStats& monte_carlo);

// Entry point shared by the rwr binary and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rwr::cli
