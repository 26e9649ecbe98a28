#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "rwr/log.hpp"

namespace rwr {

// X_i = wrong clicks before the i-th right click.
struct ErrorRunSeries {
  std::vector<int> runs;
  int trailing_wrongs = 0;
  bool solved = false;

  int total_clicks() const;
  std::vector<double> as_real() const;
};

ErrorRunSeries extract_runs(std::span<const TrialEvent> events);
// Feedback string form, e.g. "wwwRwwwR"; 'R'/'r' right, 'W'/'w' wrong.
ErrorRunSeries extract_runs(std::string_view feedback);

inline constexpr double kSolverClosingFraction = 0.30;
inline constexpr double kNonSolverClosingFraction = 0.50;

double default_closing_fraction(bool solved);

struct PhaseSplit {
  ErrorRunSeries beginning;
  ErrorRunSeries closing;
  std::size_t boundary = 0;  // index of the first closing run
};

// Splits at a run boundary so the closing part holds about
// ceil(closing_fraction * total clicks) clicks. Needs >= 2 runs.
PhaseSplit split_phases(const ErrorRunSeries& series, double closing_fraction);

// Mean of X_i; with exclusion, a final block of zero runs is dropped first.
double mean_errors(std::span<const int> runs, bool exclude_final_zero_run);

// Centered moving average; near the edges the window is clipped to the
// points that exist. `window` must be odd.
std::vector<double> smooth(std::span<const double> series, int window);

std::vector<double> derivative(std::span<const double> series);

double mean_increment(std::span<const double> series);

// Smoothing used when the caller does not choose: window 5 for records of
// 30 runs or more, none otherwise.
inline constexpr int kDefaultSmoothingWindow = 5;
inline constexpr std::size_t kSmoothingMinRuns = 30;
std::optional<int> default_smoothing_window(std::size_t run_count);

enum class PhaseTag { Beginning, Closing };
std::string_view to_string(PhaseTag tag);

struct PortraitPoint {
  double x = 0.0;
  double xdot = 0.0;
  PhaseTag phase = PhaseTag::Beginning;
};

struct PhasePortrait {
  std::vector<PortraitPoint> points;
  bool smoothed = false;
  int window = 1;
};

// Points (X_i, X_{i+1} - X_i) over the optionally smoothed series. When
// `closing_start` is given, points starting at or after that run index are
// tagged Closing.
PhasePortrait phase_portrait(const ErrorRunSeries& series, std::optional<int> smoothing_window,
                             std::optional<std::size_t> closing_start = std::nullopt);

// Mean Xdot over the portrait's points.
double mean_increment(const PhasePortrait& portrait);

// Number of strict sign alternations in the Xdot sequence, zeros skipped.
int count_sign_changes(std::span<const double> xdot);

struct ConfidenceInterval {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool reference_outside = false;
};

// Two-sided Student-t interval for the mean.
ConfidenceInterval confidence_interval(std::span<const double> values, double level = 0.95,
                                       std::optional<double> reference = std::nullopt);
ConfidenceInterval confidence_interval(std::span<const int> runs, double level = 0.95,
                                       std::optional<double> reference = std::nullopt);

struct PhaseSummary {
  double mean_errors_beginning = 0.0;
  double mean_errors_closing = 0.0;
  double mean_increment = 0.0;
  std::optional<ConfidenceInterval> ci95_beginning;
  std::optional<ConfidenceInterval> ci95_closing;
  int n_rights_beginning = 0;
  int n_rights_closing = 0;
};

struct AnalysisOptions {
  std::optional<double> closing_fraction;  // default per solved status
  std::optional<int> smoothing_window;     // default per run count; 1 disables
  double reference_errors = 0.0;           // 0 selects the analytic baseline
};

struct SessionAnalysis {
  LogHeader header;
  std::vector<TrialEvent> events;
  ErrorRunSeries series;
  PhaseSplit split;
  PhasePortrait portrait;
  PhaseSummary summary;
  double closing_fraction = 0.0;
  double reference_errors = 0.0;
  int total_clicks = 0;
  double elapsed_minutes = 0.0;
};

SessionAnalysis analyze_session(const SessionLog& log, const AnalysisOptions& options = {});

}  // namespace rwr
