#include "rwr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "rwr/baseline.hpp"
#include "rwr/error.hpp"

namespace rwr {

namespace {

void require_length(std::size_t length, std::size_t minimum, std::string_view what) {
  if (length < minimum) {
    throw Error(ErrorCode::SeriesTooShort,
                fmt::format("{} needs at least {} values, got {}", what, minimum, length));
  }
}

ErrorRunSeries runs_from_feedback(auto&& feedbacks) {
  ErrorRunSeries series;
  int wrongs = 0;
  int trailing_rights = 0;
  for (const Feedback feedback : feedbacks) {
    if (feedback == Feedback::Right) {
      series.runs.push_back(wrongs);
      wrongs = 0;
      ++trailing_rights;
    } else {
      ++wrongs;
      trailing_rights = 0;
    }
  }
  series.trailing_wrongs = wrongs;
  series.solved = trailing_rights >= kRightsToSolve;
  return series;
}

}  // namespace

int ErrorRunSeries::total_clicks() const {
  int clicks = trailing_wrongs;
  for (const int run : runs) clicks += run + 1;
  return clicks;
}

std::vector<double> ErrorRunSeries::as_real() const { return {runs.begin(), runs.end()}; }

ErrorRunSeries extract_runs(std::span<const TrialEvent> events) {
  std::vector<Feedback> feedbacks;
  feedbacks.reserve(events.size());
  for (const auto& event : events) feedbacks.push_back(event.feedback);
  return runs_from_feedback(feedbacks);
}

ErrorRunSeries extract_runs(std::string_view feedback) {
  std::vector<Feedback> feedbacks;
  feedbacks.reserve(feedback.size());
  for (const char c : feedback) {
    if (c == 'R' || c == 'r') {
      feedbacks.push_back(Feedback::Right);
    } else if (c == 'W' || c == 'w') {
      feedbacks.push_back(Feedback::Wrong);
    } else {
      throw Error(ErrorCode::MalformedLine, fmt::format("unexpected feedback symbol '{}'", c));
    }
  }
  return runs_from_feedback(feedbacks);
}

double default_closing_fraction(bool solved) {
  return solved ? kSolverClosingFraction : kNonSolverClosingFraction;
}

PhaseSplit split_phases(const ErrorRunSeries& series, double closing_fraction) {
  if (!(closing_fraction > 0.0 && closing_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "closing fraction must lie in (0, 1)");
  }
  const std::size_t n = series.runs.size();
  require_length(n, 2, "phase split");

  const int target = static_cast<int>(std::ceil(closing_fraction * series.total_clicks()));
  // Walk boundaries from the end; a strictly closer one replaces the best, so
  // ties keep the smaller closing phase.
  std::size_t best = n - 1;
  int best_distance = -1;
  int closing_clicks = series.trailing_wrongs;
  for (std::size_t boundary = n - 1; boundary >= 1; --boundary) {
    closing_clicks += series.runs[boundary] + 1;
    const int distance = std::abs(closing_clicks - target);
    if (best_distance < 0 || distance < best_distance) {
      best = boundary;
      best_distance = distance;
    }
  }

  PhaseSplit split;
  split.boundary = best;
  split.beginning.runs.assign(series.runs.begin(), series.runs.begin() + static_cast<long>(best));
  split.closing.runs.assign(series.runs.begin() + static_cast<long>(best), series.runs.end());
  split.closing.trailing_wrongs = series.trailing_wrongs;
  split.closing.solved = series.solved;
  return split;
}

double mean_errors(std::span<const int> runs, bool exclude_final_zero_run) {
  require_length(runs.size(), 1, "mean errors");
  std::size_t end = runs.size();
  if (exclude_final_zero_run) {
    while (end > 0 && runs[end - 1] == 0) --end;
    if (end == 0) throw Error(ErrorCode::EmptyAfterExclusion, "series is all zero runs");
  }
  const double sum = std::accumulate(runs.begin(), runs.begin() + static_cast<long>(end), 0.0);
  return sum / static_cast<double>(end);
}

std::vector<double> smooth(std::span<const double> series, int window) {
  if (window < 1 || window % 2 == 0) {
    throw Error(ErrorCode::EvenWindow, fmt::format("smoothing window {} must be odd and >= 1", window));
  }
  const auto half = static_cast<std::ptrdiff_t>(window / 2);
  const auto n = static_cast<std::ptrdiff_t>(series.size());
  std::vector<double> out(series.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto lo = std::max<std::ptrdiff_t>(0, i - half);
    const auto hi = std::min<std::ptrdiff_t>(n - 1, i + half);
    double sum = 0.0;
    for (auto j = lo; j <= hi; ++j) sum += series[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::vector<double> derivative(std::span<const double> series) {
  require_length(series.size(), 2, "derivative");
  std::vector<double> out(series.size() - 1);
  for (std::size_t i = 0; i + 1 < series.size(); ++i) out[i] = series[i + 1] - series[i];
  return out;
}

double mean_increment(std::span<const double> series) {
  const auto steps = derivative(series);
  return std::accumulate(steps.begin(), steps.end(), 0.0) / static_cast<double>(steps.size());
}

std::optional<int> default_smoothing_window(std::size_t run_count) {
  if (run_count >= kSmoothingMinRuns) return kDefaultSmoothingWindow;
  return std::nullopt;
}

std::string_view to_string(PhaseTag tag) {
  return tag == PhaseTag::Beginning ? "beginning" : "closing";
}

PhasePortrait phase_portrait(const ErrorRunSeries& series, std::optional<int> smoothing_window,
                             std::optional<std::size_t> closing_start) {
  require_length(series.runs.size(), 2, "phase portrait");
  PhasePortrait portrait;
  std::vector<double> values = series.as_real();
  if (smoothing_window && *smoothing_window != 1) {
    values = smooth(values, *smoothing_window);
    portrait.smoothed = true;
    portrait.window = *smoothing_window;
  } else if (smoothing_window) {
    smooth(values, *smoothing_window);  // validates the window
  }
  const auto steps = derivative(values);
  portrait.points.reserve(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const bool closing = closing_start && i >= *closing_start;
    portrait.points.push_back({values[i], steps[i], closing ? PhaseTag::Closing : PhaseTag::Beginning});
  }
  return portrait;
}

double mean_increment(const PhasePortrait& portrait) {
  require_length(portrait.points.size(), 1, "portrait mean increment");
  double sum = 0.0;
  for (const auto& point : portrait.points) sum += point.xdot;
  return sum / static_cast<double>(portrait.points.size());
}

int count_sign_changes(std::span<const double> xdot) {
  int changes = 0;
  int last_sign = 0;
  for (const double value : xdot) {
    const int sign = value > 0.0 ? 1 : (value < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) ++changes;
    last_sign = sign;
  }
  return changes;
}

ConfidenceInterval confidence_interval(std::span<const double> values, double level,
                                       std::optional<double> reference) {
  require_length(values.size(), 2, "confidence interval");
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidConfig, "level must lie in (0, 1)");

  const auto n = static_cast<double>(values.size());
  ConfidenceInterval ci;
  ci.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double squares = 0.0;
  for (const double v : values) squares += (v - ci.mean) * (v - ci.mean);
  const double sd = std::sqrt(squares / (n - 1.0));

  const boost::math::students_t dist(n - 1.0);
  const double t = boost::math::quantile(dist, 1.0 - (1.0 - level) / 2.0);
  const double half = t * sd / std::sqrt(n);
  ci.lo = ci.mean - half;
  ci.hi = ci.mean + half;
  if (reference) ci.reference_outside = *reference < ci.lo || *reference > ci.hi;
  return ci;
}

ConfidenceInterval confidence_interval(std::span<const int> runs, double level,
                                       std::optional<double> reference) {
  const std::vector<double> values(runs.begin(), runs.end());
  return confidence_interval(std::span<const double>(values), level, reference);
}

SessionAnalysis analyze_session(const SessionLog& log, const AnalysisOptions& options) {
  SessionAnalysis analysis;
  analysis.header = log.header;
  analysis.events = log.events;
  analysis.series = extract_runs(log.events);
  require_length(analysis.series.runs.size(), 2, "session analysis (runs)");

  analysis.closing_fraction =
      options.closing_fraction.value_or(default_closing_fraction(analysis.series.solved));
  analysis.split = split_phases(analysis.series, analysis.closing_fraction);

  const auto window = options.smoothing_window
                          ? options.smoothing_window
                          : default_smoothing_window(analysis.series.runs.size());
  analysis.portrait = phase_portrait(analysis.series, window, analysis.split.boundary);

  analysis.reference_errors = options.reference_errors > 0.0
                                  ? options.reference_errors
                                  : baseline_analytic(RightnessRule{}).mean_errors_random;

  auto& summary = analysis.summary;
  const auto& beginning = analysis.split.beginning.runs;
  std::vector<int> closing = analysis.split.closing.runs;
  if (analysis.series.solved) {
    while (!closing.empty() && closing.back() == 0) closing.pop_back();
    if (closing.empty()) {
      throw Error(ErrorCode::SeriesTooShort, "closing phase is empty after dropping the final zero runs");
    }
  }
  summary.mean_errors_beginning = mean_errors(beginning, false);
  summary.mean_errors_closing = mean_errors(closing, false);
  if (beginning.size() >= 2) {
    summary.ci95_beginning = confidence_interval(std::span<const int>(beginning), 0.95, analysis.reference_errors);
  }
  if (closing.size() >= 2) {
    summary.ci95_closing = confidence_interval(std::span<const int>(closing), 0.95, analysis.reference_errors);
  }
  summary.mean_increment = mean_increment(analysis.portrait);
  summary.n_rights_beginning = static_cast<int>(beginning.size());
  summary.n_rights_closing = static_cast<int>(analysis.split.closing.runs.size());

  analysis.total_clicks = static_cast<int>(log.events.size());
  analysis.elapsed_minutes =
      log.events.empty() ? 0.0 : static_cast<double>(log.events.back().t_ms) / 60000.0;
  return analysis;
}

}  // namespace rwr
