#include "rwr/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include "json.hpp"

#include "rwr/error.hpp"

namespace rwr {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string quoted = "\"";
  for (const char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

ordered_json ci_json(const std::optional<ConfidenceInterval>& ci) {
  if (!ci) return nullptr;
  ordered_json j;
  j["mean"] = ci->mean;
  j["lo"] = ci->lo;
  j["hi"] = ci->hi;
  j["reference_outside"] = ci->reference_outside;
  return j;
}

ordered_json session_json(const SessionAnalysis& a) {
  ordered_json j;
  j["session_id"] = a.header.session_id;
  j["rule"] = to_string(a.header.rule);
  j["seed"] = a.header.seed;
  j["started"] = a.header.started;
  j["solved"] = a.series.solved;
  j["total_clicks"] = a.total_clicks;
  j["elapsed_minutes"] = a.elapsed_minutes;
  j["clicks_per_minute"] = average_click_speed(a);
  j["closing_fraction"] = a.closing_fraction;
  j["reference_errors"] = a.reference_errors;
  j["runs"] = a.series.runs;
  j["trailing_wrongs"] = a.series.trailing_wrongs;
  j["split_boundary"] = a.split.boundary;

  ordered_json summary;
  summary["mean_errors_beginning"] = a.summary.mean_errors_beginning;
  summary["mean_errors_closing"] = a.summary.mean_errors_closing;
  summary["mean_increment"] = a.summary.mean_increment;
  summary["ci95_beginning"] = ci_json(a.summary.ci95_beginning);
  summary["ci95_closing"] = ci_json(a.summary.ci95_closing);
  summary["n_rights_beginning"] = a.summary.n_rights_beginning;
  summary["n_rights_closing"] = a.summary.n_rights_closing;
  j["summary"] = std::move(summary);

  ordered_json portrait;
  portrait["smoothed"] = a.portrait.smoothed;
  portrait["window"] = a.portrait.window;
  ordered_json points = ordered_json::array();
  for (const auto& p : a.portrait.points) {
    points.push_back(ordered_json::array({p.x, p.xdot, to_string(p.phase)}));
  }
  portrait["points"] = std::move(points);
  j["portrait"] = std::move(portrait);
  return j;
}

std::string emit_json(std::span<const SessionAnalysis> analyses) {
  ordered_json root;
  root["format"] = "rwr-report";
  root["version"] = 1;
  ordered_json sessions = ordered_json::array();
  for (const auto& a : analyses) sessions.push_back(session_json(a));
  root["sessions"] = std::move(sessions);
  return root.dump(2) + "\n";
}

std::string emit_csv(std::span<const SessionAnalysis> analyses) {
  std::string out = "session_id,record,index,x,xdot,phase\n";
  for (const auto& a : analyses) {
    const std::string id = csv_field(a.header.session_id);
    for (std::size_t i = 0; i < a.series.runs.size(); ++i) {
      const auto phase = i < a.split.boundary ? PhaseTag::Beginning : PhaseTag::Closing;
      out += fmt::format("{},run,{},{},,{}\n", id, i, a.series.runs[i], to_string(phase));
    }
    for (std::size_t i = 0; i < a.portrait.points.size(); ++i) {
      const auto& p = a.portrait.points[i];
      out += fmt::format("{},point,{},{},{},{}\n", id, i, p.x, p.xdot, to_string(p.phase));
    }
  }
  return out;
}

// Plot geometry, in SVG user units.
constexpr double kPanelWidth = 460.0;
constexpr double kPanelHeight = 320.0;
constexpr double kMargin = 50.0;
constexpr double kRowHeight = kPanelHeight + 40.0;

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  double map(double v, double pixel_lo, double pixel_hi) const {
    const double span = hi - lo == 0.0 ? 1.0 : hi - lo;
    return pixel_lo + (v - lo) / span * (pixel_hi - pixel_lo);
  }
};

std::string click_time_panel(const SessionAnalysis& a, double ox, double oy) {
  const double minutes = std::max(a.elapsed_minutes, 1e-9);
  const Axis tx{0.0, minutes};
  const Axis cy{0.0, static_cast<double>(std::max(a.total_clicks, 1))};
  const double left = ox + kMargin, right = ox + kPanelWidth - 10.0;
  const double top = oy + 20.0, bottom = oy + kPanelHeight - kMargin;

  std::string out = fmt::format("<g class=\"clicks\">\n");
  out += fmt::format(
      "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", left,
      bottom, right, bottom);
  out += fmt::format(
      "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", left,
      bottom, left, top);
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\">time, min</text>\n",
                     right - 60.0, bottom + 30.0);
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\">clicks</text>\n", ox + 5.0,
                     top + 5.0);
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\">{:.1f}</text>\n",
                     right - 20.0, bottom + 15.0, minutes);
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\">{}</text>\n", ox + 5.0,
                     top + 20.0, a.total_clicks);

  out += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
  for (const auto& event : a.events) {
    const double t = static_cast<double>(event.t_ms) / 60000.0;
    out += fmt::format("{:.2f},{:.2f} ", tx.map(t, left, right),
                       cy.map(static_cast<double>(event.seq), bottom, top));
  }
  out += "\"/>\n";
  // Average clicking speed: straight line from the origin to the last click.
  out += fmt::format(
      "<line class=\"average-speed\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
      "stroke=\"black\" stroke-width=\"1.5\"/>\n",
      left, bottom, tx.map(minutes, left, right),
      cy.map(static_cast<double>(a.total_clicks), bottom, top));
  out += "</g>\n";
  return out;
}

std::string portrait_panel(const SessionAnalysis& a, double ox, double oy) {
  const auto& points = a.portrait.points;
  Axis x{0.0, 1.0}, y{-1.0, 1.0};
  for (const auto& p : points) {
    x.lo = std::min(x.lo, p.x);
    x.hi = std::max(x.hi, p.x);
    y.lo = std::min(y.lo, p.xdot);
    y.hi = std::max(y.hi, p.xdot);
  }
  const double left = ox + kMargin, right = ox + kPanelWidth - 10.0;
  const double top = oy + 20.0, bottom = oy + kPanelHeight - kMargin;
  const double zero = y.map(0.0, bottom, top);

  std::string out = "<g class=\"portrait\">\n";
  out += fmt::format(
      "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", left,
      zero, right, zero);
  out += fmt::format(
      "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", left,
      bottom, left, top);
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\">X</text>\n", right - 10.0,
                     zero - 5.0);
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\">dX</text>\n", left + 5.0,
                     top + 5.0);
  // Arrows follow time order; the closing phase is dashed.
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto& from = points[i];
    const auto& to = points[i + 1];
    const bool closing = from.phase == PhaseTag::Closing;
    out += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\" "
        "marker-end=\"url(#arrow)\"{}/>\n",
        x.map(from.x, left, right), y.map(from.xdot, bottom, top), x.map(to.x, left, right),
        y.map(to.xdot, bottom, top), closing ? " stroke-dasharray=\"5,3\"" : "");
  }
  for (const auto& p : points) {
    out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2\"/>\n", x.map(p.x, left, right),
                       y.map(p.xdot, bottom, top));
  }
  out += "</g>\n";
  return out;
}

std::string emit_svg(std::span<const SessionAnalysis> analyses) {
  const double width = 2.0 * kPanelWidth + 20.0;
  const double height = kRowHeight * static_cast<double>(analyses.size());
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.0f}\" "
      "height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\">\n",
      width, height, width, height);
  out += "<metadata>\n";
  for (const auto& a : analyses) {
    out += fmt::format(
        "<rwr:session xmlns:rwr=\"urn:rwr:report\" id=\"{}\" clicks=\"{}\" "
        "elapsed-minutes=\"{:.3f}\" clicks-per-minute=\"{:.3f}\" solved=\"{}\" "
        "mean-increment=\"{:.6f}\"/>\n",
        xml_escape(a.header.session_id), a.total_clicks, a.elapsed_minutes,
        average_click_speed(a), a.series.solved ? "yes" : "no", a.summary.mean_increment);
  }
  out += "</metadata>\n";
  out +=
      "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" "
      "markerHeight=\"6\" orient=\"auto\"><path d=\"M 0 0 L 10 5 L 0 10 z\"/></marker></defs>\n";
  for (std::size_t i = 0; i < analyses.size(); ++i) {
    const auto& a = analyses[i];
    const double oy = kRowHeight * static_cast<double>(i);
    out += fmt::format("<g id=\"session-{}\">\n", i);
    out += fmt::format("<text x=\"10\" y=\"{:.2f}\" font-size=\"14\">{} ({})</text>\n", oy + 14.0,
                       xml_escape(a.header.session_id), a.series.solved ? "solved" : "not solved");
    out += click_time_panel(a, 0.0, oy);
    out += portrait_panel(a, kPanelWidth + 20.0, oy);
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace

std::string_view to_string(ReportFormat format) {
  switch (format) {
    case ReportFormat::Csv: return "csv";
    case ReportFormat::Svg: return "svg";
    case ReportFormat::Json: return "json";
  }
  return "unknown";
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "svg") return ReportFormat::Svg;
  if (text == "json") return ReportFormat::Json;
  throw Error(ErrorCode::UnsupportedFormat, fmt::format("unsupported report format '{}'", text));
}

double average_click_speed(const SessionAnalysis& analysis) {
  if (analysis.elapsed_minutes <= 0.0) return 0.0;
  return static_cast<double>(analysis.total_clicks) / analysis.elapsed_minutes;
}

std::string emit_report(std::span<const SessionAnalysis> analyses, ReportFormat format) {
  if (analyses.empty()) throw Error(ErrorCode::SeriesTooShort, "no session analyses to report");
  switch (format) {
    case ReportFormat::Csv: return emit_csv(analyses);
    case ReportFormat::Svg: return emit_svg(analyses);
    case ReportFormat::Json: return emit_json(analyses);
  }
  throw Error(ErrorCode::UnsupportedFormat, "unsupported report format");
}

}  // namespace rwr
