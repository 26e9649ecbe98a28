#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "rwr/analysis.hpp"

namespace rwr {

enum class ReportFormat { Csv, Svg, Json };

std::string_view to_string(ReportFormat format);
// Throws Error{UnsupportedFormat}.
ReportFormat parse_report_format(std::string_view text);

// Byte-stable for a fixed input. Throws SeriesTooShort on an empty list.
std::string emit_report(std::span<const SessionAnalysis> analyses, ReportFormat format);

// Clicks per minute over the whole record (slope of the click-vs-time line).
double average_click_speed(const SessionAnalysis& analysis);

}  // namespace rwr
