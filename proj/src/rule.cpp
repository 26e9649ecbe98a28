#include "rwr/rule.hpp"

#include <charconv>
#include <vector>

#include "rwr/error.hpp"
#include "rwr/rng.hpp"

namespace rwr {

std::string_view to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::DesignatedSuccessor: return "designated_successor";
    case RuleKind::AllAttributesDifferent: return "all_attributes_different";
    case RuleKind::AnyDifferent: return "any_different";
  }
  return "unknown";
}

std::string to_string(const RightnessRule& rule) {
  std::string text(to_string(rule.kind));
  if (rule.kind == RuleKind::DesignatedSuccessor) text += ":" + std::to_string(rule.stride);
  return text;
}

RightnessRule parse_rule(std::string_view text) {
  std::string_view name = text;
  std::string_view stride_text;
  const bool has_stride = text.find(':') != std::string_view::npos;
  if (const auto colon = text.find(':'); has_stride) {
    name = text.substr(0, colon);
    stride_text = text.substr(colon + 1);
  }

  RightnessRule rule;
  if (name == "designated_successor") {
    rule.kind = RuleKind::DesignatedSuccessor;
    if (has_stride) {
      int stride = 0;
      const auto [end, ec] =
          std::from_chars(stride_text.data(), stride_text.data() + stride_text.size(), stride);
      if (ec != std::errc{} || end != stride_text.data() + stride_text.size() || stride < 1 ||
          stride >= kVariantCount) {
        throw Error(ErrorCode::InvalidRule, "invalid stride in rule '" + std::string(text) + "'");
      }
      rule.stride = stride;
    }
    return rule;
  }
  if (has_stride) {
    throw Error(ErrorCode::InvalidRule, "stride only applies to designated_successor");
  }
  if (name == "all_attributes_different") {
    rule.kind = RuleKind::AllAttributesDifferent;
  } else if (name == "any_different") {
    rule.kind = RuleKind::AnyDifferent;
  } else {
    throw Error(ErrorCode::InvalidRule, "unknown rule '" + std::string(text) + "'");
  }
  return rule;
}

namespace {

bool all_attributes_differ(const Figure& a, const Figure& b) {
  return a.shape != b.shape && a.shade != b.shade && a.size != b.size;
}

Figure successor(const Figure& previous, int stride) {
  return Figure::from_index((previous.index() + stride) % kVariantCount);
}

}  // namespace

bool is_right(const RightnessRule& rule, const std::optional<Figure>& previous_right,
              const Figure& candidate, const Figure& designated) {
  switch (rule.kind) {
    case RuleKind::DesignatedSuccessor:
      return candidate == designated;
    case RuleKind::AllAttributesDifferent:
      return !previous_right || all_attributes_differ(candidate, *previous_right);
    case RuleKind::AnyDifferent:
      return !previous_right || candidate != *previous_right;
  }
  return false;
}

std::optional<bool> predicts_right(const RightnessRule& rule,
                                   const std::optional<Figure>& previous_right,
                                   const Figure& candidate) {
  if (rule.kind == RuleKind::DesignatedSuccessor) {
    if (!previous_right) return std::nullopt;
    return candidate == successor(*previous_right, rule.stride);
  }
  return is_right(rule, previous_right, candidate, candidate);
}

Figure designate(const RightnessRule& rule, const std::optional<Figure>& previous_right,
                 Rng& rng) {
  if (!previous_right) return Figure::from_index(rng.below(kVariantCount));
  if (rule.kind == RuleKind::DesignatedSuccessor) return successor(*previous_right, rule.stride);

  std::vector<Figure> eligible;
  eligible.reserve(kVariantCount);
  for (int index = 0; index < kVariantCount; ++index) {
    const Figure figure = Figure::from_index(index);
    if (is_right(rule, previous_right, figure, figure)) eligible.push_back(figure);
  }
  return eligible[static_cast<std::size_t>(rng.below(static_cast<int>(eligible.size())))];
}

}  // namespace rwr
