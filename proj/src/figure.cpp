#include "rwr/figure.hpp"

namespace rwr {

namespace {

constexpr std::array<std::string_view, 3> kShapeNames{"circle", "square", "triangle"};
constexpr std::array<std::string_view, 3> kShadeNames{"light", "medium", "dark"};
constexpr std::array<std::string_view, 3> kSizeNames{"small", "medium", "large"};

template <typename Enum>
std::optional<Enum> lookup(const std::array<std::string_view, 3>& names, std::string_view text) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == text) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Shape shape) { return kShapeNames[static_cast<int>(shape)]; }
std::string_view to_string(Shade shade) { return kShadeNames[static_cast<int>(shade)]; }
std::string_view to_string(Size size) { return kSizeNames[static_cast<int>(size)]; }

std::optional<Shape> parse_shape(std::string_view text) { return lookup<Shape>(kShapeNames, text); }
std::optional<Shade> parse_shade(std::string_view text) { return lookup<Shade>(kShadeNames, text); }
std::optional<Size> parse_size(std::string_view text) { return lookup<Size>(kSizeNames, text); }

}  // namespace rwr
