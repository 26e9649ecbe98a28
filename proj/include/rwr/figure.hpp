#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>

namespace rwr {

enum class Shape : std::uint8_t { Circle, Square, Triangle };
enum class Shade : std::uint8_t { Light, Medium, Dark };
enum class Size : std::uint8_t { Small, Medium, Large };

inline constexpr int kVariantCount = 27;
inline constexpr int kSetSize = 9;
inline constexpr int kAttributeCount = 3;
inline constexpr int kGradesPerAttribute = 3;

// One of the 27 stimulus variants. The canonical index is
// shape*9 + shade*3 + size.
struct Figure {
  Shape shape = Shape::Circle;
  Shade shade = Shade::Light;
  Size size = Size::Small;

  constexpr int index() const noexcept {
    return static_cast<int>(shape) * 9 + static_cast<int>(shade) * 3 +
           static_cast<int>(size);
  }

  static constexpr Figure from_index(int index) noexcept {
    return Figure{static_cast<Shape>(index / 9),
                  static_cast<Shade>((index / 3) % 3),
                  static_cast<Size>(index % 3)};
  }

  // Attribute grade by position: 0 = shape, 1 = shade, 2 = size.
  constexpr int attribute(int which) const noexcept {
    switch (which) {
      case 0: return static_cast<int>(shape);
      case 1: return static_cast<int>(shade);
      default: return static_cast<int>(size);
    }
  }

  friend constexpr bool operator==(const Figure&, const Figure&) = default;
};

std::string_view to_string(Shape shape);
std::string_view to_string(Shade shade);
std::string_view to_string(Size size);

std::optional<Shape> parse_shape(std::string_view text);
std::optional<Shade> parse_shade(std::string_view text);
std::optional<Size> parse_size(std::string_view text);

}  // namespace rwr
