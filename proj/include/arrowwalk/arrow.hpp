#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace arrowwalk {

/// Integer site of Z.
using Site = std::int64_t;
/// Stack level; levels start at 1 (the bottom arrow).
using Level = std::int64_t;

enum class Arrow : std::uint8_t { Left, Right };

constexpr Arrow flip(Arrow a) noexcept {
  return a == Arrow::Left ? Arrow::Right : Arrow::Left;
}

constexpr int step_of(Arrow a) noexcept { return a == Arrow::Right ? 1 : -1; }

constexpr char to_char(Arrow a) noexcept { return a == Arrow::Right ? 'R' : 'L'; }

inline Arrow arrow_from_char(char c) {
  switch (c) {
    case 'R':
    case 'r':
      return Arrow::Right;
    case 'L':
    case 'l':
      return Arrow::Left;
    default:
      throw std::invalid_argument(std::string("not an arrow character: '") + c + "'");
  }
}

inline std::vector<Arrow> arrows_from_string(std::string_view text) {
  std::vector<Arrow> out;
  out.reserve(text.size());
  for (char c : text) out.push_back(arrow_from_char(c));
  return out;
}

inline std::string to_string(std::span<const Arrow> arrows) {
  std::string out;
  out.reserve(arrows.size());
  for (Arrow a : arrows) out.push_back(to_char(a));
  return out;
}

}  // namespace arrowwalk
