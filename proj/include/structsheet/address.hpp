#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace structsheet {

inline constexpr std::uint32_t kMaxColumn = 16384;
inline constexpr std::uint32_t kMaxRow = 1048576;

// 1-based grid position. Ordering is row-major: by row, then column.
struct CellAddress {
  std::uint32_t column = 1;
  std::uint32_t row = 1;

  friend constexpr bool operator==(const CellAddress&, const CellAddress&) = default;
  friend constexpr std::strong_ordering operator<=>(const CellAddress& a, const CellAddress& b) {
    if (auto c = a.row <=> b.row; c != 0) return c;
    return a.column <=> b.column;
  }
};

constexpr bool in_bounds(CellAddress a) {
  return a.column >= 1 && a.row >= 1 && a.column <= kMaxColumn && a.row <= kMaxRow;
}

// Bijective base-26 letters: 1 -> "A", 26 -> "Z", 27 -> "AA".
std::string column_letters(std::uint32_t column);

std::string address_to_a1(CellAddress addr);

// Accepts letters (either case) followed by digits; no '$' markers.
// Throws AddressError on malformed text or out-of-bounds coordinates.
CellAddress a1_to_address(std::string_view text);

}  // namespace structsheet
