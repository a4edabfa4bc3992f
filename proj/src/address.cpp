#include "structsheet/address.hpp"

#include <cctype>

#include "structsheet/errors.hpp"

namespace structsheet {

std::string column_letters(std::uint32_t column) {
  std::string out;
  while (column > 0) {
    --column;
    out.insert(out.begin(), static_cast<char>('A' + column % 26));
    column /= 26;
  }
  return out;
}

std::string address_to_a1(CellAddress addr) {
  return column_letters(addr.column) + std::to_string(addr.row);
}

CellAddress a1_to_address(std::string_view text) {
  auto fail = [&](const char* why) -> AddressError {
    return AddressError("malformed reference '" + std::string(text) + "': " + why);
  };
  std::size_t i = 0;
  std::uint64_t column = 0;
  while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) {
    column = column * 26 + static_cast<std::uint64_t>(std::toupper(static_cast<unsigned char>(text[i])) - 'A' + 1);
    if (column > kMaxColumn) throw fail("column out of bounds");
    ++i;
  }
  if (i == 0) throw fail("missing column letters");
  const std::size_t digits_start = i;
  std::uint64_t row = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    row = row * 10 + static_cast<std::uint64_t>(text[i] - '0');
    if (row > kMaxRow) throw fail("row out of bounds");
    ++i;
  }
  if (i == digits_start) throw fail("missing row number");
  if (i != text.size()) throw fail("trailing characters");
  if (row == 0) throw fail("row 0");
  return CellAddress{static_cast<std::uint32_t>(column), static_cast<std::uint32_t>(row)};
}

}  // namespace structsheet
