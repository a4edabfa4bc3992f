#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "structsheet/address.hpp"
#include "structsheet/formula.hpp"

namespace structsheet {

struct Empty {
  friend bool operator==(const Empty&, const Empty&) = default;
};

struct Label {
  std::string text;
  friend bool operator==(const Label&, const Label&) = default;
};

struct Number {
  double value = 0.0;
  friend bool operator==(const Number&, const Number&) = default;
};

struct Formula {
  std::string source;
  std::shared_ptr<const FormulaAst> ast;

  // Parses source; throws FormulaError.
  static Formula from_source(std::string source);
  static Formula from_ast(FormulaAst ast);

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.source == b.source && (a.ast == b.ast || (a.ast && b.ast && *a.ast == *b.ast));
  }
};

using CellContent = std::variant<Empty, Label, Number, Formula>;

// Sparse grid. Absent cells are Empty; Empty is never stored.
class Workbook {
 public:
  using Cells = std::map<CellAddress, CellContent>;

  Workbook() = default;
  explicit Workbook(std::string origin_name) : origin_name_(std::move(origin_name)) {}

  // Storing Empty erases. Throws AddressError for out-of-bounds addresses.
  void set(CellAddress addr, CellContent content);
  const CellContent& get(CellAddress addr) const;
  bool contains(CellAddress addr) const { return cells_.count(addr) != 0; }

  const Number* number_at(CellAddress addr) const { return std::get_if<Number>(&get(addr)); }
  const Formula* formula_at(CellAddress addr) const { return std::get_if<Formula>(&get(addr)); }
  const Label* label_at(CellAddress addr) const { return std::get_if<Label>(&get(addr)); }

  // Closest Label cell strictly left of addr in the same row.
  std::optional<std::string> nearest_label_left(CellAddress addr) const;

  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  const Cells& cells() const { return cells_; }
  Cells::const_iterator begin() const { return cells_.begin(); }
  Cells::const_iterator end() const { return cells_.end(); }

  const std::string& origin_name() const { return origin_name_; }

  // Cell-for-cell comparison; origin_name is not compared.
  friend bool operator==(const Workbook& a, const Workbook& b) { return a.cells_ == b.cells_; }

 private:
  Cells cells_;
  std::string origin_name_;
};

// Decimal with optional sign, optional comma thousands separators and
// optional fraction. No whitespace, no exponent.
std::optional<double> parse_decimal(std::string_view text);

// Formula-CSV: RFC 4180 records; row r field c -> CellAddress(c, r).
// Throws CsvError, LoadError, AddressError.
Workbook load_workbook(std::istream& in, std::string origin_name = {});
Workbook load_workbook_text(std::string_view text, std::string origin_name = {});
Workbook load_workbook_file(const std::string& path);

// LF line endings; fields quoted when they contain ',', '"', CR or LF.
void save_workbook(const Workbook& wb, std::ostream& out);
std::string save_workbook_text(const Workbook& wb);

}  // namespace structsheet
