#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "structsheet/address.hpp"

namespace structsheet {

// A single cell reference. The '$' markers do not affect dependencies but
// are kept so relative normal forms can tell pinned references apart.
struct Ref {
  CellAddress addr;
  bool abs_column = false;
  bool abs_row = false;

  friend bool operator==(const Ref&, const Ref&) = default;
};

enum class AstKind { Number, Ref, Range, Negate, Binary, Call };

enum class BinaryOp { Add, Sub, Mul, Div, Eq, Lt, Gt, Le, Ge, Ne };

enum class Function { Sum, Average, Min, Max, If };

// Parse tree of a formula. One node type tagged by kind:
//   Number  -> number
//   Ref     -> ref
//   Range   -> ref (top-left) and ref_end (bottom-right); only as a call argument
//   Negate  -> args[0]
//   Binary  -> op, args[0], args[1]
//   Call    -> function, args
struct FormulaAst {
  AstKind kind = AstKind::Number;
  double number = 0.0;
  Ref ref;
  Ref ref_end;
  BinaryOp op = BinaryOp::Add;
  Function function = Function::Sum;
  std::vector<FormulaAst> args;

  friend bool operator==(const FormulaAst&, const FormulaAst&) = default;

  static FormulaAst make_number(double v);
  static FormulaAst make_ref(CellAddress a, bool abs_column = false, bool abs_row = false);
  static FormulaAst make_ref(Ref r);
  // Corners are normalized so top-left <= bottom-right on both axes.
  static FormulaAst make_range(Ref a, Ref b);
  static FormulaAst make_negate(FormulaAst operand);
  static FormulaAst make_binary(BinaryOp op, FormulaAst lhs, FormulaAst rhs);
  static FormulaAst make_call(Function fn, std::vector<FormulaAst> args);
};

bool is_aggregate(Function fn);
std::string_view function_name(Function fn);
std::string_view binary_symbol(BinaryOp op);
bool is_comparison(BinaryOp op);

// Grammar:
//   formula := '=' cmp
//   cmp     := add (cmpop add)?
//   add     := mul (('+'|'-') mul)*
//   mul     := unary (('*'|'/') unary)*
//   unary   := '-' unary | atom
//   atom    := number | ref | range | call | '(' cmp ')'
// Throws FormulaError carrying the 0-based offset of the failure.
FormulaAst parse_formula(std::string_view text);

// Canonical source text with a leading '=' and minimal parentheses.
// parse_formula(print_formula(x)) == x.
std::string print_formula(const FormulaAst& ast);
// Same as print_formula without the leading '='.
std::string print_expression(const FormulaAst& ast);

// Referenced cells in source order, ranges expanded row-major, first
// occurrence kept.
std::vector<CellAddress> precedents(const FormulaAst& ast);

// Canonical, fully parenthesized text with references rewritten as offsets
// from origin: R[drow]C[dcol]. Absolute parts print as plain coordinates.
std::string relative_normal_form(const FormulaAst& ast, CellAddress origin);

// Translates relative reference parts by (drow, dcol); absolute parts stay.
// Throws AddressError if a reference leaves the grid.
FormulaAst shift(const FormulaAst& ast, std::int64_t drow, std::int64_t dcol);

// Shortest decimal text that round-trips, never in exponent notation.
std::string format_number(double v);

}  // namespace structsheet
