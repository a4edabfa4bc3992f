#include <array>
#include <charconv>
#include <set>

#include "structsheet/errors.hpp"
#include "structsheet/formula.hpp"

namespace structsheet {

std::string format_number(double v) {
  std::array<char, 512> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
  if (res.ec != std::errc()) {
    res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  }
  return std::string(buf.data(), res.ptr);
}

namespace {

int precedence(const FormulaAst& n) {
  switch (n.kind) {
    case AstKind::Binary:
      if (is_comparison(n.op)) return 1;
      if (n.op == BinaryOp::Add || n.op == BinaryOp::Sub) return 2;
      return 3;
    case AstKind::Negate: return 4;
    default: return 5;
  }
}

std::string ref_text(const Ref& r) {
  std::string s;
  if (r.abs_column) s += '$';
  s += column_letters(r.addr.column);
  if (r.abs_row) s += '$';
  s += std::to_string(r.addr.row);
  return s;
}

void print_into(const FormulaAst& n, int min_prec, std::string& out) {
  const bool parens = precedence(n) < min_prec;
  if (parens) out += '(';
  switch (n.kind) {
    case AstKind::Number: out += format_number(n.number); break;
    case AstKind::Ref: out += ref_text(n.ref); break;
    case AstKind::Range:
      out += ref_text(n.ref);
      out += ':';
      out += ref_text(n.ref_end);
      break;
    case AstKind::Negate:
      out += '-';
      print_into(n.args[0], 4, out);
      break;
    case AstKind::Binary: {
      const int p = precedence(n);
      print_into(n.args[0], p == 1 ? 2 : p, out);
      out += binary_symbol(n.op);
      print_into(n.args[1], p + 1, out);
      break;
    }
    case AstKind::Call:
      out += function_name(n.function);
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ',';
        print_into(n.args[i], 1, out);
      }
      out += ')';
      break;
  }
  if (parens) out += ')';
}

std::string offset_text(const Ref& r, CellAddress origin) {
  std::string s = "R";
  if (r.abs_row) {
    s += std::to_string(r.addr.row);
  } else {
    s += '[' + std::to_string(static_cast<std::int64_t>(r.addr.row) - origin.row) + ']';
  }
  s += 'C';
  if (r.abs_column) {
    s += std::to_string(r.addr.column);
  } else {
    s += '[' + std::to_string(static_cast<std::int64_t>(r.addr.column) - origin.column) + ']';
  }
  return s;
}

void normal_form_into(const FormulaAst& n, CellAddress origin, std::string& out) {
  switch (n.kind) {
    case AstKind::Number: out += format_number(n.number); break;
    case AstKind::Ref: out += offset_text(n.ref, origin); break;
    case AstKind::Range:
      out += offset_text(n.ref, origin);
      out += ':';
      out += offset_text(n.ref_end, origin);
      break;
    case AstKind::Negate:
      out += "(-";
      normal_form_into(n.args[0], origin, out);
      out += ')';
      break;
    case AstKind::Binary:
      out += '(';
      normal_form_into(n.args[0], origin, out);
      out += binary_symbol(n.op);
      normal_form_into(n.args[1], origin, out);
      out += ')';
      break;
    case AstKind::Call:
      out += function_name(n.function);
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ',';
        normal_form_into(n.args[i], origin, out);
      }
      out += ')';
      break;
  }
}

void collect(const FormulaAst& n, std::set<CellAddress>& seen, std::vector<CellAddress>& out) {
  auto add = [&](CellAddress a) {
    if (seen.insert(a).second) out.push_back(a);
  };
  switch (n.kind) {
    case AstKind::Ref: add(n.ref.addr); break;
    case AstKind::Range:
      for (auto r = n.ref.addr.row; r <= n.ref_end.addr.row; ++r)
        for (auto c = n.ref.addr.column; c <= n.ref_end.addr.column; ++c) add(CellAddress{c, r});
      break;
    default:
      for (const auto& a : n.args) collect(a, seen, out);
  }
}

Ref shift_ref(const Ref& r, std::int64_t drow, std::int64_t dcol) {
  Ref out = r;
  const std::int64_t row = r.abs_row ? r.addr.row : r.addr.row + drow;
  const std::int64_t col = r.abs_column ? r.addr.column : r.addr.column + dcol;
  if (row < 1 || col < 1 || row > kMaxRow || col > kMaxColumn)
    throw AddressError("shifted reference leaves the grid");
  out.addr = CellAddress{static_cast<std::uint32_t>(col), static_cast<std::uint32_t>(row)};
  return out;
}

}  // namespace

std::string print_expression(const FormulaAst& ast) {
  std::string out;
  print_into(ast, 1, out);
  return out;
}

std::string print_formula(const FormulaAst& ast) { return "=" + print_expression(ast); }

std::vector<CellAddress> precedents(const FormulaAst& ast) {
  std::set<CellAddress> seen;
  std::vector<CellAddress> out;
  collect(ast, seen, out);
  return out;
}

std::string relative_normal_form(const FormulaAst& ast, CellAddress origin) {
  std::string out;
  normal_form_into(ast, origin, out);
  return out;
}

FormulaAst shift(const FormulaAst& ast, std::int64_t drow, std::int64_t dcol) {
  FormulaAst out = ast;
  switch (out.kind) {
    case AstKind::Ref: out.ref = shift_ref(ast.ref, drow, dcol); break;
    case AstKind::Range:
      out.ref = shift_ref(ast.ref, drow, dcol);
      out.ref_end = shift_ref(ast.ref_end, drow, dcol);
      break;
    default:
      for (auto& a : out.args) a = shift(a, drow, dcol);
  }
  return out;
}

}  // namespace structsheet
