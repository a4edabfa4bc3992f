#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

#include "structsheet/errors.hpp"
#include "structsheet/formula.hpp"

namespace structsheet {

FormulaAst FormulaAst::make_number(double v) {
  FormulaAst n;
  n.kind = AstKind::Number;
  n.number = v;
  return n;
}

FormulaAst FormulaAst::make_ref(CellAddress a, bool abs_column, bool abs_row) {
  return make_ref(Ref{a, abs_column, abs_row});
}

FormulaAst FormulaAst::make_ref(Ref r) {
  FormulaAst n;
  n.kind = AstKind::Ref;
  n.ref = r;
  return n;
}

FormulaAst FormulaAst::make_range(Ref a, Ref b) {
  FormulaAst n;
  n.kind = AstKind::Range;
  n.ref = a;
  n.ref_end = b;
  if (n.ref.addr.column > n.ref_end.addr.column) {
    std::swap(n.ref.addr.column, n.ref_end.addr.column);
    std::swap(n.ref.abs_column, n.ref_end.abs_column);
  }
  if (n.ref.addr.row > n.ref_end.addr.row) {
    std::swap(n.ref.addr.row, n.ref_end.addr.row);
    std::swap(n.ref.abs_row, n.ref_end.abs_row);
  }
  return n;
}

FormulaAst FormulaAst::make_negate(FormulaAst operand) {
  FormulaAst n;
  n.kind = AstKind::Negate;
  n.args.push_back(std::move(operand));
  return n;
}

FormulaAst FormulaAst::make_binary(BinaryOp op, FormulaAst lhs, FormulaAst rhs) {
  FormulaAst n;
  n.kind = AstKind::Binary;
  n.op = op;
  n.args.push_back(std::move(lhs));
  n.args.push_back(std::move(rhs));
  return n;
}

FormulaAst FormulaAst::make_call(Function fn, std::vector<FormulaAst> args) {
  FormulaAst n;
  n.kind = AstKind::Call;
  n.function = fn;
  n.args = std::move(args);
  return n;
}

bool is_aggregate(Function fn) { return fn != Function::If; }

std::string_view function_name(Function fn) {
  switch (fn) {
    case Function::Sum: return "SUM";
    case Function::Average: return "AVERAGE";
    case Function::Min: return "MIN";
    case Function::Max: return "MAX";
    case Function::If: return "IF";
  }
  return "?";
}

std::string_view binary_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Ne: return "<>";
  }
  return "?";
}

bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add:
    case BinaryOp::Sub:
    case BinaryOp::Mul:
    case BinaryOp::Div: return false;
    default: return true;
  }
}

namespace {

std::optional<Function> lookup_function(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (name == "SUM") return Function::Sum;
  if (name == "AVERAGE") return Function::Average;
  if (name == "MIN") return Function::Min;
  if (name == "MAX") return Function::Max;
  if (name == "IF") return Function::If;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  FormulaAst parse() {
    if (text_.empty() || text_[0] != '=') throw FormulaError(0, "formula must begin with '='");
    pos_ = 1;
    FormulaAst root = comparison();
    skip_space();
    if (pos_ != text_.size()) throw FormulaError(pos_, "unexpected character '" + std::string(1, text_[pos_]) + "'");
    reject_bare_range(root);
    return root;
  }

 private:
  struct Located {
    FormulaAst ast;
    std::size_t offset;
  };

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  std::optional<BinaryOp> comparison_op() {
    skip_space();
    if (pos_ >= text_.size()) return std::nullopt;
    const char c = text_[pos_];
    const char next = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
    if (c == '<' && next == '=') { pos_ += 2; return BinaryOp::Le; }
    if (c == '>' && next == '=') { pos_ += 2; return BinaryOp::Ge; }
    if (c == '<' && next == '>') { pos_ += 2; return BinaryOp::Ne; }
    if (c == '<') { ++pos_; return BinaryOp::Lt; }
    if (c == '>') { ++pos_; return BinaryOp::Gt; }
    if (c == '=') { ++pos_; return BinaryOp::Eq; }
    return std::nullopt;
  }

  FormulaAst comparison() {
    FormulaAst lhs = additive();
    if (auto op = comparison_op()) {
      FormulaAst rhs = additive();
      lhs = FormulaAst::make_binary(*op, std::move(lhs), std::move(rhs));
      skip_space();
      const std::size_t here = pos_;
      if (comparison_op()) throw FormulaError(here, "comparisons do not chain");
    }
    return lhs;
  }

  FormulaAst additive() {
    FormulaAst lhs = multiplicative();
    while (true) {
      if (at('+')) {
        ++pos_;
        lhs = FormulaAst::make_binary(BinaryOp::Add, std::move(lhs), multiplicative());
      } else if (at('-')) {
        ++pos_;
        lhs = FormulaAst::make_binary(BinaryOp::Sub, std::move(lhs), multiplicative());
      } else {
        return lhs;
      }
    }
  }

  FormulaAst multiplicative() {
    FormulaAst lhs = unary();
    while (true) {
      if (at('*')) {
        ++pos_;
        lhs = FormulaAst::make_binary(BinaryOp::Mul, std::move(lhs), unary());
      } else if (at('/')) {
        ++pos_;
        lhs = FormulaAst::make_binary(BinaryOp::Div, std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  FormulaAst unary() {
    if (at('-')) {
      ++pos_;
      return FormulaAst::make_negate(unary());
    }
    return atom();
  }

  FormulaAst atom() {
    skip_space();
    if (pos_ >= text_.size()) throw FormulaError(pos_, "unexpected end of formula");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      FormulaAst inner = comparison();
      if (!at(')')) throw FormulaError(pos_, "expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '$') return reference_or_call();
    throw FormulaError(pos_, "unexpected character '" + std::string(1, c) + "'");
  }

  FormulaAst number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    std::string digits(text_.substr(start, pos_ - start));
    if (digits == ".") throw FormulaError(start, "malformed number");
    if (digits.front() == '.') digits.insert(digits.begin(), '0');
    double v = 0;
    auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (res.ec != std::errc() || res.ptr != digits.data() + digits.size())
      throw FormulaError(start, "malformed number");
    return FormulaAst::make_number(v);
  }

  Ref single_ref() {
    const std::size_t start = pos_;
    Ref r;
    if (pos_ < text_.size() && text_[pos_] == '$') { r.abs_column = true; ++pos_; }
    const std::size_t letters = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == letters) throw FormulaError(pos_, "expected column letters");
    const std::size_t letters_end = pos_;
    if (pos_ < text_.size() && text_[pos_] == '$') { r.abs_row = true; ++pos_; }
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) throw FormulaError(pos_, "expected row number");
    std::string a1(text_.substr(letters, letters_end - letters));
    a1 += text_.substr(digits, pos_ - digits);
    try {
      r.addr = a1_to_address(a1);
    } catch (const AddressError& e) {
      throw FormulaError(start, e.what());
    }
    return r;
  }

  FormulaAst reference_or_call() {
    const std::size_t start = pos_;
    std::size_t p = pos_;
    while (p < text_.size() && std::isalpha(static_cast<unsigned char>(text_[p]))) ++p;
    const bool is_name = text_[pos_] != '$' && p > pos_;
    std::size_t after = p;
    while (after < text_.size() && std::isspace(static_cast<unsigned char>(text_[after]))) ++after;
    if (is_name && after < text_.size() && text_[after] == '(') {
      std::string name(text_.substr(pos_, p - pos_));
      auto fn = lookup_function(name);
      if (!fn) throw FormulaError(start, "unknown function '" + name + "'");
      pos_ = after + 1;
      return call(*fn, start);
    }
    Ref first = single_ref();
    if (at(':')) {
      ++pos_;
      skip_space();
      Ref second = single_ref();
      FormulaAst range = FormulaAst::make_range(first, second);
      range_offsets_.push_back(start);
      return range;
    }
    return FormulaAst::make_ref(first);
  }

  FormulaAst call(Function fn, std::size_t start) {
    std::vector<FormulaAst> args;
    if (!at(')')) {
      while (true) {
        args.push_back(comparison());
        if (at(',')) {
          ++pos_;
          continue;
        }
        break;
      }
    }
    if (!at(')')) throw FormulaError(pos_, "expected ')' or ','");
    ++pos_;
    if (fn == Function::If && args.size() != 3)
      throw FormulaError(start, "IF takes exactly 3 arguments");
    if (is_aggregate(fn) && args.empty())
      throw FormulaError(start, std::string(function_name(fn)) + " takes at least 1 argument");
    return FormulaAst::make_call(fn, std::move(args));
  }

  // Ranges are legal only as direct arguments of an aggregate call. Offsets
  // of ranges were recorded in source order, so a pre-order walk finds the
  // offending one.
  void reject_bare_range(const FormulaAst& root) {
    std::size_t index = 0;
    walk(root, false, index);
  }

  void walk(const FormulaAst& n, bool range_allowed, std::size_t& index) {
    if (n.kind == AstKind::Range) {
      const std::size_t offset = range_offsets_[index++];
      if (!range_allowed) throw FormulaError(offset, "range outside an aggregate call");
      return;
    }
    const bool child_allowed = n.kind == AstKind::Call && is_aggregate(n.function);
    for (const auto& a : n.args) walk(a, child_allowed, index);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::size_t> range_offsets_;
};

}  // namespace

FormulaAst parse_formula(std::string_view text) { return Parser(text).parse(); }

}  // namespace structsheet
