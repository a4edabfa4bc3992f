#include "structsheet/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "structsheet/dependency.hpp"
#include "structsheet/errors.hpp"

namespace structsheet {

namespace {

class Evaluation {
 public:
  Evaluation(const ValueMap& values, CellAddress cell) : values_(values), cell_(cell) {}

  double eval(const FormulaAst& n) const {
    switch (n.kind) {
      case AstKind::Number: return n.number;
      case AstKind::Ref: return lookup(n.ref.addr);
      case AstKind::Range: throw EvalError(cell_, "range outside an aggregate call");
      case AstKind::Negate: return -eval(n.args[0]);
      case AstKind::Binary: return binary(n);
      case AstKind::Call: return call(n);
    }
    return 0;
  }

 private:
  double lookup(CellAddress a) const {
    auto it = values_.find(a);
    if (it == values_.end()) throw EvalError(cell_, "no value for " + address_to_a1(a));
    return it->second;
  }

  double binary(const FormulaAst& n) const {
    const double l = eval(n.args[0]);
    const double r = eval(n.args[1]);
    switch (n.op) {
      case BinaryOp::Add: return l + r;
      case BinaryOp::Sub: return l - r;
      case BinaryOp::Mul: return l * r;
      case BinaryOp::Div:
        if (r == 0.0) throw EvalError(cell_, "division by zero");
        return l / r;
      case BinaryOp::Eq: return l == r ? 1.0 : 0.0;
      case BinaryOp::Lt: return l < r ? 1.0 : 0.0;
      case BinaryOp::Gt: return l > r ? 1.0 : 0.0;
      case BinaryOp::Le: return l <= r ? 1.0 : 0.0;
      case BinaryOp::Ge: return l >= r ? 1.0 : 0.0;
      case BinaryOp::Ne: return l != r ? 1.0 : 0.0;
    }
    return 0;
  }

  double call(const FormulaAst& n) const {
    if (n.function == Function::If) return eval(n.args[0]) != 0.0 ? eval(n.args[1]) : eval(n.args[2]);
    std::vector<double> xs;
    for (const auto& a : n.args) {
      if (a.kind == AstKind::Range) {
        for (auto r = a.ref.addr.row; r <= a.ref_end.addr.row; ++r)
          for (auto c = a.ref.addr.column; c <= a.ref_end.addr.column; ++c) xs.push_back(lookup(CellAddress{c, r}));
      } else {
        xs.push_back(eval(a));
      }
    }
    double sum = 0;
    switch (n.function) {
      case Function::Sum:
        for (double x : xs) sum += x;
        return sum;
      case Function::Average:
        if (xs.empty()) throw EvalError(cell_, "division by zero (AVERAGE of nothing)");
        for (double x : xs) sum += x;
        return sum / static_cast<double>(xs.size());
      case Function::Min:
        return *std::min_element(xs.begin(), xs.end());
      case Function::Max:
        return *std::max_element(xs.begin(), xs.end());
      case Function::If: break;
    }
    return 0;
  }

  const ValueMap& values_;
  CellAddress cell_;
};

}  // namespace

ValueMap evaluate(const Workbook& wb) {
  const DependencyGraph g = build_graph(wb, false);
  auto order = topological_order(g);
  if (!order) {
    auto cycles = find_cycles(g);
    throw CycleError(cycles.empty() ? std::vector<CellAddress>{} : cycles.front());
  }
  return evaluate_in_order(wb, *order);
}

ValueMap evaluate_in_order(const Workbook& wb, std::span<const CellAddress> order) {
  ValueMap values;
  for (CellAddress a : order) {
    const CellContent& c = wb.get(a);
    if (const auto* n = std::get_if<Number>(&c)) {
      values[a] = n->value;
    } else if (const auto* f = std::get_if<Formula>(&c)) {
      for (CellAddress p : precedents(*f->ast)) {
        if (!values.count(p)) {
          if (!wb.contains(p)) throw ReferenceError(ReferenceProblem::Dangling, a, p);
          throw Error("evaluation order visits " + address_to_a1(a) + " before " + address_to_a1(p));
        }
      }
      values[a] = Evaluation(values, a).eval(*f->ast);
    } else {
      throw Error("evaluation order names non-value cell " + address_to_a1(a));
    }
  }
  return values;
}

std::vector<ValueDiscrepancy> value_diff(const ValueMap& a, const ValueMap& b,
                                         const std::map<CellAddress, CellAddress>& mapping) {
  std::vector<ValueDiscrepancy> out;
  for (const auto& [from, to] : mapping) {
    auto ia = a.find(from);
    if (ia == a.end()) throw UnmappedAddressError(from);
    auto ib = b.find(to);
    if (ib == b.end()) throw UnmappedAddressError(to);
    const double va = ia->second;
    const double vb = ib->second;
    if (std::fabs(va - vb) > 1e-9 * std::max(1.0, std::fabs(va)) || std::isnan(va) != std::isnan(vb))
      out.push_back(ValueDiscrepancy{from, va, vb});
  }
  return out;
}

std::string format_value(double v) {
  if (std::isfinite(v) && v == std::trunc(v) && std::fabs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    std::string s(buf);
    if (s == "-0") s = "0";
    return s;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace structsheet
