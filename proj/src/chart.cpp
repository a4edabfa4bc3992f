#include <map>

#include "structsheet/chart.hpp"
#include "structsheet/errors.hpp"

namespace structsheet {

std::string_view chart_kind_name(ChartKind k) {
  switch (k) {
    case ChartKind::Sequence: return "sequence";
    case ChartKind::Repetition: return "repetition";
    case ChartKind::Selection: return "selection";
    case ChartKind::InputLeaf: return "input";
    case ChartKind::ModuleRef: return "module-ref";
  }
  return "?";
}

std::string cell_label(const Workbook& wb, CellAddress cell) {
  if (auto l = wb.nearest_label_left(cell)) return *l;
  return "CALC_" + address_to_a1(cell);
}

namespace {

bool all_range_aggregate(const FormulaAst& e) {
  if (e.kind != AstKind::Call || !is_aggregate(e.function)) return false;
  for (const auto& a : e.args)
    if (a.kind != AstKind::Range) return false;
  return true;
}

template <typename F>
void for_each_member(const FormulaAst& range, F&& f) {
  for (auto r = range.ref.addr.row; r <= range.ref_end.addr.row; ++r)
    for (auto c = range.ref.addr.column; c <= range.ref_end.addr.column; ++c) f(CellAddress{c, r});
}

class ChartBuilder {
 public:
  explicit ChartBuilder(const Workbook& wb) : wb_(wb) {}

  ChartPtr node_for(CellAddress cell) {
    if (auto it = memo_.find(cell); it != memo_.end()) return it->second;
    ChartPtr node;
    if (const auto* f = wb_.formula_at(cell)) {
      Fragment frag{*this, f->ast, {}};
      node = frag.build(*f->ast, cell);
    } else {
      auto leaf = std::make_shared<ChartNode>();
      leaf->kind = ChartKind::InputLeaf;
      leaf->source = cell;
      leaf->label = cell_label(wb_, cell);
      if (const auto* n = wb_.number_at(cell)) leaf->value = n->value;
      node = std::move(leaf);
    }
    memo_.emplace(cell, node);
    return node;
  }

 private:
  // Decomposition of one cell's formula. Each precedent is claimed by the
  // first slot that reaches it, so it appears exactly once under the cell.
  struct Fragment {
    ChartBuilder& builder;
    std::shared_ptr<const FormulaAst> owner;
    std::set<CellAddress> claimed;

    std::shared_ptr<const FormulaAst> alias(const FormulaAst& e) const {
      return std::shared_ptr<const FormulaAst>(owner, &e);
    }

    bool claim(CellAddress a) { return claimed.insert(a).second; }

    std::shared_ptr<ChartNode> build(const FormulaAst& e, std::optional<CellAddress> source) {
      auto node = std::make_shared<ChartNode>();
      node->source = source;
      node->expr = alias(e);
      node->label = source ? cell_label(builder.wb_, *source) : "[" + print_expression(e) + "]";
      if (e.kind == AstKind::Call && e.function == Function::If) {
        selection(e, *node);
      } else if (all_range_aggregate(e) && unclaimed_members(e)) {
        node->kind = ChartKind::Repetition;
        for (const auto& range : e.args)
          for_each_member(range, [&](CellAddress m) { take(m, node->children); });
      } else {
        node->kind = ChartKind::Sequence;
        collect(e, node->children);
      }
      return node;
    }

    bool unclaimed_members(const FormulaAst& e) const {
      bool ok = true;
      for (const auto& range : e.args)
        for_each_member(range, [&](CellAddress m) { ok = ok && !claimed.count(m); });
      return ok;
    }

    void take(CellAddress a, std::vector<ChartPtr>& out) {
      if (claim(a)) out.push_back(builder.node_for(a));
    }

    void collect(const FormulaAst& e, std::vector<ChartPtr>& out) {
      switch (e.kind) {
        case AstKind::Number: return;
        case AstKind::Ref: take(e.ref.addr, out); return;
        case AstKind::Range: for_each_member(e, [&](CellAddress m) { take(m, out); }); return;
        case AstKind::Negate:
        case AstKind::Binary:
          for (const auto& a : e.args) collect(a, out);
          return;
        case AstKind::Call:
          if (e.function == Function::If || (all_range_aggregate(e) && unclaimed_members(e))) {
            out.push_back(build(e, std::nullopt));
            return;
          }
          for (const auto& a : e.args) collect(a, out);
          return;
      }
    }

    // Condition operands are flattened; no grouping nodes inside a condition.
    void collect_flat(const FormulaAst& e, std::vector<ChartPtr>& out) {
      if (e.kind == AstKind::Ref) {
        take(e.ref.addr, out);
      } else if (e.kind == AstKind::Range) {
        for_each_member(e, [&](CellAddress m) { take(m, out); });
      } else {
        for (const auto& a : e.args) collect_flat(a, out);
      }
    }

    void selection(const FormulaAst& e, ChartNode& node) {
      node.kind = ChartKind::Selection;
      node.annotation = "(" + print_expression(e.args[0]) + ")";
      for (std::size_t i = 1; i <= 2; ++i) {
        const FormulaAst& branch = e.args[i];
        if (branch.kind == AstKind::Ref && claim(branch.ref.addr)) {
          node.children.push_back(builder.node_for(branch.ref.addr));
        } else {
          node.children.push_back(build(branch, std::nullopt));
        }
      }
      collect_flat(e.args[0], node.condition);
    }
  };

  const Workbook& wb_;
  std::map<CellAddress, ChartPtr> memo_;
};

}  // namespace

std::vector<ChartPtr> derive_chart(const Workbook& wb, const DependencyGraph& g,
                                   std::span<const CellAddress> processing_order) {
  if (!topological_order(g)) {
    auto cycles = find_cycles(g);
    throw CycleError(cycles.empty() ? std::vector<CellAddress>{} : cycles.front());
  }
  ChartBuilder builder(wb);
  for (CellAddress c : processing_order) {
    if (g.nodes.count(c)) builder.node_for(c);
  }
  std::vector<ChartPtr> charts;
  for (const auto& [addr, content] : wb) {
    if (std::holds_alternative<Formula>(content) && g.dependent_count(addr) == 0)
      charts.push_back(builder.node_for(addr));
  }
  return charts;
}

std::vector<ChartPtr> derive_chart(const Workbook& wb, const DependencyGraph& g) {
  auto order = topological_order(g);
  if (!order) {
    auto cycles = find_cycles(g);
    throw CycleError(cycles.empty() ? std::vector<CellAddress>{} : cycles.front());
  }
  return derive_chart(wb, g, *order);
}

}  // namespace structsheet
