#include "structsheet/layout.hpp"

#include <algorithm>
#include <stdexcept>

#include "structsheet/errors.hpp"

namespace structsheet {

namespace {

struct Slot {
  const ChartNode* node;
  int depth;
  std::string suffix;
};

void enumerate(const ChartNode& n, int depth, std::string suffix, std::vector<Slot>& out) {
  out.push_back(Slot{&n, depth, std::move(suffix)});
  if (n.kind == ChartKind::Selection) {
    const std::string cond = n.annotation.value_or("");
    for (const auto& c : n.condition) enumerate(*c, depth + 1, " [cond " + cond + "]", out);
    for (std::size_t i = 0; i < n.children.size(); ++i)
      enumerate(*n.children[i], depth + 1, i == 0 ? " [if " + cond + "]" : " [else]", out);
    return;
  }
  for (const auto& c : n.children) enumerate(*c, depth + 1, "", out);
}

using AddressOf = std::map<const ChartNode*, CellAddress>;

// Cells read by the formula rooted at a sourced node, resolved to the rows
// standing for them. Grouping nodes belong to the same formula.
void scope_of(const ChartNode& n, const AddressOf& at, std::map<CellAddress, CellAddress>& scope) {
  auto visit = [&](const ChartPtr& c) {
    if (c->synthesized()) {
      scope_of(*c, at, scope);
    } else {
      scope.emplace(*c->source, at.at(c.get()));
    }
  };
  for (const auto& c : n.condition) visit(c);
  for (const auto& c : n.children) visit(c);
}

// Appends the rewritten members of a range argument: one range when their
// new cells form a rectangle in the same row-major order, else single refs.
void rewrite_range(const FormulaAst& range, const std::map<CellAddress, CellAddress>& scope,
                   std::vector<FormulaAst>& args) {
  std::vector<CellAddress> images;
  for (auto r = range.ref.addr.row; r <= range.ref_end.addr.row; ++r)
    for (auto c = range.ref.addr.column; c <= range.ref_end.addr.column; ++c)
      images.push_back(scope.at(CellAddress{c, r}));
  auto [min_col, max_col] = std::minmax_element(images.begin(), images.end(),
                                                [](auto a, auto b) { return a.column < b.column; });
  auto [min_row, max_row] =
      std::minmax_element(images.begin(), images.end(), [](auto a, auto b) { return a.row < b.row; });
  const CellAddress top_left{min_col->column, min_row->row};
  const CellAddress bottom_right{max_col->column, max_row->row};
  bool rectangle = static_cast<std::size_t>(bottom_right.column - top_left.column + 1) *
                       (bottom_right.row - top_left.row + 1) ==
                   images.size();
  if (rectangle) {
    std::size_t i = 0;
    for (auto r = top_left.row; r <= bottom_right.row && rectangle; ++r)
      for (auto c = top_left.column; c <= bottom_right.column && rectangle; ++c)
        rectangle = images[i++] == CellAddress{c, r};
  }
  if (rectangle) {
    args.push_back(FormulaAst::make_range(Ref{top_left}, Ref{bottom_right}));
    return;
  }
  for (CellAddress a : images) args.push_back(FormulaAst::make_ref(a));
}

FormulaAst rewrite(const FormulaAst& e, const std::map<const FormulaAst*, CellAddress>& holes,
                   const std::map<CellAddress, CellAddress>& scope) {
  if (auto it = holes.find(&e); it != holes.end()) return FormulaAst::make_ref(it->second);
  switch (e.kind) {
    case AstKind::Number: return e;
    case AstKind::Ref: {
      auto it = scope.find(e.ref.addr);
      if (it == scope.end()) throw std::logic_error("no row stands for " + address_to_a1(e.ref.addr));
      return FormulaAst::make_ref(it->second);
    }
    case AstKind::Range: throw std::logic_error("range outside an aggregate call");
    case AstKind::Negate: return FormulaAst::make_negate(rewrite(e.args[0], holes, scope));
    case AstKind::Binary:
      return FormulaAst::make_binary(e.op, rewrite(e.args[0], holes, scope), rewrite(e.args[1], holes, scope));
    case AstKind::Call: {
      std::vector<FormulaAst> args;
      for (const auto& a : e.args) {
        if (a.kind == AstKind::Range) {
          rewrite_range(a, scope, args);
        } else {
          args.push_back(rewrite(a, holes, scope));
        }
      }
      return FormulaAst::make_call(e.function, std::move(args));
    }
  }
  return e;
}

void rewrite_region(const ChartNode& n, const AddressOf& at, const std::map<CellAddress, CellAddress>& scope,
                    std::map<const ChartNode*, std::string>& texts) {
  std::map<const FormulaAst*, CellAddress> holes;
  auto note = [&](const ChartPtr& c) {
    if (c->synthesized()) holes.emplace(c->expr.get(), at.at(c.get()));
  };
  for (const auto& c : n.condition) note(c);
  for (const auto& c : n.children) note(c);
  texts[&n] = print_formula(rewrite(*n.expr, holes, scope));
  for (const auto& c : n.condition)
    if (c->synthesized()) rewrite_region(*c, at, scope, texts);
  for (const auto& c : n.children)
    if (c->synthesized()) rewrite_region(*c, at, scope, texts);
}

}  // namespace

StructuredLayout emit_layout(const ModuleTree& m) {
  StructuredLayout layout;
  layout.module_name = m.name;
  if (!m.root) return layout;
  std::vector<Slot> slots;
  enumerate(*m.root, 1, "", slots);

  AddressOf at;
  for (std::size_t i = 0; i < slots.size(); ++i)
    at[slots[i].node] = CellAddress{static_cast<std::uint32_t>(1 + slots[i].depth), static_cast<std::uint32_t>(i + 1)};

  std::map<const ChartNode*, std::string> texts;
  for (const Slot& s : slots) {
    const ChartNode& n = *s.node;
    if (n.synthesized() || n.kind == ChartKind::InputLeaf || n.kind == ChartKind::ModuleRef) continue;
    std::map<CellAddress, CellAddress> scope;
    scope_of(n, at, scope);
    rewrite_region(n, at, scope, texts);
  }

  for (const Slot& s : slots) {
    const ChartNode& n = *s.node;
    LayoutRow row;
    row.label = n.label + s.suffix;
    row.depth = s.depth;
    switch (n.kind) {
      case ChartKind::InputLeaf:
        row.value_source = InputValue{n.value};
        row.origin = n.source;
        break;
      case ChartKind::ModuleRef:
        row.value_source = ModuleRefName{n.label};
        break;
      default:
        row.value_source = RewrittenFormula{texts.at(&n)};
        row.origin = n.source;
    }
    layout.max_depth = std::max(layout.max_depth, s.depth);
    layout.rows.push_back(std::move(row));
  }
  return layout;
}

PlacedWorkbook place_and_rewrite(std::span<const StructuredLayout> layouts, std::span<const InputModule> input_modules,
                                 const Workbook& original) {
  PlacedWorkbook placed;
  if (layouts.empty() && input_modules.empty()) return placed;

  int deepest = 1;
  for (const auto& l : layouts) deepest = std::max(deepest, l.max_depth);
  const std::uint32_t comment_col = static_cast<std::uint32_t>(deepest) + 2;

  std::set<std::string> used;
  auto unique_name = [&](const std::string& wanted) {
    if (used.insert(wanted).second) return wanted;
    for (int n = 2;; ++n) {
      std::string candidate = wanted + "_" + std::to_string(n);
      if (used.insert(candidate).second) {
        placed.warnings.push_back("module name '" + wanted + "' already used; renamed to '" + candidate + "'");
        return candidate;
      }
    }
  };

  // Positions first: module bases, root cells and input cells.
  std::uint32_t cursor = 1;
  std::vector<std::uint32_t> bases;
  std::vector<std::string> layout_names;
  std::map<std::string, CellAddress> root_of;
  for (const auto& l : layouts) {
    bases.push_back(cursor);
    layout_names.push_back(unique_name(l.module_name));
    root_of.emplace(l.module_name, CellAddress{2, cursor + 1});
    cursor += static_cast<std::uint32_t>(l.rows.size()) + 2;
  }
  std::vector<std::uint32_t> input_bases;
  std::vector<std::string> input_names;
  std::map<CellAddress, CellAddress> input_at;
  for (const auto& im : input_modules) {
    input_bases.push_back(cursor);
    input_names.push_back(unique_name(im.name));
    for (std::size_t i = 0; i < im.cells.size(); ++i) {
      if (!input_at.emplace(im.cells[i], CellAddress{2, cursor + 1 + static_cast<std::uint32_t>(i)}).second)
        throw std::logic_error("input " + address_to_a1(im.cells[i]) + " placed twice");
    }
    cursor += static_cast<std::uint32_t>(im.cells.size()) + 2;
  }

  Workbook& wb = placed.workbook;
  for (std::size_t k = 0; k < layouts.size(); ++k) {
    const auto& l = layouts[k];
    const std::uint32_t base = bases[k];
    wb.set(CellAddress{1, base}, Label{"Module " + layout_names[k]});
    for (std::size_t i = 0; i < l.rows.size(); ++i) {
      const LayoutRow& row = l.rows[i];
      const std::uint32_t r = base + 1 + static_cast<std::uint32_t>(i);
      const CellAddress value_at{static_cast<std::uint32_t>(1 + row.depth), r};
      wb.set(CellAddress{1, r}, Label{std::string(2 * static_cast<std::size_t>(row.depth - 1), ' ') + row.label});
      std::string comment;
      if (const auto* f = std::get_if<RewrittenFormula>(&row.value_source)) {
        wb.set(value_at, Formula::from_ast(shift(parse_formula(f->text), base, 0)));
        if (row.origin) {
          placed.origin_map[*row.origin] = value_at;
          comment = std::string(kOriginTag) + address_to_a1(*row.origin);
        }
      } else if (std::get_if<InputValue>(&row.value_source)) {
        if (!row.origin) throw std::logic_error("input row without a cell");
        auto it = input_at.find(*row.origin);
        if (it == input_at.end()) throw std::logic_error("input " + address_to_a1(*row.origin) + " has no input module");
        wb.set(value_at, Formula::from_ast(FormulaAst::make_ref(it->second)));
        comment = std::string(kInputTag) + address_to_a1(*row.origin);
      } else {
        const auto& ref = std::get<ModuleRefName>(row.value_source);
        auto it = root_of.find(ref.name);
        if (it == root_of.end()) throw std::logic_error("unknown module " + ref.name);
        wb.set(value_at, Formula::from_ast(FormulaAst::make_ref(it->second)));
        comment = std::string(kModuleTag) + ref.name;
      }
      if (!comment.empty()) wb.set(CellAddress{comment_col, r}, Label{comment});
    }
  }

  for (std::size_t k = 0; k < input_modules.size(); ++k) {
    const auto& im = input_modules[k];
    const std::uint32_t base = input_bases[k];
    wb.set(CellAddress{1, base}, Label{"Input module " + input_names[k]});
    for (std::size_t i = 0; i < im.cells.size(); ++i) {
      const CellAddress cell = im.cells[i];
      const std::uint32_t r = base + 1 + static_cast<std::uint32_t>(i);
      const CellAddress value_at{2, r};
      const auto* n = original.number_at(cell);
      wb.set(CellAddress{1, r}, Label{cell_label(original, cell)});
      wb.set(value_at, Number{n ? n->value : 0.0});
      wb.set(CellAddress{comment_col, r}, Label{std::string(kOriginTag) + address_to_a1(cell)});
      placed.origin_map[cell] = value_at;
    }
  }
  return placed;
}

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string emit_overview_dot(const ModuleGraph& mg) {
  if (mg.modules.empty() && mg.input_modules.empty()) return "digraph G {}\n";
  std::vector<const ModuleTree*> modules;
  for (const auto& m : mg.modules) modules.push_back(&m);
  std::sort(modules.begin(), modules.end(), [](auto* a, auto* b) { return a->id < b->id; });

  std::string out = "digraph G {\n";
  for (const auto* m : modules) out += "  m" + std::to_string(m->id) + " [label=" + dot_quote(m->name) + "];\n";
  for (std::size_t k = 0; k < mg.input_modules.size(); ++k)
    out += "  i" + std::to_string(k + 1) + " [label=" + dot_quote(mg.input_modules[k].name) + ", shape=box];\n";
  for (const auto& [from, to] : mg.edges) out += "  m" + std::to_string(from) + " -> m" + std::to_string(to) + ";\n";
  for (std::size_t k = 0; k < mg.input_modules.size(); ++k) {
    const std::set<CellAddress> cells(mg.input_modules[k].cells.begin(), mg.input_modules[k].cells.end());
    for (const auto* m : modules) {
      const auto read = input_cells_of(*m);
      const bool feeds = std::any_of(read.begin(), read.end(), [&](CellAddress c) { return cells.count(c) != 0; });
      if (feeds) out += "  i" + std::to_string(k + 1) + " -> m" + std::to_string(m->id) + ";\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace structsheet
