#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <queue>
#include <stdexcept>

#include "structsheet/chart.hpp"

namespace structsheet {

const ModuleTree* ModuleGraph::find(int id) const {
  for (const auto& m : modules)
    if (m.id == id) return &m;
  return nullptr;
}

const ModuleTree* ModuleGraph::find(const std::string& name) const {
  for (const auto& m : modules)
    if (m.name == name) return &m;
  return nullptr;
}

std::string sanitize_module_name(std::string_view label) {
  std::string out;
  bool pending_sep = false;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      if (pending_sep && !out.empty()) out += '_';
      pending_sep = false;
      out += c;
    } else {
      pending_sep = true;
    }
  }
  return out.empty() ? "MODULE" : out;
}

namespace {

class NameTable {
 public:
  explicit NameTable(std::vector<std::string>& warnings) : warnings_(warnings) {}

  std::string claim(const std::string& wanted) {
    if (used_.insert(wanted).second) return wanted;
    for (int n = 2;; ++n) {
      std::string candidate = wanted + "_" + std::to_string(n);
      if (used_.insert(candidate).second) {
        warnings_.push_back("module name '" + wanted + "' already used; renamed to '" + candidate + "'");
        return candidate;
      }
    }
  }

 private:
  std::set<std::string> used_;
  std::vector<std::string>& warnings_;
};

void index_cells(const ChartPtr& node, std::map<CellAddress, ChartPtr>& by_cell, std::set<const ChartNode*>& seen) {
  if (!seen.insert(node.get()).second) return;
  if (node->source) by_cell.emplace(*node->source, node);
  for (const auto& c : node->condition) index_cells(c, by_cell, seen);
  for (const auto& c : node->children) index_cells(c, by_cell, seen);
}

bool is_module_root(const ChartNode& n, const std::set<CellAddress>& roots) {
  return n.source && n.kind != ChartKind::InputLeaf && roots.count(*n.source);
}

// Module roots referenced from the body that starts at node.
void referenced_roots(const ChartNode& node, const std::set<CellAddress>& roots, std::set<CellAddress>& out) {
  auto visit = [&](const ChartPtr& c) {
    if (is_module_root(*c, roots)) {
      out.insert(*c->source);
    } else {
      referenced_roots(*c, roots, out);
    }
  };
  for (const auto& c : node.condition) visit(c);
  for (const auto& c : node.children) visit(c);
}

ChartPtr copy_body(const ChartNode& node, const std::set<CellAddress>& roots,
                   const std::map<CellAddress, std::string>& names) {
  auto out = std::make_shared<ChartNode>(node);
  auto convert = [&](std::vector<ChartPtr>& list) {
    for (auto& c : list) {
      if (is_module_root(*c, roots)) {
        auto ref = std::make_shared<ChartNode>();
        ref->kind = ChartKind::ModuleRef;
        ref->source = c->source;
        ref->label = names.at(*c->source);
        c = std::move(ref);
      } else {
        c = copy_body(*c, roots, names);
      }
    }
  };
  convert(out->condition);
  convert(out->children);
  return out;
}

void collect_inputs(const ChartNode& n, std::set<CellAddress>& out) {
  if (n.kind == ChartKind::InputLeaf && n.source) out.insert(*n.source);
  for (const auto& c : n.condition) collect_inputs(*c, out);
  for (const auto& c : n.children) collect_inputs(*c, out);
}

}  // namespace

std::set<CellAddress> input_cells_of(const ModuleTree& m) {
  std::set<CellAddress> out;
  if (m.root) collect_inputs(*m.root, out);
  return out;
}

ModuleGraph modularize(std::span<const ChartPtr> charts, const DependencyGraph& g,
                       const CellClassification& classification, InputGrouping grouping) {
  std::map<CellAddress, ChartPtr> by_cell;
  std::set<const ChartNode*> seen;
  for (const auto& c : charts) index_cells(c, by_cell, seen);

  std::set<CellAddress> roots;
  for (const auto& c : charts)
    if (c->source) roots.insert(*c->source);
  for (const auto& [cell, node] : by_cell) {
    if (classification.calculated.count(cell) && g.dependent_count(cell) >= 2) roots.insert(cell);
  }

  // uses[r] = module roots that r's body refers to.
  std::map<CellAddress, std::set<CellAddress>> uses;
  for (CellAddress r : roots) referenced_roots(*by_cell.at(r), roots, uses[r]);

  // Kahn ordering with dependencies first, smallest root address on ties.
  std::map<CellAddress, std::size_t> pending;
  std::map<CellAddress, std::vector<CellAddress>> users;
  for (CellAddress r : roots) {
    pending[r] = uses[r].size();
    for (CellAddress u : uses[r]) users[u].push_back(r);
  }
  std::priority_queue<CellAddress, std::vector<CellAddress>, std::greater<>> ready;
  for (const auto& [r, n] : pending)
    if (n == 0) ready.push(r);
  std::vector<CellAddress> order;
  while (!ready.empty()) {
    CellAddress r = ready.top();
    ready.pop();
    order.push_back(r);
    for (CellAddress u : users[r])
      if (--pending[u] == 0) ready.push(u);
  }
  if (order.size() != roots.size()) throw std::logic_error("module graph is cyclic");

  ModuleGraph mg;
  NameTable table(mg.warnings);
  std::map<CellAddress, std::string> names;
  std::map<CellAddress, int> ids;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const CellAddress r = order[i];
    ids[r] = static_cast<int>(i + 1);
    names[r] = table.claim(sanitize_module_name(by_cell.at(r)->label));
  }
  for (CellAddress r : order) {
    mg.modules.push_back(ModuleTree{ids[r], copy_body(*by_cell.at(r), roots, names), names[r]});
    for (CellAddress u : uses[r]) mg.edges.emplace(ids[r], ids[u]);
  }

  mg.input_modules = assign_input_modules(classification, grouping, mg.modules);
  for (auto& im : mg.input_modules) im.name = table.claim(im.name);
  return mg;
}

std::vector<InputModule> assign_input_modules(const CellClassification& classification, InputGrouping grouping,
                                              std::span<const ModuleTree> modules) {
  std::vector<InputModule> out;
  if (classification.inputs.empty()) return out;
  if (grouping == InputGrouping::Single) {
    out.push_back(InputModule{"INPUTS", {classification.inputs.begin(), classification.inputs.end()}});
    return out;
  }
  std::vector<const ModuleTree*> by_id;
  for (const auto& m : modules) by_id.push_back(&m);
  std::sort(by_id.begin(), by_id.end(), [](auto* a, auto* b) { return a->id < b->id; });
  std::set<CellAddress> assigned;
  for (const ModuleTree* m : by_id) {
    InputModule im{"INPUTS_" + m->name, {}};
    for (CellAddress c : input_cells_of(*m)) {
      if (classification.inputs.count(c) && assigned.insert(c).second) im.cells.push_back(c);
    }
    if (!im.cells.empty()) out.push_back(std::move(im));
  }
  InputModule rest{"INPUTS", {}};
  for (CellAddress c : classification.inputs)
    if (!assigned.count(c)) rest.cells.push_back(c);
  if (!rest.cells.empty()) out.push_back(std::move(rest));
  return out;
}

}  // namespace structsheet
