#include "structsheet/dependency.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "structsheet/errors.hpp"

namespace structsheet {

namespace {
const std::vector<CellAddress> kNone;
}

const std::vector<CellAddress>& DependencyGraph::precedents(CellAddress a) const {
  auto it = precedents_of.find(a);
  return it == precedents_of.end() ? kNone : it->second;
}

const std::vector<CellAddress>& DependencyGraph::dependents(CellAddress a) const {
  auto it = dependents_of.find(a);
  return it == dependents_of.end() ? kNone : it->second;
}

DependencyGraph build_graph(const Workbook& wb, bool empty_as_zero) {
  DependencyGraph g;
  for (const auto& [addr, content] : wb) {
    if (std::holds_alternative<Number>(content) || std::holds_alternative<Formula>(content)) g.nodes.insert(addr);
  }
  for (const auto& [addr, content] : wb) {
    const auto* f = std::get_if<Formula>(&content);
    if (!f) continue;
    auto& preds = g.precedents_of[addr];
    for (CellAddress p : precedents(*f->ast)) {
      const CellContent& target = wb.get(p);
      if (std::holds_alternative<Label>(target)) throw ReferenceError(ReferenceProblem::Label, addr, p);
      if (std::holds_alternative<Empty>(target)) {
        if (!empty_as_zero) throw ReferenceError(ReferenceProblem::Dangling, addr, p);
        g.implicit_zeros.insert(p);
        g.nodes.insert(p);
      }
      preds.push_back(p);
      g.edges.emplace(p, addr);
      g.dependents_of[p].push_back(addr);
    }
  }
  for (auto& [_, deps] : g.dependents_of) std::sort(deps.begin(), deps.end());
  return g;
}

CellClassification classify(const Workbook& wb, const DependencyGraph& g) {
  CellClassification cls;
  for (const auto& [addr, content] : wb) {
    if (std::holds_alternative<Number>(content)) cls.inputs.insert(addr);
    if (std::holds_alternative<Formula>(content)) cls.calculated.insert(addr);
    if (std::holds_alternative<Label>(content)) cls.labels.insert(addr);
  }
  cls.inputs.insert(g.implicit_zeros.begin(), g.implicit_zeros.end());
  return cls;
}

std::vector<CellAddress> terminal_cells(const CellClassification& cls, const DependencyGraph& g) {
  std::vector<CellAddress> out;
  for (CellAddress c : cls.calculated)
    if (g.dependent_count(c) == 0) out.push_back(c);
  return out;
}

std::vector<CellAddress> shared_cells(const CellClassification& cls, const DependencyGraph& g) {
  std::vector<CellAddress> out;
  for (CellAddress c : cls.calculated)
    if (g.dependent_count(c) >= 2) out.push_back(c);
  return out;
}

std::vector<std::vector<CellAddress>> find_cycles(const DependencyGraph& g) {
  // Iterative Tarjan.
  std::map<CellAddress, std::size_t> index;
  std::map<CellAddress, std::size_t> low;
  std::set<CellAddress> on_stack;
  std::vector<CellAddress> stack;
  std::vector<std::vector<CellAddress>> components;
  std::size_t next_index = 0;

  struct Frame {
    CellAddress node;
    std::size_t next_child;
  };
  for (CellAddress start : g.nodes) {
    if (index.count(start)) continue;
    std::vector<Frame> frames{{start, 0}};
    index[start] = low[start] = next_index++;
    stack.push_back(start);
    on_stack.insert(start);
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& deps = g.dependents(f.node);
      if (f.next_child < deps.size()) {
        CellAddress w = deps[f.next_child++];
        if (!index.count(w)) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack.insert(w);
          frames.push_back({w, 0});
        } else if (on_stack.count(w)) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      const CellAddress v = f.node;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().node] = std::min(low[frames.back().node], low[v]);
      if (low[v] == index[v]) {
        std::vector<CellAddress> comp;
        CellAddress w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack.erase(w);
          comp.push_back(w);
        } while (w != v);
        components.push_back(std::move(comp));
      }
    }
  }

  std::vector<std::vector<CellAddress>> cycles;
  for (auto& comp : components) {
    const std::set<CellAddress> members(comp.begin(), comp.end());
    const CellAddress first = *members.begin();
    if (members.size() == 1 && !g.edges.count({first, first})) continue;
    std::vector<CellAddress> order;
    std::set<CellAddress> seen;
    std::function<void(CellAddress)> visit = [&](CellAddress v) {
      if (!seen.insert(v).second) return;
      order.push_back(v);
      for (CellAddress w : g.dependents(v))
        if (members.count(w)) visit(w);
    };
    visit(first);
    cycles.push_back(std::move(order));
  }
  std::sort(cycles.begin(), cycles.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return cycles;
}

std::optional<std::vector<CellAddress>> topological_order(const DependencyGraph& g) {
  std::map<CellAddress, std::size_t> indegree;
  for (CellAddress n : g.nodes) indegree[n] = 0;
  for (const auto& [p, d] : g.edges) ++indegree[d];
  std::priority_queue<CellAddress, std::vector<CellAddress>, std::greater<>> ready;
  for (const auto& [n, deg] : indegree)
    if (deg == 0) ready.push(n);
  std::vector<CellAddress> order;
  order.reserve(g.nodes.size());
  while (!ready.empty()) {
    CellAddress n = ready.top();
    ready.pop();
    order.push_back(n);
    for (CellAddress d : g.dependents(n))
      if (--indegree[d] == 0) ready.push(d);
  }
  if (order.size() != g.nodes.size()) return std::nullopt;
  return order;
}

std::vector<ReplicationClass> replication_classes(const Workbook& wb) {
  std::map<std::string, std::vector<CellAddress>> groups;
  for (const auto& [addr, content] : wb) {
    if (const auto* f = std::get_if<Formula>(&content))
      groups[relative_normal_form(*f->ast, addr)].push_back(addr);
  }
  std::vector<ReplicationClass> out;
  for (auto& [form, members] : groups) {
    if (members.size() >= 2) out.push_back(ReplicationClass{form, std::move(members)});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.members.front() < b.members.front(); });
  return out;
}

Workbook materialize_empty_references(const Workbook& wb) {
  Workbook out = wb;
  for (const auto& [addr, content] : wb) {
    if (const auto* f = std::get_if<Formula>(&content)) {
      for (CellAddress p : precedents(*f->ast))
        if (!wb.contains(p)) out.set(p, Number{0.0});
    }
  }
  return out;
}

}  // namespace structsheet
