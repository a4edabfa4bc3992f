#pragma once

// Test-only helpers: fixture access, a random acyclic workbook generator and
// brute-force oracles that do not share code paths with the library.

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "structsheet/chart.hpp"
#include "structsheet/dependency.hpp"
#include "structsheet/workbook.hpp"

namespace testing_support {

using namespace structsheet;

inline std::string fixture_path(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Workbook fixture(const std::string& name) { return load_workbook_file(fixture_path(name)); }

inline CellAddress A(const char* a1) { return a1_to_address(a1); }

// ---------------------------------------------------------------------------
// Random acyclic workbooks.
//
// Value cells fill a dense block in columns B.. in row-major order; a
// formula only reads cells generated before it, so the result is acyclic.
// Column A holds a label on most rows. References inside one formula are
// distinct, ranges included.
struct GeneratedWorkbook {
  Workbook workbook;
  std::string text;  // the FCSV it was loaded from
};

class WorkbookGenerator {
 public:
  explicit WorkbookGenerator(std::uint64_t seed) : rng_(seed) {}

  GeneratedWorkbook next(int max_cells = 100) {
    const int width = uniform(1, 4);
    const int cells = uniform(1, max_cells);
    const int rows = (cells + width - 1) / width;
    std::vector<std::vector<std::string>> grid(static_cast<std::size_t>(rows),
                                               std::vector<std::string>(static_cast<std::size_t>(width + 1)));
    int made = 0;
    for (int r = 0; r < rows; ++r) {
      if (chance(0.8)) grid[r][0] = "Item " + std::to_string(r + 1);
      for (int c = 0; c < width && made < cells; ++c, ++made) {
        const bool input = made < 2 || chance(0.4);
        grid[r][c + 1] = input ? number() : formula(r, c, width);
      }
    }
    std::string text;
    for (const auto& row : grid) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) text += ',';
        text += quote(row[i]);
      }
      text += '\n';
    }
    return GeneratedWorkbook{load_workbook_text(text), text};
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
      if (ch == '"') out += '"';
      out += ch;
    }
    return out + "\"";
  }

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::string number() {
    const int v = uniform(-50, 50);
    if (chance(0.2)) return std::to_string(v) + ".25";
    return std::to_string(v);
  }

  static std::string name(int r, int c) { return column_letters(static_cast<std::uint32_t>(c + 2)) + std::to_string(r + 1); }

  // Formula at grid (r, c); cells in earlier rows, or earlier in this row,
  // are available.
  std::string formula(int r, int c, int width) {
    std::vector<std::pair<int, int>> earlier;
    for (int rr = 0; rr <= r; ++rr)
      for (int cc = 0; cc < width; ++cc)
        if (rr < r || cc < c) earlier.emplace_back(rr, cc);
    std::shuffle(earlier.begin(), earlier.end(), rng_);
    std::set<std::pair<int, int>> used;
    auto pick = [&]() -> std::string {
      for (auto& e : earlier) {
        if (used.insert(e).second) return name(e.first, e.second);
      }
      return std::to_string(uniform(1, 9));
    };
    auto range = [&]() -> std::string {
      if (r < 2) return {};
      const int col = uniform(0, width - 1);
      const int top = uniform(0, r - 2);
      const int bottom = uniform(top + 1, r - 1);
      for (int rr = top; rr <= bottom; ++rr)
        if (used.count({rr, col})) return {};
      for (int rr = top; rr <= bottom; ++rr) used.insert({rr, col});
      return name(top, col) + ":" + name(bottom, col);
    };
    auto arithmetic = [&]() {
      std::string s = pick();
      const int terms = uniform(0, 3);
      for (int i = 0; i < terms; ++i) {
        switch (uniform(0, 3)) {
          case 0: s += "+" + pick(); break;
          case 1: s += "-" + pick(); break;
          case 2: s += "*" + std::to_string(uniform(1, 3)); break;
          default: s = "(" + s + ")/" + std::to_string(uniform(1, 4)); break;
        }
      }
      return s;
    };
    static const char* const kCmp[] = {">", "<", ">=", "<=", "=", "<>"};
    switch (uniform(0, 5)) {
      case 0:
      case 1: return "=" + arithmetic();
      case 2: {
        std::string rg = range();
        if (rg.empty()) return "=" + arithmetic();
        return chance(0.5) ? "=SUM(" + rg + ")" : "=SUM(" + rg + ")+" + pick();
      }
      case 3: {
        std::string cond = pick() + kCmp[uniform(0, 5)] + (chance(0.5) ? pick() : "0");
        std::string a = pick();
        std::string b = chance(0.5) ? pick() : arithmetic();
        return "=IF(" + cond + "," + a + "," + b + ")";
      }
      case 4: {
        std::string cond = pick() + ">0";
        return "=" + pick() + "+IF(" + cond + "," + pick() + ",-" + pick() + ")";
      }
      default: {
        std::string rg = range();
        if (rg.empty()) return "=-" + pick();
        const char* fn[] = {"SUM", "AVERAGE", "MIN", "MAX"};
        return std::string("=") + fn[uniform(0, 3)] + "(" + rg + ")";
      }
    }
  }

  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Oracles.

// Distinct referenced cells of one formula, by direct tree walk.
inline std::set<CellAddress> brute_force_refs(const FormulaAst& n) {
  std::set<CellAddress> out;
  std::function<void(const FormulaAst&)> walk = [&](const FormulaAst& e) {
    if (e.kind == AstKind::Ref) out.insert(e.ref.addr);
    if (e.kind == AstKind::Range) {
      for (auto r = e.ref.addr.row; r <= e.ref_end.addr.row; ++r)
        for (auto c = e.ref.addr.column; c <= e.ref_end.addr.column; ++c) out.insert(CellAddress{c, r});
    }
    for (const auto& a : e.args) walk(a);
  };
  walk(n);
  return out;
}

inline std::size_t brute_force_edge_count(const Workbook& wb) {
  std::size_t n = 0;
  for (const auto& [addr, content] : wb)
    if (const auto* f = std::get_if<Formula>(&content)) n += brute_force_refs(*f->ast).size();
  return n;
}

// Dependents per cell, by scanning every formula.
inline std::map<CellAddress, std::size_t> brute_force_dependents(const Workbook& wb) {
  std::map<CellAddress, std::size_t> out;
  for (const auto& [addr, content] : wb)
    if (const auto* f = std::get_if<Formula>(&content))
      for (CellAddress p : brute_force_refs(*f->ast)) ++out[p];
  return out;
}

// Three-colour DFS over formula references.
inline bool brute_force_has_cycle(const Workbook& wb) {
  std::map<CellAddress, int> colour;
  std::function<bool(CellAddress)> visit = [&](CellAddress a) {
    int& c = colour[a];
    if (c == 1) return true;
    if (c == 2) return false;
    c = 1;
    if (const auto* f = wb.formula_at(a))
      for (CellAddress p : brute_force_refs(*f->ast))
        if (visit(p)) return true;
    colour[a] = 2;
    return false;
  };
  for (const auto& [addr, _] : wb)
    if (visit(addr)) return true;
  return false;
}

// Violations of the module-graph invariants; empty when all hold.
inline std::vector<std::string> module_invariant_violations(const ModuleGraph& mg, const DependencyGraph& g,
                                                            const CellClassification& cls) {
  std::vector<std::string> bad;
  std::map<CellAddress, int> calculated_seen;
  std::map<CellAddress, int> refs_to;
  std::map<int, std::set<int>> ref_edges;
  std::map<CellAddress, int> root_id;
  for (const auto& m : mg.modules) root_id[*m.root->source] = m.id;

  for (const auto& m : mg.modules) {
    std::set<const ChartNode*> visited;
    std::function<void(const ChartNode&, bool)> walk = [&](const ChartNode& n, bool is_root) {
      if (!visited.insert(&n).second) bad.push_back("node visited twice in " + m.name);
      if (n.kind == ChartKind::ModuleRef) {
        if (!n.children.empty() || !n.condition.empty()) bad.push_back("ModuleRef with children");
        ++refs_to[*n.source];
        if (!root_id.count(*n.source)) bad.push_back("ModuleRef to a non-root");
        else ref_edges[m.id].insert(root_id[*n.source]);
        return;
      }
      if (n.kind == ChartKind::InputLeaf) {
        if (!n.children.empty()) bad.push_back("InputLeaf with children");
        return;
      }
      if (n.kind == ChartKind::Selection && n.children.size() != 2) bad.push_back("Selection without 2 branches");
      if (n.kind == ChartKind::Repetition && n.children.empty()) bad.push_back("empty Repetition");
      if (n.source) {
        ++calculated_seen[*n.source];
        if (!is_root && root_id.count(*n.source)) bad.push_back("module root inlined in " + m.name);
      }
      for (const auto& c : n.condition) walk(*c, false);
      for (const auto& c : n.children) walk(*c, false);
    };
    walk(*m.root, true);
  }
  for (CellAddress c : cls.calculated) {
    if (calculated_seen[c] != 1)
      bad.push_back(address_to_a1(c) + " appears " + std::to_string(calculated_seen[c]) + " times");
    const bool shared = g.dependent_count(c) >= 2;
    const bool extracted = root_id.count(c) && refs_to[c] >= 2;
    if (shared != extracted) bad.push_back(address_to_a1(c) + " shared/extracted mismatch");
  }
  std::set<std::pair<int, int>> expected_edges;
  for (const auto& [from, tos] : ref_edges)
    for (int to : tos) expected_edges.emplace(from, to);
  if (expected_edges != mg.edges) bad.push_back("module edges differ from ModuleRefs");
  for (const auto& [from, to] : mg.edges)
    if (from <= to) bad.push_back("module edge not topological");

  std::map<CellAddress, int> input_seen;
  for (const auto& im : mg.input_modules) {
    std::set<CellAddress> members(im.cells.begin(), im.cells.end());
    for (CellAddress c : im.cells) {
      ++input_seen[c];
      if (cls.calculated.count(c)) bad.push_back("formula in input module " + im.name);
      for (CellAddress p : g.precedents(c))
        if (members.count(p)) bad.push_back("edge inside input module " + im.name);
    }
  }
  for (CellAddress c : cls.inputs)
    if (input_seen[c] != 1) bad.push_back("input " + address_to_a1(c) + " in " + std::to_string(input_seen[c]) + " modules");
  return bad;
}

// Kahn ordering with uniformly random choice among ready cells.
inline std::vector<CellAddress> random_topological_order(const DependencyGraph& g, std::mt19937_64& rng) {
  std::map<CellAddress, std::size_t> indegree;
  for (CellAddress n : g.nodes) indegree[n] = g.precedents(n).size();
  std::vector<CellAddress> ready;
  for (const auto& [n, d] : indegree)
    if (d == 0) ready.push_back(n);
  std::vector<CellAddress> order;
  while (!ready.empty()) {
    const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, ready.size() - 1)(rng);
    std::swap(ready[pick], ready.back());
    const CellAddress n = ready.back();
    ready.pop_back();
    order.push_back(n);
    for (CellAddress d : g.dependents(n))
      if (--indegree[d] == 0) ready.push_back(d);
  }
  return order;
}

inline std::set<CellAddress> module_roots(const ModuleGraph& mg) {
  std::set<CellAddress> out;
  for (const auto& m : mg.modules) out.insert(*m.root->source);
  return out;
}

}  // namespace testing_support
