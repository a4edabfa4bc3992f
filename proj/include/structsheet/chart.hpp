#pragma once

#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "structsheet/dependency.hpp"
#include "structsheet/workbook.hpp"

namespace structsheet {

enum class ChartKind { Sequence, Repetition, Selection, InputLeaf, ModuleRef };

std::string_view chart_kind_name(ChartKind k);

struct ChartNode;
using ChartPtr = std::shared_ptr<const ChartNode>;

// Jackson structure chart node.
//
// Charts produced by derive_chart share the node of a cell among all of its
// dependents, so they form a DAG. Module bodies produced by modularize are
// trees of distinct nodes.
struct ChartNode {
  ChartKind kind = ChartKind::Sequence;
  std::string label;
  // Absent for grouping nodes synthesized from a sub-expression.
  std::optional<CellAddress> source;
  // Selection: the condition text, e.g. "(A1>0)".
  std::optional<std::string> annotation;
  // Selection: exactly two branches.
  std::vector<ChartPtr> children;
  // Selection: nodes feeding the condition, laid out ahead of the branches.
  std::vector<ChartPtr> condition;
  // Sequence/Repetition/Selection: the expression this node computes. It
  // aliases a node inside the cell's AST, so a synthesized child is
  // identified by pointer equality with the sub-expression it replaces.
  std::shared_ptr<const FormulaAst> expr;
  // InputLeaf: the literal value.
  double value = 0.0;

  bool synthesized() const { return !source.has_value(); }
};

// One rooted chart per terminal cell, in row-major order of the terminals.
// Throws CycleError if g is cyclic.
std::vector<ChartPtr> derive_chart(const Workbook& wb, const DependencyGraph& g);

// As above, building cell nodes in the given order. The charts do not
// depend on the order.
std::vector<ChartPtr> derive_chart(const Workbook& wb, const DependencyGraph& g,
                                   std::span<const CellAddress> processing_order);

// Label rule: nearest Label to the left in the same row, else CALC_<A1>.
std::string cell_label(const Workbook& wb, CellAddress cell);

struct ModuleTree {
  int id = 0;
  ChartPtr root;
  std::string name;
};

struct InputModule {
  std::string name;
  std::vector<CellAddress> cells;
};

enum class InputGrouping { Single, PerConsumer };

struct ModuleGraph {
  // Ordered by id; ids are 1-based and topological (dependencies first).
  std::vector<ModuleTree> modules;
  std::vector<InputModule> input_modules;
  // (user, used): the first module's body holds a ModuleRef to the second.
  std::set<std::pair<int, int>> edges;
  std::vector<std::string> warnings;

  const ModuleTree* find(int id) const;
  const ModuleTree* find(const std::string& name) const;
};

// Cuts the charts at every calculated cell with two or more dependents.
// Each such cell and each terminal roots one module; every use site of a
// shared cell becomes a ModuleRef leaf.
ModuleGraph modularize(std::span<const ChartPtr> charts, const DependencyGraph& g,
                       const CellClassification& classification,
                       InputGrouping grouping = InputGrouping::Single);

// Single: one "INPUTS" module with every input, row-major.
// PerConsumer: "INPUTS_<module>" per calculation module that reads an input
// not already claimed by an earlier module; unread inputs go to "INPUTS".
std::vector<InputModule> assign_input_modules(const CellClassification& classification, InputGrouping grouping,
                                              std::span<const ModuleTree> modules);

// Input cells read by a module body, row-major.
std::set<CellAddress> input_cells_of(const ModuleTree& m);

// Letters and digits kept; inner runs of other characters become one '_',
// leading and trailing ones are dropped. Empty results become "MODULE".
std::string sanitize_module_name(std::string_view label);

}  // namespace structsheet
