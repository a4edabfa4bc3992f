#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "structsheet/chart.hpp"
#include "structsheet/workbook.hpp"

namespace structsheet {

// Formula text addressed as if the module's root row were sheet row 1 and
// each value sat in column 1 + depth.
struct RewrittenFormula {
  std::string text;
};

struct InputValue {
  double value = 0.0;
};

struct ModuleRefName {
  std::string name;
};

using ValueSource = std::variant<RewrittenFormula, InputValue, ModuleRefName>;

struct LayoutRow {
  std::string label;
  int depth = 1;
  ValueSource value_source;
  std::optional<CellAddress> origin;
};

struct StructuredLayout {
  std::string module_name;
  std::vector<LayoutRow> rows;
  int max_depth = 0;
};

// Pre-order rows, root first. Selection rows list the condition operands
// before the two branches.
StructuredLayout emit_layout(const ModuleTree& m);

struct PlacedWorkbook {
  Workbook workbook;
  // Original cell -> cell holding its value in the structured workbook.
  std::map<CellAddress, CellAddress> origin_map;
  std::vector<std::string> warnings;
};

// Label prefixes used in the comment column.
inline constexpr std::string_view kOriginTag = "origin:";
inline constexpr std::string_view kModuleTag = "module:";
inline constexpr std::string_view kInputTag = "input:";

// Stacks the calculation modules in the given order, then the input
// modules. Each module gets a header row and is followed by one blank row.
// Labels go in column 1 indented two spaces per level; values in column
// 1 + depth; the comment column sits right of the deepest value column.
// Input values and labels are read from original.
PlacedWorkbook place_and_rewrite(std::span<const StructuredLayout> layouts, std::span<const InputModule> input_modules,
                                 const Workbook& original);

// Graphviz digraph of the module overview: one node per calculation and
// input module, one edge per module reference and per input module feeding
// a calculation module.
std::string emit_overview_dot(const ModuleGraph& mg);

}  // namespace structsheet
