#pragma once

#include <optional>
#include <vector>

#include "structsheet/chart.hpp"
#include "structsheet/dependency.hpp"
#include "structsheet/evaluator.hpp"
#include "structsheet/layout.hpp"

namespace structsheet {

struct RestructureOptions {
  InputGrouping grouping = InputGrouping::Single;
  bool empty_as_zero = false;
  // Order in which chart nodes are built; defaults to topological order.
  std::optional<std::vector<CellAddress>> processing_order;
};

struct RestructureResult {
  // The input after empty-as-zero materialization, if requested.
  Workbook source;
  DependencyGraph graph;
  CellClassification classification;
  std::vector<ChartPtr> charts;
  ModuleGraph modules;
  std::vector<StructuredLayout> layouts;
  PlacedWorkbook placed;
  // Non-empty means restructuring changed a value.
  std::vector<ValueDiscrepancy> discrepancies;
};

// Full pipeline: graph, cycle rejection, charts, modules, layouts, placement
// and the evaluation cross-check. Throws CycleError on cyclic input.
RestructureResult restructure(const Workbook& wb, const RestructureOptions& options = {});

}  // namespace structsheet
