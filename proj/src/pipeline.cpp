#include "structsheet/pipeline.hpp"

#include "structsheet/errors.hpp"

namespace structsheet {

RestructureResult restructure(const Workbook& wb, const RestructureOptions& options) {
  RestructureResult r;
  r.source = options.empty_as_zero ? materialize_empty_references(wb) : wb;
  r.graph = build_graph(r.source, false);
  if (auto cycles = find_cycles(r.graph); !cycles.empty()) {
    std::vector<CellAddress> cells;
    for (const auto& c : cycles) cells.insert(cells.end(), c.begin(), c.end());
    throw CycleError(std::move(cells));
  }
  r.classification = classify(r.source, r.graph);
  r.charts = options.processing_order ? derive_chart(r.source, r.graph, *options.processing_order)
                                      : derive_chart(r.source, r.graph);
  r.modules = modularize(r.charts, r.graph, r.classification, options.grouping);
  for (const auto& m : r.modules.modules) r.layouts.push_back(emit_layout(m));
  r.placed = place_and_rewrite(r.layouts, r.modules.input_modules, r.source);
  r.placed.warnings.insert(r.placed.warnings.begin(), r.modules.warnings.begin(), r.modules.warnings.end());
  r.discrepancies = value_diff(evaluate(r.source), evaluate(r.placed.workbook), r.placed.origin_map);
  return r;
}

}  // namespace structsheet
