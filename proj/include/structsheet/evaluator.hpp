#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "structsheet/workbook.hpp"

namespace structsheet {

// Values of every input and calculated cell.
using ValueMap = std::map<CellAddress, double>;

// Topological evaluation. IF takes its first branch when the condition is
// non-zero; comparisons yield 1 or 0. Throws CycleError, ReferenceError, or
// EvalError (division by zero).
ValueMap evaluate(const Workbook& wb);

// Evaluates in the given order, which must list every value-bearing cell
// with precedents before dependents. Throws Error when it does not.
ValueMap evaluate_in_order(const Workbook& wb, std::span<const CellAddress> order);

struct ValueDiscrepancy {
  CellAddress address;
  double value_a = 0;
  double value_b = 0;
};

// Entries where |a - b| > 1e-9 * max(1, |a|), ordered by address in a.
// Throws UnmappedAddressError when a mapping end is missing from its map.
std::vector<ValueDiscrepancy> value_diff(const ValueMap& a, const ValueMap& b,
                                         const std::map<CellAddress, CellAddress>& mapping);

// Up to 15 significant digits; integral values print without a point.
std::string format_value(double v);

}  // namespace structsheet
