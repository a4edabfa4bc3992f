#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "structsheet/workbook.hpp"

namespace structsheet {

// Directed precedent -> dependent graph over value-bearing cells.
struct DependencyGraph {
  std::set<CellAddress> nodes;
  std::set<std::pair<CellAddress, CellAddress>> edges;
  // Empty cells standing in for Number(0) (empty-as-zero mode only).
  std::set<CellAddress> implicit_zeros;
  // Adjacency views of edges. precedents_of keeps precedents() order;
  // dependents_of is row-major.
  std::map<CellAddress, std::vector<CellAddress>> precedents_of;
  std::map<CellAddress, std::vector<CellAddress>> dependents_of;

  const std::vector<CellAddress>& precedents(CellAddress a) const;
  const std::vector<CellAddress>& dependents(CellAddress a) const;
  std::size_t dependent_count(CellAddress a) const { return dependents(a).size(); }
};

struct CellClassification {
  std::set<CellAddress> inputs;
  std::set<CellAddress> calculated;
  std::set<CellAddress> labels;
};

struct ReplicationClass {
  std::string normal_form;
  std::vector<CellAddress> members;
};

// Throws ReferenceError for references to Label cells, and to Empty cells
// unless empty_as_zero is set.
DependencyGraph build_graph(const Workbook& wb, bool empty_as_zero = false);

CellClassification classify(const Workbook& wb, const DependencyGraph& g);

// Calculated cells with no dependents, row-major.
std::vector<CellAddress> terminal_cells(const CellClassification& cls, const DependencyGraph& g);
// Calculated cells with two or more dependents, row-major.
std::vector<CellAddress> shared_cells(const CellClassification& cls, const DependencyGraph& g);

// One entry per strongly connected component of size >= 2 and per
// self-loop. Entries are ordered by their minimal address; each starts at
// its minimal address and lists the component in depth-first order along
// dependent edges.
std::vector<std::vector<CellAddress>> find_cycles(const DependencyGraph& g);

// Kahn ordering, smallest ready address first. nullopt when g is cyclic.
std::optional<std::vector<CellAddress>> topological_order(const DependencyGraph& g);

std::vector<ReplicationClass> replication_classes(const Workbook& wb);

// Copy of wb with Number(0) written into every empty cell a formula reads.
Workbook materialize_empty_references(const Workbook& wb);

}  // namespace structsheet
