// Layered decompositions: group demand instances by capture depth (trees) or
// by length class (lines) and attach to each instance a small critical edge
// set pi(d). The interference property ties the two together: whenever d2
// overlaps an instance d1 of an earlier or equal group, the path of d2 meets
// pi(d1). Group 0 is processed first (deepest captures / shortest lengths).
#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "chanflow/decomposition.hpp"
#include "chanflow/model.hpp"

namespace chanflow {

struct LayeredDecomposition {
  int net_id{0};  // 0 when the groups span all resources (line mode)
  int levels{0};
  int delta{0};           // declared critical-set size bound, drives xi
  int delta_measured{0};  // largest |pi(d)| actually seen
  std::vector<std::vector<int>> groups;      // instance ids per group, sorted
  std::map<int, std::vector<int>> critical;  // instance id -> sorted global edges
  std::map<int, int> capture;                // instance id -> capture vertex (trees)
};

// Least-depth vertex of the instance's path in H. Throws std::logic_error if
// the minimum is not unique (legal decompositions make it unique).
int capture_node(const RootedDecomposition& dec, const DemandInstance& di);

// The unique path(d) vertex whose walk from u avoids the rest of the path,
// i.e. the path vertex nearest to u.
int bending_point(const TreeNetwork& net, const DemandInstance& di, int u);

// The one or two path edges incident to y, canonicalized. Throws
// std::invalid_argument if y is not on the path.
std::vector<std::pair<int, int>> wings(const DemandInstance& di, int y);

// Tree layering: groups by capture depth, deepest first; pi(d) = wings of the
// capture node plus wings of the bending points toward each of its pivots.
LayeredDecomposition layer_from_decomposition(const ProblemInstance& inst,
                                              const TreeNetwork& net,
                                              const RootedDecomposition& dec,
                                              const std::vector<DemandInstance>& instances);

// Line layering: groups by half-open length classes [2^k Lmin, 2^{k+1} Lmin),
// shortest first; pi(d) = timeslots {start, mid, end}.
LayeredDecomposition layer_line_by_length(const ProblemInstance& inst,
                                          const std::vector<DemandInstance>& instances);

struct InterferencePair {
  int d1{-1}, d2{-1};
};

// Exhaustive check over ordered overlapping pairs with group(d1) <= group(d2):
// path(d2) must meet pi(d1). Returns the first violating pair.
std::optional<InterferencePair> check_interference(const LayeredDecomposition& lay,
                                                   const std::vector<DemandInstance>& instances);

}  // namespace chanflow
