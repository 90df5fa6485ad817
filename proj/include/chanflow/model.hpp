// Core problem model: networks, demands, expanded demand instances, solutions.
// Vertices are 1-based. Line mode is represented internally as path networks
// where timeslot t is the edge (t, t+1).
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chanflow/rational.hpp"

namespace chanflow {

enum class Mode { tree, line };

// Canonical edge key: network id plus sorted endpoints.
struct EdgeRef {
  int net{0};
  int u{0};  // u < v
  int v{0};
  auto operator<=>(const EdgeRef&) const = default;
};

struct TreeNetwork {
  int id{0};
  int n{0};
  std::vector<std::pair<int, int>> edges;       // canonical (u < v), sorted
  std::vector<std::vector<int>> adj;            // 1-based, neighbor lists sorted
  std::map<std::pair<int, int>, int> edge_idx;  // canonical pair -> local index

  // builds adj/edge_idx from edges; edges get canonicalized and sorted
  void finalize();
  bool has_vertex(int x) const { return x >= 1 && x <= n; }
  int local_edge(int a, int b) const;  // -1 if absent
};

struct Processor {
  int id{0};
  std::vector<int> access;  // network ids, sorted
};

struct Demand {
  int id{0};
  int owner{0};  // processor id
  // tree mode endpoints
  int u{0}, v{0};
  // line mode window: release, deadline, length (timeslots)
  int rt{0}, dl{0}, rho{0};
  Rat profit;
  Rat height;
};

struct ProblemInstance {
  Mode mode{Mode::tree};
  int n{0};
  std::vector<TreeNetwork> networks;
  std::vector<Processor> processors;
  std::vector<Demand> demands;

  // derived lookups, built by finalize()
  std::map<int, int> net_index;     // network id -> index
  std::map<int, int> proc_index;    // processor id -> index
  std::map<int, int> demand_index;  // demand id -> index
  std::vector<int> edge_offset;     // per network index, prefix of local edge counts
  int total_edges{0};

  void finalize();
  int global_edge(int net_idx, int local_idx) const { return edge_offset[net_idx] + local_idx; }
  // validation problems, empty if the instance is well formed
  std::vector<std::string> validate() const;
};

// One concrete placement of a demand: a network choice (tree mode) or a
// network + start slot (line mode). Identified by dense ids 0..count-1.
struct DemandInstance {
  int id{0};
  int demand_id{0};
  int demand_idx{0};
  int owner{0};     // processor id
  int net_id{0};
  int net_idx{0};
  int u{0}, v{0};   // path endpoints in the network
  int start{0}, end{0};  // line mode timeslots, 0 for tree mode
  Rat profit;
  Rat height;
  std::vector<std::pair<int, int>> path_pairs;  // walk order from u to v
  std::vector<int> edges_global;                // sorted global edge indices
  std::vector<uint64_t> mask;                   // bitmask over global edges
};

struct Solution {
  std::vector<int> chosen;  // instance ids, sorted
  Rat profit{0};
};

// Edge list of the unique u..v path, in walk order as (from, to) steps.
// Throws std::invalid_argument for unknown vertices or u == v.
std::vector<std::pair<int, int>> tree_path(const TreeNetwork& net, int u, int v);

// All instances of all demands: tree mode one per accessible network, line
// mode one per accessible resource and feasible start slot. Deterministic
// order: by demand as listed, then network id, then start.
std::vector<DemandInstance> expand_demand_instances(const ProblemInstance& inst);

bool overlapping(const DemandInstance& a, const DemandInstance& b);
bool conflicting(const DemandInstance& a, const DemandInstance& b);

enum class FeasMode { disjoint, capacity };

struct FeasViolation {
  enum class Kind { duplicate_demand, edge_conflict, capacity_exceeded, unknown_instance };
  Kind kind;
  int demand_id{0};
  int instance_a{-1}, instance_b{-1};
  EdgeRef edge{};
  std::string describe() const;
};

// Checks one-instance-per-demand plus per-edge feasibility (disjoint: no two
// chosen instances share an edge; capacity: height sums <= 1 per edge).
// Returns the first violation found, nullopt if feasible.
std::optional<FeasViolation> check_feasible(const ProblemInstance& inst,
                                            const std::vector<DemandInstance>& instances,
                                            const std::vector<int>& chosen, FeasMode mode);

Rat solution_profit(const std::vector<DemandInstance>& instances, const std::vector<int>& chosen);

// EdgeRef for a global edge index
EdgeRef edge_ref_of(const ProblemInstance& inst, int global_idx);

bool masks_intersect(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b);

}  // namespace chanflow
