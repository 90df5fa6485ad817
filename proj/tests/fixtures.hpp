// Shared hand-built networks and instance builders for the test suite.
#pragma once

#include <vector>

#include "chanflow/model.hpp"

namespace chanflow::testing {

// 14-vertex tree whose balancing and ideal decompositions coincide: root 1,
// with 5 covering {5,9,8,2,12,13,4} and 2 covering {2,4}. The (4,13) demand
// runs 4-2-5-8-13.
inline TreeNetwork wide_tree(int id = 1) {
  TreeNetwork net;
  net.id = id;
  net.n = 14;
  net.edges = {{1, 2}, {1, 3}, {2, 4}, {2, 5}, {5, 8}, {5, 9}, {8, 13},
               {9, 12}, {3, 6}, {3, 7}, {6, 10}, {6, 11}, {7, 14}};
  net.finalize();
  return net;
}

// 13-vertex tree where the paths (1,10), (2,3) and (12,13) all share exactly
// the edge (4,5); used for overlap/feasibility cases.
inline TreeNetwork shared_edge_tree(int id = 1) {
  TreeNetwork net;
  net.id = id;
  net.n = 13;
  net.edges = {{1, 4}, {2, 4}, {12, 4}, {4, 5}, {5, 10}, {5, 3}, {5, 13},
               {5, 6}, {6, 7}, {6, 8}, {4, 9}, {9, 11}};
  net.finalize();
  return net;
}

struct DemandSpec {
  int u, v;
  long long profit_num{1}, height_num{1}, denom{1};
  std::vector<int> access;  // network ids; defaults to all
};

// Tree-mode instance over the given networks, one processor per demand.
// Ids are 1-based in listing order.
inline ProblemInstance make_tree_instance(std::vector<TreeNetwork> nets,
                                          const std::vector<DemandSpec>& specs) {
  ProblemInstance inst;
  inst.mode = Mode::tree;
  inst.n = nets.front().n;
  inst.networks = std::move(nets);
  for (int i = 0; i < static_cast<int>(specs.size()); ++i) {
    const DemandSpec& s = specs[i];
    Processor p;
    p.id = i + 1;
    if (s.access.empty())
      for (const TreeNetwork& net : inst.networks) p.access.push_back(net.id);
    else
      p.access = s.access;
    inst.processors.push_back(p);
    Demand d;
    d.id = i + 1;
    d.owner = i + 1;
    d.u = s.u;
    d.v = s.v;
    d.profit = make_rat(s.profit_num, s.denom);
    d.height = make_rat(s.height_num, s.denom);
    inst.demands.push_back(d);
  }
  inst.finalize();
  return inst;
}

struct LineDemandSpec {
  int rt, dl, rho;
  long long profit_num{1}, height_num{1}, denom{1};
  std::vector<int> access;
};

// Line-mode instance with the given number of timeslots (so n = slots + 1).
inline ProblemInstance make_line_instance(int slots, int resources,
                                          const std::vector<LineDemandSpec>& specs) {
  ProblemInstance inst;
  inst.mode = Mode::line;
  inst.n = slots + 1;
  for (int q = 1; q <= resources; ++q) {
    TreeNetwork net;
    net.id = q;
    net.n = inst.n;
    for (int t = 1; t < inst.n; ++t) net.edges.emplace_back(t, t + 1);
    inst.networks.push_back(std::move(net));
  }
  for (int i = 0; i < static_cast<int>(specs.size()); ++i) {
    const LineDemandSpec& s = specs[i];
    Processor p;
    p.id = i + 1;
    if (s.access.empty())
      for (const TreeNetwork& net : inst.networks) p.access.push_back(net.id);
    else
      p.access = s.access;
    inst.processors.push_back(p);
    Demand d;
    d.id = i + 1;
    d.owner = i + 1;
    d.rt = s.rt;
    d.dl = s.dl;
    d.rho = s.rho;
    d.profit = make_rat(s.profit_num, s.denom);
    d.height = make_rat(s.height_num, s.denom);
    inst.demands.push_back(d);
  }
  inst.finalize();
  return inst;
}

}  // namespace chanflow::testing
