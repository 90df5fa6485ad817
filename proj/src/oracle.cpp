#include "chanflow/oracle.hpp"

#include <algorithm>
#include <sstream>

namespace chanflow {

namespace {

struct Search {
  const ProblemInstance& inst;
  const std::vector<DemandInstance>& xs;
  FeasMode fmode;
  std::vector<Rat> used;
  std::vector<char> edge_taken;
  std::vector<char> demand_taken;
  std::vector<Rat> suffix;  // profit of instances i..end
  std::vector<int> cur;
  OracleResult best;

  bool fits(const DemandInstance& di) const {
    if (demand_taken[di.demand_idx]) return false;
    for (int e : di.edges_global)
      if (fmode == FeasMode::disjoint ? edge_taken[e] != 0 : used[e] + di.height > 1)
        return false;
    return true;
  }

  void place(const DemandInstance& di, int dir) {
    demand_taken[di.demand_idx] = dir > 0;
    for (int e : di.edges_global) {
      used[e] += dir * di.height;
      edge_taken[e] = dir > 0;
    }
  }

  void dfs(size_t i, Rat got) {
    ++best.nodes;
    if (i == xs.size()) {
      if (got > best.optimum) {
        best.optimum = got;
        best.chosen = cur;
      }
      return;
    }
    if (got + suffix[i] <= best.optimum) return;  // cannot strictly improve
    const DemandInstance& di = xs[i];
    if (fits(di)) {
      place(di, +1);
      cur.push_back(di.id);
      dfs(i + 1, got + di.profit);
      cur.pop_back();
      place(di, -1);
    }
    dfs(i + 1, got);
  }
};

}  // namespace

OracleResult exact_optimum(const ProblemInstance& inst,
                           const std::vector<DemandInstance>& instances, FeasMode fmode,
                           int cap) {
  if (static_cast<int>(instances.size()) > cap) {
    std::ostringstream os;
    os << "exact_optimum: " << instances.size() << " instances exceed cap " << cap;
    throw OracleCapExceeded(os.str());
  }
  Search s{inst, instances, fmode, {}, {}, {}, {}, {}, {}};
  s.used.assign(inst.total_edges, Rat(0));
  s.edge_taken.assign(inst.total_edges, 0);
  s.demand_taken.assign(inst.demands.size(), 0);
  s.suffix.assign(instances.size() + 1, Rat(0));
  for (size_t i = instances.size(); i-- > 0;)
    s.suffix[i] = s.suffix[i + 1] + instances[i].profit;
  s.best.optimum = 0;
  s.dfs(0, Rat(0));
  std::sort(s.best.chosen.begin(), s.best.chosen.end());
  return s.best;
}

std::optional<std::string> certify_ratio(const std::vector<DemandInstance>& instances,
                                         const std::vector<int>& chosen, const Rat& optimum,
                                         const Rat& bound) {
  Rat got = solution_profit(instances, chosen);
  if (got * bound >= optimum) return std::nullopt;
  std::ostringstream os;
  os << "ratio violated: p(S)=" << rat_str(got) << " * bound=" << rat_str(bound)
     << " < optimum=" << rat_str(optimum);
  return os.str();
}

std::optional<std::string> verify_weak_duality(const Rat& scaled_dual_objective,
                                               const Rat& optimum) {
  if (scaled_dual_objective >= optimum) return std::nullopt;
  std::ostringstream os;
  os << "weak duality violated: dual objective " << rat_str(scaled_dual_objective)
     << " < optimum " << rat_str(optimum);
  return os.str();
}

}  // namespace chanflow
