#include "chanflow/primal_dual.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "chanflow/decomposition.hpp"
#include "chanflow/layering.hpp"

namespace chanflow {

Rat DualState::objective() const {
  Rat o = 0;
  for (const Rat& a : alpha) o += a;
  for (const Rat& b : beta) o += b;
  return o;
}

namespace {

int stages_for(const Rat& xi, const Rat& eps) {
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("eps must be in (0,1)");
  Rat pow = 1;
  int b = 0;
  while (pow > eps) {
    pow *= xi;
    ++b;
  }
  return b;
}

long long cap_for(const Rat& pmax, const Rat& pmin, int c_steps) {
  if (pmax < pmin || pmin <= 0) throw std::invalid_argument("bad profit range");
  return static_cast<long long>(c_steps) * (1 + ceil_log2_ratio(pmax / pmin));
}

}  // namespace

AlgoParams make_unit_params(int delta, const Rat& eps, const Rat& pmax, const Rat& pmin,
                            int c_steps) {
  AlgoParams p;
  p.eps = eps;
  p.mode = RaiseMode::unit;
  p.delta = delta;
  p.xi = make_rat(2 * (delta + 1), 2 * (delta + 1) + 1);
  p.b = stages_for(p.xi, eps);
  p.step_cap = cap_for(pmax, pmin, c_steps);
  return p;
}

AlgoParams make_narrow_params(int delta, const Rat& eps, const Rat& h_min, const Rat& pmax,
                              const Rat& pmin, long long c, int c_steps) {
  if (h_min <= 0 || h_min > make_rat(1, 2))
    throw std::invalid_argument("h_min must be in (0, 1/2]");
  AlgoParams p;
  p.eps = eps;
  p.mode = RaiseMode::height;
  p.delta = delta;
  p.h_min = h_min;
  if (c == 0) c = 2 * (1 + 2LL * delta * delta);
  p.xi = Rat(c) / (Rat(c) + h_min);
  p.b = stages_for(p.xi, eps);
  p.step_cap = cap_for(pmax, pmin, c_steps);
  return p;
}

Rat slackness(const DemandInstance& di, const DualState& duals, RaiseMode mode) {
  Rat load = 0;
  for (int e : di.edges_global) load += duals.beta[e];
  if (mode == RaiseMode::height) load *= di.height;
  return di.profit - duals.alpha[di.demand_idx] - load;
}

bool xi_satisfied(const DemandInstance& di, const DualState& duals, const Rat& level,
                  RaiseMode mode) {
  return slackness(di, duals, mode) <= (Rat(1) - level) * di.profit;
}

RaiseRecord raise_unit(const DemandInstance& di, const std::vector<int>& pi, DualState& duals) {
  Rat s = slackness(di, duals, RaiseMode::unit);
  if (s <= 0) throw std::logic_error("raise_unit: instance already satisfied");
  RaiseRecord rec;
  rec.instance_id = di.id;
  rec.pi = pi;
  rec.delta = s / Rat(static_cast<long long>(pi.size()) + 1);
  duals.alpha[di.demand_idx] += rec.delta;
  for (int e : pi) duals.beta[e] += rec.delta;
  return rec;
}

RaiseRecord raise_height(const DemandInstance& di, const std::vector<int>& pi, DualState& duals) {
  if (di.height > make_rat(1, 2))
    throw std::invalid_argument("raise_height: wide instance needs the unit machinery");
  Rat s = slackness(di, duals, RaiseMode::height);
  if (s <= 0) throw std::logic_error("raise_height: instance already satisfied");
  RaiseRecord rec;
  rec.instance_id = di.id;
  rec.pi = pi;
  long long k = static_cast<long long>(pi.size());
  rec.delta = s / (Rat(1) + 2 * di.height * k * k);
  duals.alpha[di.demand_idx] += rec.delta;
  Rat bump = 2 * k * rec.delta;
  for (int e : pi) duals.beta[e] += bump;
  return rec;
}

Solution second_phase(const ProblemInstance& inst, const std::vector<DemandInstance>& instances,
                      const std::vector<StackEntry>& stack, FeasMode fmode) {
  Solution sol;
  std::vector<Rat> used(inst.total_edges, Rat(0));
  std::vector<char> edge_taken(inst.total_edges, 0);
  std::vector<char> demand_taken(inst.demands.size() + 1, 0);
  auto fits = [&](const DemandInstance& di) {
    if (demand_taken[di.demand_idx]) return false;
    for (int e : di.edges_global) {
      if (fmode == FeasMode::disjoint ? edge_taken[e] != 0 : used[e] + di.height > 1)
        return false;
    }
    return true;
  };
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
    std::vector<int> ids = it->set;
    std::sort(ids.begin(), ids.end());
    for (int id : ids) {
      const DemandInstance& di = instances[id];
      if (!fits(di)) continue;
      demand_taken[di.demand_idx] = 1;
      for (int e : di.edges_global) {
        used[e] += di.height;
        edge_taken[e] = 1;
      }
      sol.chosen.push_back(id);
      sol.profit += di.profit;
    }
  }
  std::sort(sol.chosen.begin(), sol.chosen.end());
  return sol;
}

DualCheck scale_and_check_dual(const std::vector<DemandInstance>& instances,
                               const DualState& duals, const Rat& lambda, RaiseMode mode) {
  if (lambda <= 0 || lambda > 1) throw std::invalid_argument("lambda must be in (0,1]");
  DualCheck out;
  out.objective = duals.objective();
  for (const DemandInstance& di : instances)
    if (!xi_satisfied(di, duals, lambda, mode)) {
      out.violator = di.id;
      break;
    }
  return out;
}

SeqResult sequential_tree_solve(const ProblemInstance& inst,
                                const std::vector<DemandInstance>& instances, bool single_tree) {
  for (const Demand& d : inst.demands)
    if (d.height != 1)
      throw std::invalid_argument("sequential_tree_solve: unit heights only");
  if (single_tree && inst.networks.size() != 1)
    throw std::invalid_argument("sequential_tree_solve: single-tree variant needs one network");
  SeqResult res;
  res.duals.init(inst);
  int tick = 0;
  for (auto [net_id, nidx] : inst.net_index) {
    (void)net_id;
    const TreeNetwork& net = inst.networks[nidx];
    RootedDecomposition dec = build_root_fixing(net, 1);
    // instances of this network, deepest capture first, ids break ties
    std::vector<std::pair<int, int>> order;  // (-depth of capture, id)
    std::vector<int> mu_of(instances.size(), 0);
    for (const DemandInstance& di : instances) {
      if (di.net_id != net.id) continue;
      int mu = capture_node(dec, di);
      mu_of[di.id] = mu;
      order.emplace_back(-dec.depth[mu], di.id);
    }
    std::sort(order.begin(), order.end());
    int net_idx = inst.net_index.at(net.id);
    for (auto [negd, id] : order) {
      (void)negd;
      const DemandInstance& di = instances[id];
      Rat s = slackness(di, res.duals, RaiseMode::unit);
      if (s <= 0) continue;
      std::vector<int> pi;
      for (auto [a, b] : wings(di, mu_of[id]))
        pi.push_back(inst.global_edge(net_idx, net.local_edge(a, b)));
      std::sort(pi.begin(), pi.end());
      RaiseRecord rec;
      if (single_tree) {
        // alpha stays zero; beta alone absorbs the slack
        rec.instance_id = id;
        rec.pi = pi;
        rec.delta = s / Rat(static_cast<long long>(pi.size()));
        for (int e : pi) res.duals.beta[e] += rec.delta;
      } else {
        rec = raise_unit(di, pi, res.duals);
      }
      rec.f3 = ++tick;
      res.records.push_back(rec);
      res.stack.push_back(StackEntry{{id}, rec.f1, rec.f2, rec.f3});
    }
  }
  res.sol = second_phase(inst, instances, res.stack, FeasMode::disjoint);
  return res;
}

}  // namespace chanflow
