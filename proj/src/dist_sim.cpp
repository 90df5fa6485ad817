#include "chanflow/dist_sim.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace chanflow {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) { return splitmix64(h ^ v); }

[[noreturn]] void fail(const std::string& what) { throw std::logic_error(what); }

}  // namespace

long long Message::bits() const {
  // kind tag, tuple, sender, instance id
  long long b = 2 + 3 * 16 + 32 + 32;
  if (kind == Kind::raise) {
    b += bit_length(numerator(delta)) + bit_length(denominator(delta));
    b += 32ll * static_cast<long long>(pi.size());
  }
  return b;
}

std::vector<std::vector<int>> build_communication_graph(const ProblemInstance& inst) {
  size_t p = inst.processors.size();
  std::vector<std::vector<int>> adj(p);
  for (size_t i = 0; i < p; ++i) {
    for (size_t k = i + 1; k < p; ++k) {
      const auto& a = inst.processors[i].access;
      const auto& b = inst.processors[k].access;
      bool shared = false;
      size_t x = 0, y = 0;
      while (x < a.size() && y < b.size()) {
        if (a[x] == b[y]) {
          shared = true;
          break;
        }
        a[x] < b[y] ? ++x : ++y;
      }
      if (shared) {
        adj[i].push_back(static_cast<int>(k));
        adj[k].push_back(static_cast<int>(i));
      }
    }
  }
  return adj;
}

std::vector<std::vector<int>> build_conflict_graph(const std::vector<DemandInstance>& xs,
                                                   const std::vector<int>& active) {
  size_t v = active.size();
  std::vector<std::vector<int>> adj(v);
  for (size_t i = 0; i < v; ++i)
    for (size_t k = i + 1; k < v; ++k)
      if (conflicting(xs[active[i]], xs[active[k]])) {
        adj[i].push_back(static_cast<int>(k));
        adj[k].push_back(static_cast<int>(i));
      }
  return adj;
}

std::vector<int> luby_mis_core(
    const std::vector<std::vector<int>>& adj,
    const std::function<std::vector<std::uint64_t>(int, const std::vector<int>&)>& draw,
    int* rounds_out) {
  int n = static_cast<int>(adj.size());
  std::vector<char> alive(n, 1);
  std::vector<int> active(n);
  std::iota(active.begin(), active.end(), 0);
  std::vector<std::uint64_t> prio(n, 0);
  std::vector<int> out;
  int rounds = 0;
  while (!active.empty()) {
    ++rounds;
    std::vector<std::uint64_t> drawn = draw(rounds, active);
    for (size_t i = 0; i < active.size(); ++i) prio[active[i]] = drawn[i];
    std::vector<int> joined;
    for (int v : active) {
      bool win = true;
      for (int u : adj[v])
        if (alive[u] && std::make_pair(prio[u], u) < std::make_pair(prio[v], v)) {
          win = false;
          break;
        }
      if (win) joined.push_back(v);
    }
    for (int v : joined) {
      out.push_back(v);
      alive[v] = 0;
      for (int u : adj[v]) alive[u] = 0;
    }
    std::vector<int> next;
    for (int v : active)
      if (alive[v]) next.push_back(v);
    active.swap(next);
  }
  if (rounds_out) *rounds_out = rounds;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> luby_mis(const std::vector<std::vector<int>>& adj, std::mt19937_64& rng,
                          int* rounds_out) {
  auto draw = [&rng](int, const std::vector<int>& active) {
    std::vector<std::uint64_t> out(active.size());
    for (auto& x : out) x = rng();
    return out;
  };
  return luby_mis_core(adj, draw, rounds_out);
}

std::vector<LayeredDecomposition> make_layerings(const ProblemInstance& inst,
                                                 const std::vector<DemandInstance>& active) {
  std::vector<LayeredDecomposition> lays;
  if (inst.mode == Mode::line) {
    if (!active.empty()) lays.push_back(layer_line_by_length(inst, active));
    return lays;
  }
  for (const TreeNetwork& net : inst.networks) {
    bool touched = false;
    for (const DemandInstance& di : active) touched = touched || di.net_id == net.id;
    if (!touched) continue;
    RootedDecomposition dec = build_ideal(net);
    lays.push_back(layer_from_decomposition(inst, net, dec, active));
  }
  return lays;
}

AlgoParams derive_params(const std::vector<DemandInstance>& xs, const std::vector<int>& active,
                         const std::vector<LayeredDecomposition>& lays, const SimConfig& cfg) {
  if (active.empty()) throw std::invalid_argument("no active instances");
  int delta = 0;
  for (const LayeredDecomposition& lay : lays) delta = std::max(delta, lay.delta);
  Rat pmin = xs[active[0]].profit, pmax = pmin;
  for (int id : active) {
    pmin = std::min(pmin, xs[id].profit);
    pmax = std::max(pmax, xs[id].profit);
  }
  if (cfg.mode == RaiseMode::unit) return make_unit_params(delta, cfg.eps, pmax, pmin, cfg.c_steps);
  Rat h_min;
  if (cfg.h_min) {
    h_min = *cfg.h_min;
    for (int id : active)
      if (xs[id].height < h_min)
        throw std::invalid_argument("instance height below the configured floor");
  } else {
    h_min = make_rat(1, 2);
    for (int id : active) h_min = std::min(h_min, xs[id].height);
  }
  return make_narrow_params(delta, cfg.eps, h_min, pmax, pmin, cfg.c_narrow.value_or(0),
                            cfg.c_steps);
}

namespace {

// a priori payload bound: every dual value is a ratio whose denominator gains
// at most a factor D*(2 delta^2+2) per raise and whose numerator stays below
// pmax times the denominator; raises happen at most once per instance
long long declared_bound(const std::vector<DemandInstance>& xs, const std::vector<int>& active,
                         const AlgoParams& params) {
  BigInt den_lcm = 1;
  BigInt num_max = 1;
  for (int id : active) {
    den_lcm = boost::multiprecision::lcm(den_lcm, denominator(xs[id].profit));
    den_lcm = boost::multiprecision::lcm(den_lcm, denominator(xs[id].height));
    num_max = std::max(num_max, numerator(xs[id].profit));
  }
  long long d_bits = bit_length(den_lcm);
  long long p_bits = bit_length(num_max);
  long long r = static_cast<long long>(active.size());
  long long k_bits = ceil_log2_ratio(Rat(2 * params.delta * params.delta + 2));
  long long header = 2 + 3 * 16 + 32 + 32 + 32ll * params.delta;
  return header + p_bits + 2 * (d_bits + r * (d_bits + k_bits)) + 64;
}

struct Engine {
  const ProblemInstance& inst;
  const std::vector<DemandInstance>& xs;
  const std::vector<int>& active;
  const AlgoParams& params;
  const SimConfig& cfg;

  std::map<int, const std::vector<int>*> critical;  // instance id -> pi
  std::vector<int> epoch_of;                        // by instance id, -1 inactive
  std::vector<std::vector<int>> comm;               // processor index adjacency
  std::vector<ProcessorState> procs;
  std::vector<int> proc_of;  // instance id -> processor index
  DualState duals;
  std::vector<Rat> slack;  // by instance id, tracked incrementally
  std::vector<std::vector<int>> by_edge;    // global edge -> active ids through it
  std::vector<std::vector<int>> by_demand;  // demand index -> active ids
  std::vector<StackEntry> stack;
  std::vector<RaiseRecord> trace;
  RoundStats stats;
  int ell_max{0};

  void setup(const std::vector<LayeredDecomposition>& lays) {
    std::set<int> seen;
    for (const LayeredDecomposition& lay : lays) {
      ell_max = std::max(ell_max, lay.levels);
      for (const auto& [id, pi] : lay.critical) {
        if (!seen.insert(id).second) fail("instance appears in two layerings");
        critical[id] = &pi;
      }
    }
    epoch_of.assign(xs.size(), -1);
    for (const LayeredDecomposition& lay : lays)
      for (size_t g = 0; g < lay.groups.size(); ++g)
        for (int id : lay.groups[g]) epoch_of[id] = static_cast<int>(g);
    for (int id : active)
      if (epoch_of[id] < 0 || !critical.count(id)) fail("layerings do not cover the active set");

    comm = build_communication_graph(inst);
    procs.assign(inst.processors.size(), {});
    for (size_t i = 0; i < procs.size(); ++i) procs[i].id = inst.processors[i].id;
    proc_of.assign(xs.size(), -1);
    by_edge.assign(inst.total_edges, {});
    by_demand.assign(inst.demands.size(), {});
    for (int id : active) {
      const DemandInstance& di = xs[id];
      int pi_idx = inst.proc_index.at(di.owner);
      proc_of[id] = pi_idx;
      procs[pi_idx].owned.push_back(id);
      for (int e : di.edges_global) {
        procs[pi_idx].beta.emplace(e, Rat(0));
        by_edge[e].push_back(id);
      }
      by_demand[di.demand_idx].push_back(id);
    }
    duals.init(inst);
    slack.assign(xs.size(), Rat(0));
    for (int id : active) slack[id] = xs[id].profit;
  }

  Rat load_factor(const DemandInstance& di) {
    return params.mode == RaiseMode::unit ? Rat(1) : di.height;
  }

  // apply one raise to the global state and the slack cache
  RaiseRecord apply_raise(int id, int f1, int f2, int f3) {
    const DemandInstance& di = xs[id];
    const std::vector<int>& pi = *critical.at(id);
    RaiseRecord rec = params.mode == RaiseMode::unit ? raise_unit(di, pi, duals)
                                                     : raise_height(di, pi, duals);
    rec.f1 = f1;
    rec.f2 = f2;
    rec.f3 = f3;
    Rat bump = params.mode == RaiseMode::unit
                   ? rec.delta
                   : rec.delta * 2 * static_cast<long long>(pi.size());
    for (int e : pi)
      for (int other : by_edge[e]) slack[other] -= load_factor(xs[other]) * bump;
    for (int other : by_demand[di.demand_idx]) slack[other] -= rec.delta;
    if (slack[id] != 0) fail("raise left nonzero slack");
    return rec;
  }

  void check_views() {
    for (size_t p = 0; p < procs.size(); ++p) {
      for (int id : procs[p].owned)
        if (procs[p].alpha != duals.alpha[xs[id].demand_idx])
          fail("local alpha diverged from the global duals");
      for (const auto& [e, v] : procs[p].beta)
        if (v != duals.beta[e]) fail("local beta diverged from the global duals");
    }
  }

  void note_message(const Message& m) {
    ++stats.messages;
    stats.max_msg_bits = std::max(stats.max_msg_bits, m.bits());
  }

  DistResult run() {
    DistResult res;
    res.params = params;
    res.fmode = params.mode == RaiseMode::unit ? FeasMode::disjoint : FeasMode::capacity;
    long long declared = declared_bound(xs, active, params);
    stats.epochs = ell_max;
    stats.stages_per_epoch = params.b;

    Rat pow_final = 1;
    for (int j = 0; j < params.b; ++j) pow_final *= params.xi;

    std::vector<std::vector<int>> group(ell_max);
    for (int id : active) group[epoch_of[id]].push_back(id);
    for (auto& g : group) std::sort(g.begin(), g.end());

    for (int k = 1; k <= ell_max; ++k) {
      const std::vector<int>& gk = group[k - 1];
      Rat pow = 1;
      for (int j = 1; j <= params.b; ++j) {
        pow *= params.xi;
        // once everything already clears the final stage threshold, no later
        // stage of this epoch can have a nonempty U
        bool done = true;
        for (int id : gk) done = done && slack[id] <= pow_final * xs[id].profit;
        if (done) break;
        long long step = 0;
        while (true) {
          std::vector<int> u;
          for (int id : gk)
            if (slack[id] > pow * xs[id].profit) u.push_back(id);
          if (u.empty()) break;
          ++step;
          if (step > params.step_cap) fail("step cap exceeded within a stage");

          std::vector<std::vector<int>> cadj = build_conflict_graph(xs, u);
          int mis_rounds = 0;
          std::uint64_t base = mix(mix(mix(mix(cfg.seed, k), j), step), 0x6d69730aull);
          auto draw = [&](int round, const std::vector<int>& act) {
            std::vector<std::uint64_t> out(act.size());
            for (size_t i = 0; i < act.size(); ++i)
              out[i] = mix(mix(base, static_cast<std::uint64_t>(round)),
                           static_cast<std::uint64_t>(xs[u[act[i]]].id));
            return out;
          };
          std::vector<int> mis_pos = luby_mis_core(cadj, draw, &mis_rounds);
          ++stats.mis_calls;
          stats.mis_rounds += mis_rounds;
          stats.rounds += mis_rounds;

          StackEntry entry;
          entry.f1 = k;
          entry.f2 = j;
          entry.f3 = static_cast<int>(step);
          std::vector<RaiseRecord> raised;
          long long msgs_before = stats.messages;
          for (int pos : mis_pos) entry.set.push_back(u[pos]);
          for (int id : entry.set) {
            RaiseRecord rec = apply_raise(id, entry.f1, entry.f2, entry.f3);
            raised.push_back(rec);
            trace.push_back(rec);
            ProcessorState& owner = procs[proc_of[id]];
            owner.stack.push_back(rec);
            owner.alpha = duals.alpha[xs[id].demand_idx];
            for (int e : rec.pi) {
              auto it = owner.beta.find(e);
              if (it != owner.beta.end()) it->second = duals.beta[e];
            }
            Message m{Message::Kind::raise, owner.id,     entry.f1, entry.f2,
                      entry.f3,             rec.instance_id, rec.delta, rec.pi};
            if (m.bits() > declared) fail("message exceeds the declared payload bound");
            for (int nb : comm[proc_of[id]]) {
              note_message(m);
              ProcessorState& rcv = procs[nb];
              Rat bump = params.mode == RaiseMode::unit
                             ? m.delta
                             : m.delta * 2 * static_cast<long long>(m.pi.size());
              for (int e : m.pi) {
                auto it = rcv.beta.find(e);
                if (it != rcv.beta.end()) it->second += bump;
              }
            }
          }
          stack.push_back(entry);
          stats.rounds += 1;  // the dual exchange round
          check_views();

          // kill chain: in unit mode a survivor conflicting with a raised
          // instance must out-profit it by the fixed factor two
          if (params.mode == RaiseMode::unit) {
            for (int id : gk) {
              if (!(slack[id] > pow * xs[id].profit)) continue;
              for (const RaiseRecord& rec : raised)
                if (conflicting(xs[id], xs[rec.instance_id]) &&
                    xs[id].profit < 2 * xs[rec.instance_id].profit)
                  fail("kill factor violated");
            }
          }
          stats.steps.push_back({k, j, static_cast<int>(step), static_cast<int>(u.size()),
                                 static_cast<int>(entry.set.size()), mis_rounds,
                                 stats.messages - msgs_before});
        }
        // the loop exits only with U empty, so the whole group is satisfied
        // at this stage's level
      }
      for (int id : gk)
        if (slack[id] > params.eps * xs[id].profit) fail("epoch left an unsatisfied instance");
    }

    // achieved satisfaction level over the active set
    Rat lambda = 1;
    for (int id : active) {
      Rat sat = Rat(1) - slack[id] / xs[id].profit;
      if (sat < lambda) lambda = sat;
    }
    res.lambda_achieved = lambda;
    if (lambda < Rat(1) - params.eps) fail("first phase missed the target level");

    // second phase: pop rounds in reverse tuple order with one-hop
    // announcements; every pop round is one synchronous round
    std::vector<int> dist_chosen;
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
      stats.rounds += 1;
      for (int id : it->set) {
        ProcessorState& owner = procs[proc_of[id]];
        if (owner.stack.empty()) fail("local stack underflow");
        const RaiseRecord& top = owner.stack.back();
        if (top.instance_id != id || top.f1 != it->f1 || top.f2 != it->f2 || top.f3 != it->f3)
          fail("local stack top does not match the pop tuple");
        const DemandInstance& di = xs[id];
        bool fits = true;
        for (int h : owner.heard) {
          const DemandInstance& other = xs[h];
          if (other.demand_idx == di.demand_idx) fits = false;
          if (res.fmode == FeasMode::disjoint && overlapping(di, other)) fits = false;
        }
        if (fits && res.fmode == FeasMode::capacity) {
          for (int e : di.edges_global) {
            Rat tot = di.height;
            for (int h : owner.heard)
              if (std::binary_search(xs[h].edges_global.begin(), xs[h].edges_global.end(), e))
                tot += xs[h].height;
            if (tot > 1) fits = false;
          }
        }
        owner.stack.pop_back();
        if (!fits) continue;
        dist_chosen.push_back(id);
        Message m;
        m.kind = Message::Kind::select;
        m.sender = owner.id;
        m.f1 = it->f1;
        m.f2 = it->f2;
        m.f3 = it->f3;
        m.instance_id = id;
        owner.heard.push_back(id);
        for (int nb : comm[proc_of[id]]) {
          note_message(m);
          procs[nb].heard.push_back(id);
        }
      }
    }
    std::sort(dist_chosen.begin(), dist_chosen.end());

    res.sol = second_phase(inst, xs, stack, res.fmode);
    if (res.sol.chosen != dist_chosen) fail("distributed selection diverged from the replay");
    if (auto bad = check_feasible(inst, xs, res.sol.chosen, res.fmode))
      fail("second phase produced an infeasible solution: " + bad->describe());
    res.duals = duals;
    res.stack = stack;
    res.trace = std::move(trace);
    res.declared_msg_bits = declared;
    res.stats = std::move(stats);
    return res;
  }
};

}  // namespace

DistResult run_distributed(const ProblemInstance& inst, const std::vector<DemandInstance>& xs,
                           const std::vector<int>& active,
                           const std::vector<LayeredDecomposition>& lays,
                           const AlgoParams& params, const SimConfig& cfg) {
  for (size_t i = 0; i < xs.size(); ++i)
    if (xs[i].id != static_cast<int>(i)) throw std::invalid_argument("instance ids must be dense");
  if (params.mode != cfg.mode) throw std::invalid_argument("config and parameter modes differ");
  Engine eng{inst, xs, active, params, cfg, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, 0};
  eng.setup(lays);
  return eng.run();
}

std::pair<DualState, Solution> replay_centralized(const ProblemInstance& inst,
                                                  const std::vector<DemandInstance>& xs,
                                                  const std::vector<LayeredDecomposition>& lays,
                                                  const std::vector<StackEntry>& stack,
                                                  RaiseMode mode, FeasMode fmode) {
  std::map<int, const std::vector<int>*> critical;
  for (const LayeredDecomposition& lay : lays)
    for (const auto& [id, pi] : lay.critical) critical[id] = &pi;
  DualState duals;
  duals.init(inst);
  for (const StackEntry& entry : stack)
    for (int id : entry.set) {
      if (mode == RaiseMode::unit)
        raise_unit(xs[id], *critical.at(id), duals);
      else
        raise_height(xs[id], *critical.at(id), duals);
    }
  return {std::move(duals), second_phase(inst, xs, stack, fmode)};
}

OverallResult run_overall_height(const ProblemInstance& inst,
                                 const std::vector<DemandInstance>& xs, const SimConfig& cfg) {
  OverallResult res;
  Rat half = make_rat(1, 2);
  std::vector<int> wide_ids, narrow_ids;
  for (const DemandInstance& di : xs)
    (di.height > half ? wide_ids : narrow_ids).push_back(di.id);

  auto sub_run = [&](const std::vector<int>& ids, RaiseMode mode) {
    std::vector<DemandInstance> sub;
    for (int id : ids) sub.push_back(xs[id]);
    SimConfig sub_cfg = cfg;
    sub_cfg.mode = mode;
    std::vector<LayeredDecomposition> lays = make_layerings(inst, sub);
    AlgoParams params = derive_params(xs, ids, lays, sub_cfg);
    return run_distributed(inst, xs, ids, lays, params, sub_cfg);
  };

  if (!wide_ids.empty()) res.wide = sub_run(wide_ids, RaiseMode::unit);
  if (!narrow_ids.empty()) res.narrow = sub_run(narrow_ids, RaiseMode::height);
  res.h_min_used = res.narrow ? res.narrow->params.h_min : half;

  // per-network merge: keep the higher-profit side, ties go wide
  std::vector<int> merged;
  for (const TreeNetwork& net : inst.networks) {
    Rat pw = 0, pn = 0;
    std::vector<int> cw, cn;
    if (res.wide)
      for (int id : res.wide->sol.chosen)
        if (xs[id].net_id == net.id) {
          cw.push_back(id);
          pw += xs[id].profit;
        }
    if (res.narrow)
      for (int id : res.narrow->sol.chosen)
        if (xs[id].net_id == net.id) {
          cn.push_back(id);
          pn += xs[id].profit;
        }
    const std::vector<int>& pick = pw >= pn ? cw : cn;
    merged.insert(merged.end(), pick.begin(), pick.end());
  }
  std::sort(merged.begin(), merged.end());
  res.sol.chosen = merged;
  res.sol.profit = solution_profit(xs, merged);
  if (auto bad = check_feasible(inst, xs, merged, FeasMode::capacity))
    throw std::logic_error("merged solution infeasible: " + bad->describe());
  return res;
}

}  // namespace chanflow
