#include "chanflow/model.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace chanflow {

void TreeNetwork::finalize() {
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  adj.assign(n + 1, {});
  edge_idx.clear();
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    auto [a, b] = edges[i];
    adj[a].push_back(b);
    adj[b].push_back(a);
    edge_idx[{a, b}] = i;
  }
  for (auto& v : adj) std::sort(v.begin(), v.end());
}

int TreeNetwork::local_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  auto it = edge_idx.find({a, b});
  return it == edge_idx.end() ? -1 : it->second;
}

void ProblemInstance::finalize() {
  net_index.clear();
  proc_index.clear();
  demand_index.clear();
  for (int i = 0; i < static_cast<int>(networks.size()); ++i) {
    networks[i].finalize();
    net_index[networks[i].id] = i;
  }
  for (int i = 0; i < static_cast<int>(processors.size()); ++i) {
    std::sort(processors[i].access.begin(), processors[i].access.end());
    proc_index[processors[i].id] = i;
  }
  for (int i = 0; i < static_cast<int>(demands.size()); ++i) demand_index[demands[i].id] = i;
  edge_offset.assign(networks.size(), 0);
  total_edges = 0;
  for (int i = 0; i < static_cast<int>(networks.size()); ++i) {
    edge_offset[i] = total_edges;
    total_edges += static_cast<int>(networks[i].edges.size());
  }
}

namespace {

bool spanning_connected(const TreeNetwork& net) {
  if (net.n <= 0) return false;
  if (static_cast<int>(net.edges.size()) != net.n - 1) return false;
  std::vector<char> seen(net.n + 1, 0);
  std::deque<int> q{1};
  seen[1] = 1;
  int cnt = 0;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    ++cnt;
    for (int y : net.adj[x])
      if (!seen[y]) {
        seen[y] = 1;
        q.push_back(y);
      }
  }
  return cnt == net.n;
}

}  // namespace

std::vector<std::string> ProblemInstance::validate() const {
  std::vector<std::string> bad;
  auto complain = [&](std::string s) { bad.push_back(std::move(s)); };
  if (n < 1) complain("n must be >= 1");
  if (networks.empty()) complain("no networks");
  if (net_index.size() != networks.size()) complain("duplicate network ids");
  for (const TreeNetwork& net : networks) {
    if (net.n != n) complain("network " + std::to_string(net.id) + " has wrong vertex count");
    if (mode == Mode::line) {
      // path topology is synthesized; stored edges must be exactly that path
      if (static_cast<int>(net.edges.size()) != n - 1)
        complain("line network " + std::to_string(net.id) + " must have the path topology");
    }
    for (auto [a, b] : net.edges) {
      if (a == b) complain("network " + std::to_string(net.id) + " has a self-loop");
      if (a < 1 || a > n || b < 1 || b > n)
        complain("network " + std::to_string(net.id) + " edge endpoint out of range");
    }
    std::set<std::pair<int, int>> uniq(net.edges.begin(), net.edges.end());
    if (uniq.size() != net.edges.size())
      complain("network " + std::to_string(net.id) + " has duplicate edges");
    else if (!spanning_connected(net))
      complain("network " + std::to_string(net.id) + " is not a spanning tree on 1..n");
  }
  if (proc_index.size() != processors.size()) complain("duplicate processor ids");
  for (const Processor& p : processors) {
    if (p.access.empty()) complain("processor " + std::to_string(p.id) + " has empty access set");
    std::set<int> uniq(p.access.begin(), p.access.end());
    if (uniq.size() != p.access.size())
      complain("processor " + std::to_string(p.id) + " lists a network twice");
    for (int net_id : p.access)
      if (!net_index.count(net_id))
        complain("processor " + std::to_string(p.id) + " references unknown network " +
                 std::to_string(net_id));
  }
  if (demand_index.size() != demands.size()) complain("duplicate demand ids");
  if (demands.size() != processors.size())
    complain("expected exactly one demand per processor");
  std::set<int> owners;
  for (const Demand& d : demands) {
    std::string tag = "demand " + std::to_string(d.id);
    if (!proc_index.count(d.owner))
      complain(tag + " has unknown owner " + std::to_string(d.owner));
    else if (!owners.insert(d.owner).second)
      complain(tag + " shares its owner with another demand");
    if (mode == Mode::tree) {
      if (d.u < 1 || d.u > n || d.v < 1 || d.v > n) complain(tag + " endpoint out of range");
      if (d.u == d.v) complain(tag + " has coinciding endpoints");
    } else {
      if (d.rt < 1 || d.dl > n - 1 || d.rt > d.dl) complain(tag + " has a bad window");
      if (d.rho < 1 || d.rho > d.dl - d.rt + 1) complain(tag + " length does not fit its window");
    }
    if (d.profit <= 0) complain(tag + " must have positive profit");
    if (d.height <= 0 || d.height > 1) complain(tag + " height must be in (0,1]");
  }
  return bad;
}

std::vector<std::pair<int, int>> tree_path(const TreeNetwork& net, int u, int v) {
  if (!net.has_vertex(u) || !net.has_vertex(v))
    throw std::invalid_argument("tree_path: vertex out of range");
  if (u == v) throw std::invalid_argument("tree_path: endpoints coincide");
  // BFS parent trace from u; tree, so the first visit is the unique path
  std::vector<int> parent(net.n + 1, 0);
  std::deque<int> q{u};
  parent[u] = u;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    if (x == v) break;
    for (int y : net.adj[x]) {
      if (parent[y] == 0) {
        parent[y] = x;
        q.push_back(y);
      }
    }
  }
  if (parent[v] == 0) throw std::invalid_argument("tree_path: endpoints not connected");
  std::vector<int> verts;
  for (int x = v; x != u; x = parent[x]) verts.push_back(x);
  verts.push_back(u);
  std::reverse(verts.begin(), verts.end());
  std::vector<std::pair<int, int>> steps;
  for (size_t i = 0; i + 1 < verts.size(); ++i) steps.emplace_back(verts[i], verts[i + 1]);
  return steps;
}

namespace {

void set_bit(std::vector<uint64_t>& mask, int bit) {
  size_t w = static_cast<size_t>(bit) / 64;
  if (mask.size() <= w) mask.resize(w + 1, 0);
  mask[w] |= uint64_t{1} << (bit % 64);
}

DemandInstance make_instance(const ProblemInstance& inst, const Demand& d, int net_idx, int u,
                             int v, int start, int end) {
  const TreeNetwork& net = inst.networks[net_idx];
  DemandInstance di;
  di.demand_id = d.id;
  di.demand_idx = inst.demand_index.at(d.id);
  di.owner = d.owner;
  di.net_id = net.id;
  di.net_idx = net_idx;
  di.u = u;
  di.v = v;
  di.start = start;
  di.end = end;
  di.profit = d.profit;
  di.height = d.height;
  di.path_pairs = tree_path(net, u, v);
  for (auto [a, b] : di.path_pairs) {
    int le = net.local_edge(a, b);
    di.edges_global.push_back(inst.global_edge(net_idx, le));
  }
  std::sort(di.edges_global.begin(), di.edges_global.end());
  for (int g : di.edges_global) set_bit(di.mask, g);
  return di;
}

}  // namespace

std::vector<DemandInstance> expand_demand_instances(const ProblemInstance& inst) {
  std::vector<DemandInstance> out;
  for (const Demand& d : inst.demands) {
    const Processor& p = inst.processors[inst.proc_index.at(d.owner)];
    for (int net_id : p.access) {
      int ni = inst.net_index.at(net_id);
      if (inst.mode == Mode::tree) {
        out.push_back(make_instance(inst, d, ni, d.u, d.v, 0, 0));
      } else {
        // every start slot s with [s, s+rho-1] inside [rt, dl]
        for (int s = d.rt; s + d.rho - 1 <= d.dl; ++s) {
          int e = s + d.rho - 1;
          out.push_back(make_instance(inst, d, ni, s, e + 1, s, e));
        }
      }
    }
  }
  for (int i = 0; i < static_cast<int>(out.size()); ++i) out[i].id = i;
  return out;
}

bool masks_intersect(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
  size_t k = std::min(a.size(), b.size());
  for (size_t i = 0; i < k; ++i)
    if (a[i] & b[i]) return true;
  return false;
}

bool overlapping(const DemandInstance& a, const DemandInstance& b) {
  if (a.net_idx != b.net_idx) return false;
  return masks_intersect(a.mask, b.mask);
}

bool conflicting(const DemandInstance& a, const DemandInstance& b) {
  return a.demand_id == b.demand_id || overlapping(a, b);
}

EdgeRef edge_ref_of(const ProblemInstance& inst, int global_idx) {
  for (int ni = static_cast<int>(inst.networks.size()) - 1; ni >= 0; --ni) {
    if (global_idx >= inst.edge_offset[ni]) {
      auto [a, b] = inst.networks[ni].edges[global_idx - inst.edge_offset[ni]];
      return EdgeRef{inst.networks[ni].id, a, b};
    }
  }
  throw std::out_of_range("edge_ref_of: bad global edge index");
}

std::string FeasViolation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::duplicate_demand:
      os << "demand " << demand_id << " scheduled twice (instances " << instance_a << ", "
         << instance_b << ")";
      break;
    case Kind::edge_conflict:
      os << "instances " << instance_a << " and " << instance_b << " share edge (" << edge.u
         << "," << edge.v << ") on network " << edge.net;
      break;
    case Kind::capacity_exceeded:
      os << "edge (" << edge.u << "," << edge.v << ") on network " << edge.net
         << " exceeds unit capacity (instance " << instance_a << " pushed it over)";
      break;
    case Kind::unknown_instance:
      os << "unknown instance id " << instance_a;
      break;
  }
  return os.str();
}

std::optional<FeasViolation> check_feasible(const ProblemInstance& inst,
                                            const std::vector<DemandInstance>& instances,
                                            const std::vector<int>& chosen, FeasMode mode) {
  std::map<int, int> demand_seen;  // demand id -> instance id
  std::vector<Rat> used(inst.total_edges, Rat(0));
  std::vector<int> used_by(inst.total_edges, -1);
  for (int id : chosen) {
    if (id < 0 || id >= static_cast<int>(instances.size()))
      return FeasViolation{FeasViolation::Kind::unknown_instance, 0, id, -1, {}};
    const DemandInstance& di = instances[id];
    auto [it, fresh] = demand_seen.emplace(di.demand_id, id);
    if (!fresh)
      return FeasViolation{FeasViolation::Kind::duplicate_demand, di.demand_id, it->second, id, {}};
    for (int g : di.edges_global) {
      if (mode == FeasMode::disjoint) {
        if (used_by[g] >= 0)
          return FeasViolation{FeasViolation::Kind::edge_conflict, di.demand_id, used_by[g], id,
                               edge_ref_of(inst, g)};
      } else {
        if (used[g] + di.height > 1)
          return FeasViolation{FeasViolation::Kind::capacity_exceeded, di.demand_id, id, -1,
                               edge_ref_of(inst, g)};
      }
      used[g] += di.height;
      used_by[g] = id;
    }
  }
  return std::nullopt;
}

Rat solution_profit(const std::vector<DemandInstance>& instances, const std::vector<int>& chosen) {
  Rat p = 0;
  for (int id : chosen) p += instances[id].profit;
  return p;
}

}  // namespace chanflow
