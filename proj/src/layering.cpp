#include "chanflow/layering.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "chanflow/rational.hpp"

namespace chanflow {

int capture_node(const RootedDecomposition& dec, const DemandInstance& di) {
  int best = di.u, ties = 1;
  for (auto [a, b] : di.path_pairs) {
    (void)a;
    if (dec.depth[b] < dec.depth[best]) {
      best = b;
      ties = 1;
    } else if (dec.depth[b] == dec.depth[best]) {
      ++ties;
    }
  }
  if (ties != 1) throw std::logic_error("capture_node: least depth on path not unique");
  return best;
}

int bending_point(const TreeNetwork& net, const DemandInstance& di, int u) {
  return find_junction(net, di.u, di.v, u);
}

std::vector<std::pair<int, int>> wings(const DemandInstance& di, int y) {
  std::vector<std::pair<int, int>> out;
  for (auto [a, b] : di.path_pairs)
    if (a == y || b == y) out.push_back(std::minmax(a, b));
  if (out.empty()) throw std::invalid_argument("wings: vertex not on path");
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

int push_instance(LayeredDecomposition& lay, const ProblemInstance& inst,
                  const DemandInstance& di, int group, const std::set<int>& edges) {
  if (group >= static_cast<int>(lay.groups.size())) lay.groups.resize(group + 1);
  lay.groups[group].push_back(di.id);
  lay.critical[di.id] = {edges.begin(), edges.end()};
  (void)inst;
  return static_cast<int>(edges.size());
}

}  // namespace

LayeredDecomposition layer_from_decomposition(const ProblemInstance& inst,
                                              const TreeNetwork& net,
                                              const RootedDecomposition& dec,
                                              const std::vector<DemandInstance>& instances) {
  if (dec.net_id != net.id)
    throw std::invalid_argument("layer_from_decomposition: decomposition belongs to another network");
  LayeredDecomposition lay;
  lay.net_id = net.id;
  int ell = 0;
  for (int v = 1; v <= net.n; ++v) ell = std::max(ell, dec.depth[v]);
  lay.levels = ell;
  lay.groups.assign(ell, {});
  DecompositionReport rep = analyze_decomposition(net, dec);
  int net_idx = inst.net_index.at(net.id);
  for (const DemandInstance& di : instances) {
    if (di.net_id != net.id) continue;
    int mu = capture_node(dec, di);
    lay.capture[di.id] = mu;
    std::set<int> pi;
    auto add_wings = [&](int y) {
      for (auto [a, b] : wings(di, y))
        pi.insert(inst.global_edge(net_idx, net.local_edge(a, b)));
    };
    add_wings(mu);
    for (int u : rep.pivots[mu]) add_wings(bending_point(net, di, u));
    int sz = push_instance(lay, inst, di, ell - dec.depth[mu], pi);
    lay.delta_measured = std::max(lay.delta_measured, sz);
  }
  // declared bound 2(theta+1) with theta = 1 for root fixing, else 2
  lay.delta = dec.kind == DecompKind::root_fixing ? 4 : 6;
  lay.delta = std::max(lay.delta, lay.delta_measured);
  for (auto& g : lay.groups) std::sort(g.begin(), g.end());
  return lay;
}

LayeredDecomposition layer_line_by_length(const ProblemInstance& inst,
                                          const std::vector<DemandInstance>& instances) {
  if (instances.empty()) throw std::invalid_argument("layer_line_by_length: no instances");
  long long lmin = 0, lmax = 0;
  for (const DemandInstance& di : instances) {
    long long len = di.end - di.start + 1;
    if (lmin == 0 || len < lmin) lmin = len;
    lmax = std::max(lmax, len);
  }
  LayeredDecomposition lay;
  lay.net_id = 0;
  lay.levels = ceil_log2_ratio(make_rat(lmax, lmin)) + 1;
  lay.groups.assign(lay.levels, {});
  for (const DemandInstance& di : instances) {
    long long len = di.end - di.start + 1;
    int cls = floor_log2_ratio(make_rat(len, lmin));
    int mid = (di.start + di.end) / 2;
    std::set<int> pi;
    for (int slot : {di.start, mid, di.end})
      pi.insert(inst.global_edge(di.net_idx, slot - 1));
    int sz = push_instance(lay, inst, di, cls, pi);
    lay.delta_measured = std::max(lay.delta_measured, sz);
  }
  lay.delta = 3;
  for (auto& g : lay.groups) std::sort(g.begin(), g.end());
  return lay;
}

std::optional<InterferencePair> check_interference(const LayeredDecomposition& lay,
                                                   const std::vector<DemandInstance>& instances) {
  std::map<int, int> gid;
  for (int g = 0; g < static_cast<int>(lay.groups.size()); ++g)
    for (int id : lay.groups[g]) gid[id] = g;
  for (auto [a, ga] : gid)
    for (auto [b, gb] : gid) {
      if (a == b || ga > gb) continue;
      const DemandInstance& da = instances[a];
      const DemandInstance& db = instances[b];
      if (!overlapping(da, db)) continue;
      const std::vector<int>& pa = lay.critical.at(a);
      bool hit = false;
      for (int e : db.edges_global)
        if (std::binary_search(pa.begin(), pa.end(), e)) {
          hit = true;
          break;
        }
      if (!hit) return InterferencePair{a, b};
    }
  return std::nullopt;
}

}  // namespace chanflow
