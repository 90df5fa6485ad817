#include "chanflow/decomposition.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace chanflow {

namespace {

// shared scratch marks so component operations stay O(|comp|)
thread_local std::vector<long long> t_stamp;
thread_local long long t_cur = 0;

long long fresh_mark(int n, const std::vector<int>& comp) {
  if (static_cast<int>(t_stamp.size()) < n + 1) t_stamp.assign(n + 1, 0);
  ++t_cur;
  for (int v : comp) t_stamp[v] = t_cur;
  return t_cur;
}

std::vector<int> path_vertices(const TreeNetwork& net, int a, int b) {
  if (a == b) return {a};
  auto steps = tree_path(net, a, b);
  std::vector<int> verts{steps.front().first};
  for (auto [x, y] : steps) verts.push_back(y);
  return verts;
}

}  // namespace

void RootedDecomposition::finalize() {
  int n = static_cast<int>(parent.size()) - 1;
  children.assign(n + 1, {});
  depth.assign(n + 1, 0);
  for (int v = 1; v <= n; ++v)
    if (v != root && parent[v] >= 1 && parent[v] <= n) children[parent[v]].push_back(v);
  for (auto& c : children) std::sort(c.begin(), c.end());
  if (root >= 1 && root <= n) {
    std::deque<int> q{root};
    depth[root] = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int y : children[x]) {
        depth[y] = depth[x] + 1;
        q.push_back(y);
      }
    }
  }
}

int find_balancer(const TreeNetwork& net, const std::vector<int>& comp) {
  if (comp.empty()) throw std::invalid_argument("find_balancer: empty component");
  int c = static_cast<int>(comp.size());
  if (c == 1) return comp[0];
  long long m = fresh_mark(net.n, comp);
  // subtree sizes for the component rooted anywhere inside it
  int r = comp[0];
  std::vector<int> order, par(net.n + 1, 0), sz(net.n + 1, 1);
  order.reserve(c);
  order.push_back(r);
  par[r] = r;
  for (size_t i = 0; i < order.size(); ++i) {
    int x = order[i];
    for (int y : net.adj[x])
      if (t_stamp[y] == m && y != par[x]) {
        par[y] = x;
        order.push_back(y);
      }
  }
  if (static_cast<int>(order.size()) != c)
    throw std::invalid_argument("find_balancer: component not connected");
  for (size_t i = order.size(); i-- > 1;) sz[par[order[i]]] += sz[order[i]];
  int best = -1;
  for (int v : comp) {
    int worst = c - sz[v];
    for (int y : net.adj[v])
      if (t_stamp[y] == m && par[y] == v && y != v) worst = std::max(worst, sz[y]);
    if (worst <= c / 2 && (best < 0 || v < best)) best = v;
  }
  if (best < 0) throw std::logic_error("find_balancer: no balancer, component malformed");
  return best;
}

std::vector<std::vector<int>> split_component(const TreeNetwork& net,
                                              const std::vector<int>& comp, int z) {
  long long m = fresh_mark(net.n, comp);
  if (t_stamp[z] != m) throw std::invalid_argument("split_component: z not in component");
  t_stamp[z] = m - 1;  // excluded
  std::vector<std::vector<int>> parts;
  std::vector<char> seen;
  std::vector<int> seen_list;
  seen.assign(net.n + 1, 0);
  for (int s : comp) {
    if (s == z || seen[s]) continue;
    std::vector<int> part{s};
    seen[s] = 1;
    for (size_t i = 0; i < part.size(); ++i)
      for (int y : net.adj[part[i]])
        if (t_stamp[y] == m && !seen[y]) {
          seen[y] = 1;
          part.push_back(y);
        }
    std::sort(part.begin(), part.end());
    parts.push_back(std::move(part));
  }
  std::sort(parts.begin(), parts.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  return parts;
}

RootedDecomposition build_root_fixing(const TreeNetwork& net, int root) {
  if (!net.has_vertex(root)) throw std::invalid_argument("build_root_fixing: bad root");
  RootedDecomposition dec;
  dec.net_id = net.id;
  dec.kind = DecompKind::root_fixing;
  dec.root = root;
  dec.parent.assign(net.n + 1, 0);
  std::vector<char> seen(net.n + 1, 0);
  std::deque<int> q{root};
  seen[root] = 1;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int y : net.adj[x])
      if (!seen[y]) {
        seen[y] = 1;
        dec.parent[y] = x;
        q.push_back(y);
      }
  }
  dec.finalize();
  return dec;
}

RootedDecomposition build_balancing(const TreeNetwork& net) {
  RootedDecomposition dec;
  dec.net_id = net.id;
  dec.kind = DecompKind::balancing;
  dec.parent.assign(net.n + 1, 0);
  std::vector<int> all(net.n);
  for (int v = 1; v <= net.n; ++v) all[v - 1] = v;
  // explicit work queue, recursion depth is log n but components can be many
  std::deque<std::pair<std::vector<int>, int>> jobs;
  jobs.emplace_back(std::move(all), 0);
  while (!jobs.empty()) {
    auto [comp, hparent] = std::move(jobs.front());
    jobs.pop_front();
    int z = find_balancer(net, comp);
    dec.parent[z] = hparent;
    if (hparent == 0) dec.root = z;
    for (auto& part : split_component(net, comp, z)) jobs.emplace_back(std::move(part), z);
  }
  dec.finalize();
  return dec;
}

int find_junction(const TreeNetwork& net, int a, int b, int c) {
  if (a == b || a == c) return a;
  if (b == c) return b;
  auto ab = path_vertices(net, a, b);
  std::set<int> on_ab(ab.begin(), ab.end());
  // walk a..c; the farthest vertex still on path(a,b) is where all three meet
  int best = a;
  for (int v : path_vertices(net, a, c))
    if (on_ab.count(v)) best = v;
  return best;
}

namespace {

// neighborhood of comp in the network; comp sorted
std::vector<int> component_neighbors(const TreeNetwork& net, const std::vector<int>& comp) {
  std::set<int> nbrs;
  for (int v : comp)
    for (int y : net.adj[v])
      if (!std::binary_search(comp.begin(), comp.end(), y)) nbrs.insert(y);
  return {nbrs.begin(), nbrs.end()};
}

// the unique member of comp adjacent to outside vertex u
int attach_vertex(const TreeNetwork& net, const std::vector<int>& comp, int u) {
  for (int y : net.adj[u])
    if (std::binary_search(comp.begin(), comp.end(), y)) return y;
  throw std::logic_error("attach_vertex: u has no neighbor in component");
}

}  // namespace

RootedDecomposition build_ideal(const TreeNetwork& net) {
  RootedDecomposition dec;
  dec.net_id = net.id;
  dec.kind = DecompKind::ideal;
  dec.parent.assign(net.n + 1, 0);
  std::vector<int> all(net.n);
  for (int v = 1; v <= net.n; ++v) all[v - 1] = v;
  std::deque<std::pair<std::vector<int>, int>> jobs;
  jobs.emplace_back(std::move(all), 0);
  while (!jobs.empty()) {
    auto [comp, hparent] = std::move(jobs.front());
    jobs.pop_front();
    if (comp.size() == 1) {
      dec.parent[comp[0]] = hparent;
      if (hparent == 0) dec.root = comp[0];
      continue;
    }
    std::vector<int> nbrs = component_neighbors(net, comp);
    if (nbrs.size() > 2)
      throw std::logic_error("build_ideal: component grew more than two neighbors");
    int z = find_balancer(net, comp);
    auto parts = split_component(net, comp, z);
    bool rewire = false;
    int u1p = 0, u2p = 0, c1 = -1;
    if (nbrs.size() == 2) {
      u1p = attach_vertex(net, comp, nbrs[0]);
      u2p = attach_vertex(net, comp, nbrs[1]);
      if (u1p != z && u2p != z) {
        int i1 = -1, i2 = -1;
        for (int i = 0; i < static_cast<int>(parts.size()); ++i) {
          if (std::binary_search(parts[i].begin(), parts[i].end(), u1p)) i1 = i;
          if (std::binary_search(parts[i].begin(), parts[i].end(), u2p)) i2 = i;
        }
        if (i1 == i2) {
          rewire = true;
          c1 = i1;
        }
      }
    }
    if (!rewire) {
      // both outside neighbors land in different parts (or attach at z itself),
      // so every part keeps at most two neighbors and z can take the root
      dec.parent[z] = hparent;
      if (hparent == 0) dec.root = z;
      for (auto& part : parts) jobs.emplace_back(std::move(part), z);
    } else {
      // both outside neighbors attach inside one part: that part would see
      // three neighbors. Split it again at the meeting point j of the paths
      // between the two attach vertices and z, root j, and hang z below it;
      // the sub-part facing z plus all other original parts go under z.
      int j = find_junction(net, u1p, u2p, z);
      if (!std::binary_search(parts[c1].begin(), parts[c1].end(), j))
        throw std::logic_error("build_ideal: junction escaped its part");
      int zc = attach_vertex(net, parts[c1], z);
      auto sub = split_component(net, parts[c1], j);
      dec.parent[j] = hparent;
      if (hparent == 0) dec.root = j;
      dec.parent[z] = j;
      for (auto& part : sub) {
        bool faces_z = zc != j && std::binary_search(part.begin(), part.end(), zc);
        jobs.emplace_back(std::move(part), faces_z ? z : j);
      }
      for (int i = 0; i < static_cast<int>(parts.size()); ++i)
        if (i != c1) jobs.emplace_back(std::move(parts[i]), z);
    }
  }
  dec.finalize();
  return dec;
}

std::vector<int> pivot_set(const TreeNetwork& net, const RootedDecomposition& dec, int z) {
  if (!net.has_vertex(z)) throw std::invalid_argument("pivot_set: bad vertex");
  std::vector<char> in_c(net.n + 1, 0);
  std::vector<int> comp{z};
  in_c[z] = 1;
  for (size_t i = 0; i < comp.size(); ++i)
    for (int y : dec.children[comp[i]]) {
      in_c[y] = 1;
      comp.push_back(y);
    }
  std::set<int> nbrs;
  for (int v : comp)
    for (int y : net.adj[v])
      if (!in_c[y]) nbrs.insert(y);
  return {nbrs.begin(), nbrs.end()};
}

DecompositionReport analyze_decomposition(const TreeNetwork& net,
                                          const RootedDecomposition& dec) {
  DecompositionReport rep;
  rep.pivots.assign(net.n + 1, {});
  for (int v = 1; v <= net.n; ++v) rep.depth = std::max(rep.depth, dec.depth[v]);
  // an edge endpoint x above its mate y is a neighbor of C(z) exactly for the
  // H-vertices z strictly between y and x
  for (auto [a, b] : net.edges) {
    int x = a, y = b;
    if (dec.depth[x] > dec.depth[y]) std::swap(x, y);
    for (int z = y; z != x; z = dec.parent[z]) {
      if (z < 1 || z > net.n)
        throw std::invalid_argument("analyze_decomposition: edge not ancestor-related");
      rep.pivots[z].push_back(x);
    }
  }
  for (int v = 1; v <= net.n; ++v) {
    auto& p = rep.pivots[v];
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    rep.theta = std::max(rep.theta, static_cast<int>(p.size()));
  }
  return rep;
}

std::string DecompViolation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::malformed:
      os << "parent array is not a rooted spanning tree (vertex " << a << ")";
      break;
    case Kind::edge_unrelated:
      os << "network edge (" << a << "," << b << ") joins unrelated decomposition vertices";
      break;
    case Kind::component_disconnected:
      os << "C(" << a << ") is not connected in the network";
      break;
  }
  return os.str();
}

// The two properties checked here are equivalent to the defining pair
// (LCA-on-path for all vertex pairs, connectivity of every C(z)):
//  - every network edge ancestor-related in H  <=>  every neighbor of C(z) is
//    a strict H-ancestor of z; with connectivity that forces the LCA of any
//    path's endpoints onto the path, and conversely an edge pair's LCA lying
//    on the one-edge path means the endpoints are related.
//  - with relatedness settled, C(z) is connected iff the number of network
//    edges with both ends in C(z) is |C(z)|-1; both ends lie in C(z) exactly
//    when z is an ancestor-or-self of the shallower endpoint, so subtree
//    sums of per-vertex edge counts decide every z at once.
std::optional<DecompViolation> validate_decomposition(const TreeNetwork& net,
                                                      const RootedDecomposition& dec) {
  using K = DecompViolation::Kind;
  int n = net.n;
  if (static_cast<int>(dec.parent.size()) != n + 1 || dec.root < 1 || dec.root > n ||
      dec.parent[dec.root] != 0)
    return DecompViolation{K::malformed, dec.root, 0};
  for (int v = 1; v <= n; ++v) {
    if (v == dec.root) continue;
    if (dec.parent[v] < 1 || dec.parent[v] > n || dec.parent[v] == v)
      return DecompViolation{K::malformed, v, 0};
  }
  // reachability doubles as the cycle check
  for (int v = 1; v <= n; ++v)
    if (dec.depth[v] < 1) return DecompViolation{K::malformed, v, 0};
  std::vector<int> edges_at(n + 1, 0);
  for (auto [a, b] : net.edges) {
    int x = a, y = b;
    if (dec.depth[x] > dec.depth[y]) std::swap(x, y);
    int w = y;
    while (dec.depth[w] > dec.depth[x]) w = dec.parent[w];
    if (w != x) return DecompViolation{K::edge_unrelated, a, b};
    ++edges_at[x];
  }
  // iterative bottom-up subtree sums, vertices sorted by decreasing depth
  std::vector<int> by_depth(n);
  for (int v = 1; v <= n; ++v) by_depth[v - 1] = v;
  std::sort(by_depth.begin(), by_depth.end(),
            [&](int p, int q) { return dec.depth[p] > dec.depth[q]; });
  std::vector<int> sz(n + 1, 1), inner(n + 1, 0);
  for (int v = 1; v <= n; ++v) inner[v] = edges_at[v];
  for (int v : by_depth)
    if (v != dec.root) {
      sz[dec.parent[v]] += sz[v];
      inner[dec.parent[v]] += inner[v];
    }
  for (int v = 1; v <= n; ++v)
    if (inner[v] != sz[v] - 1) return DecompViolation{K::component_disconnected, v, 0};
  return std::nullopt;
}

}  // namespace chanflow
