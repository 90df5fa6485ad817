#include "chanflow/generator.hpp"

#include <algorithm>
#include <stdexcept>

namespace chanflow {

TreeNetwork random_tree(int id, int n, std::mt19937_64& rng) {
  TreeNetwork net;
  net.id = id;
  net.n = n;
  if (n == 2) {
    net.edges = {{1, 2}};
  } else if (n > 2) {
    // decode a random Pruefer sequence
    std::vector<int> code(n - 2);
    for (int& c : code) c = static_cast<int>(rand_int(rng, 1, n));
    std::vector<int> deg(n + 1, 1);
    for (int c : code) ++deg[c];
    int ptr = 1;
    while (deg[ptr] != 1) ++ptr;
    int leaf = ptr;
    for (int c : code) {
      net.edges.emplace_back(leaf, c);
      if (--deg[c] == 1 && c < ptr) {
        leaf = c;
      } else {
        ++ptr;
        while (deg[ptr] != 1) ++ptr;
        leaf = ptr;
      }
    }
    net.edges.emplace_back(leaf, n);
  }
  net.finalize();
  return net;
}

ProblemInstance generate_instance(const GenConfig& cfg) {
  if (cfg.n < 2 || cfg.m < 1 || cfg.r < 1) throw std::invalid_argument("generate_instance: bad sizes");
  std::mt19937_64 rng(cfg.seed);
  ProblemInstance inst;
  inst.mode = cfg.kind;
  inst.n = cfg.n;
  for (int q = 1; q <= cfg.r; ++q) {
    if (cfg.kind == Mode::tree) {
      inst.networks.push_back(random_tree(q, cfg.n, rng));
    } else {
      TreeNetwork net;
      net.id = q;
      net.n = cfg.n;
      for (int t = 1; t < cfg.n; ++t) net.edges.emplace_back(t, t + 1);
      net.finalize();
      inst.networks.push_back(std::move(net));
    }
  }
  int slots = cfg.n - 1;
  for (int i = 1; i <= cfg.m; ++i) {
    Processor p;
    p.id = i;
    int acc = static_cast<int>(rand_int(rng, 1, std::min(cfg.r, std::max(1, cfg.acc_max))));
    std::vector<int> nets(cfg.r);
    for (int q = 0; q < cfg.r; ++q) nets[q] = q + 1;
    for (int k = 0; k < acc; ++k) {
      int pick = static_cast<int>(rand_int(rng, k, cfg.r - 1));
      std::swap(nets[k], nets[pick]);
    }
    p.access.assign(nets.begin(), nets.begin() + acc);
    std::sort(p.access.begin(), p.access.end());
    inst.processors.push_back(std::move(p));

    Demand d;
    d.id = i;
    d.owner = i;
    if (cfg.kind == Mode::tree) {
      d.u = static_cast<int>(rand_int(rng, 1, cfg.n));
      do {
        d.v = static_cast<int>(rand_int(rng, 1, cfg.n));
      } while (d.v == d.u);
    } else {
      d.rt = static_cast<int>(rand_int(rng, 1, slots));
      d.rho = static_cast<int>(rand_int(rng, 1, slots - d.rt + 1));
      int slack = static_cast<int>(rand_int(rng, 0, std::max(0, cfg.max_starts - 1)));
      d.dl = std::min(slots, d.rt + d.rho - 1 + slack);
    }
    long long num = rand_int(rng, cfg.pmin, cfg.pmax);
    d.profit = make_rat(num, 1);
    switch (cfg.heights) {
      case GenConfig::Heights::unit:
        d.height = 1;
        break;
      case GenConfig::Heights::narrow:
        d.height = make_rat(rand_int(rng, 1, 2), 4);
        break;
      case GenConfig::Heights::mixed:
        d.height = make_rat(rand_int(rng, 1, 4), 4);
        break;
    }
    inst.demands.push_back(std::move(d));
  }
  inst.finalize();
  return inst;
}

}  // namespace chanflow
