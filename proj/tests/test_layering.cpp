#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "chanflow/decomposition.hpp"
#include "chanflow/generator.hpp"
#include "chanflow/layering.hpp"
#include "chanflow/model.hpp"
#include "fixtures.hpp"

using namespace chanflow;
using namespace chanflow::testing;

namespace {

std::set<std::pair<int, int>> critical_pairs(const ProblemInstance& inst,
                                             const LayeredDecomposition& lay, int id) {
  std::set<std::pair<int, int>> out;
  for (int g : lay.critical.at(id)) {
    EdgeRef e = edge_ref_of(inst, g);
    out.insert({e.u, e.v});
  }
  return out;
}

int group_of(const LayeredDecomposition& lay, int id) {
  for (int g = 0; g < static_cast<int>(lay.groups.size()); ++g)
    for (int x : lay.groups[g])
      if (x == id) return g;
  return -1;
}

}  // namespace

TEST_CASE("capture node is the least-depth path vertex") {
  ProblemInstance inst = make_tree_instance({wide_tree()}, {{4, 13}, {1, 2}, {2, 4}, {4, 10}});
  auto xs = expand_demand_instances(inst);
  const TreeNetwork& net = inst.networks[0];

  RootedDecomposition ideal = build_ideal(net);
  CHECK(capture_node(ideal, xs[0]) == 5);

  RootedDecomposition fix = build_root_fixing(net, 1);
  CHECK(capture_node(fix, xs[0]) == 2);
  CHECK(capture_node(fix, xs[1]) == 1);  // ancestor endpoint captures
  CHECK(capture_node(fix, xs[2]) == 2);
  CHECK(capture_node(ideal, xs[3]) == 1);  // path through the root
}

TEST_CASE("capture node demands a unique minimum") {
  TreeNetwork p3;
  p3.id = 1;
  p3.n = 3;
  p3.edges = {{1, 2}, {2, 3}};
  p3.finalize();
  ProblemInstance inst = make_tree_instance({p3}, {{2, 3}});
  auto xs = expand_demand_instances(inst);
  RootedDecomposition sib;
  sib.net_id = 1;
  sib.root = 1;
  sib.parent = {0, 0, 1, 1};  // 2 and 3 tie at depth 2
  sib.finalize();
  CHECK_THROWS_AS(capture_node(sib, xs[0]), std::logic_error);
}

TEST_CASE("bending points and wings of the long demand") {
  ProblemInstance inst = make_tree_instance({wide_tree()}, {{4, 13}});
  auto xs = expand_demand_instances(inst);
  const TreeNetwork& net = inst.networks[0];
  const DemandInstance& d = xs[0];

  CHECK(bending_point(net, d, 3) == 2);
  CHECK(bending_point(net, d, 9) == 5);
  CHECK(bending_point(net, d, 8) == 8);   // already on the path
  CHECK(bending_point(net, d, 14) == 2);  // approach through 3 and 1

  CHECK(wings(d, 4) == std::vector<std::pair<int, int>>{{2, 4}});
  CHECK(wings(d, 8) == std::vector<std::pair<int, int>>{{5, 8}, {8, 13}});
  CHECK(wings(d, 13) == std::vector<std::pair<int, int>>{{8, 13}});
  CHECK_THROWS_AS(wings(d, 3), std::invalid_argument);

  ProblemInstance small = make_tree_instance({wide_tree()}, {{1, 2}});
  auto ys = expand_demand_instances(small);
  CHECK(wings(ys[0], 1) == std::vector<std::pair<int, int>>{{1, 2}});
  CHECK(wings(ys[0], 2) == std::vector<std::pair<int, int>>{{1, 2}});
}

TEST_CASE("tree layering groups by depth and collects small critical sets") {
  ProblemInstance inst = make_tree_instance({wide_tree()}, {{4, 13}, {4, 10}, {10, 11}});
  auto xs = expand_demand_instances(inst);
  const TreeNetwork& net = inst.networks[0];
  RootedDecomposition ideal = build_ideal(net);
  LayeredDecomposition lay = layer_from_decomposition(inst, net, ideal, xs);

  CHECK(lay.levels == 4);
  CHECK(lay.delta == 6);
  CHECK(lay.delta_measured <= 6);
  // mu = 5 at depth 2, pivot 1, bending point 2
  CHECK(critical_pairs(inst, lay, 0) ==
        std::set<std::pair<int, int>>{{2, 4}, {2, 5}, {5, 8}});
  CHECK(lay.capture.at(0) == 5);
  CHECK(group_of(lay, 0) == 2);
  // path through the root lands in the last group
  CHECK(lay.capture.at(1) == 1);
  CHECK(group_of(lay, 1) == 3);
  // short demand captured deep: mu = 6 at depth 3
  CHECK(lay.capture.at(2) == 6);
  CHECK(group_of(lay, 2) == 1);

  CHECK_FALSE(check_interference(lay, xs));
}

TEST_CASE("root-fixing layering needs only the capture wings") {
  ProblemInstance inst = make_tree_instance({wide_tree()}, {{4, 13}, {12, 13}, {10, 14}});
  auto xs = expand_demand_instances(inst);
  const TreeNetwork& net = inst.networks[0];
  RootedDecomposition fix = build_root_fixing(net, 1);
  LayeredDecomposition lay = layer_from_decomposition(inst, net, fix, xs);
  CHECK(lay.delta == 4);
  CHECK(lay.delta_measured <= 2);
  CHECK(critical_pairs(inst, lay, 0) == std::set<std::pair<int, int>>{{2, 4}, {2, 5}});
  CHECK_FALSE(check_interference(lay, xs));
}

TEST_CASE("layering ignores instances of other networks") {
  ProblemInstance inst = make_tree_instance({wide_tree(1), wide_tree(2)}, {{4, 13}});
  auto xs = expand_demand_instances(inst);
  RootedDecomposition ideal = build_ideal(inst.networks[0]);
  LayeredDecomposition lay = layer_from_decomposition(inst, inst.networks[0], ideal, xs);
  CHECK(lay.critical.count(0) == 1);
  CHECK(lay.critical.count(1) == 0);
  RootedDecomposition other = build_ideal(inst.networks[1]);
  CHECK_THROWS_AS(layer_from_decomposition(inst, inst.networks[0], other, xs),
                  std::invalid_argument);
}

TEST_CASE("interference property holds on random tree instances") {
  std::mt19937_64 rng(19);
  for (int it = 0; it < 25; ++it) {
    GenConfig cfg;
    cfg.n = 8 + static_cast<int>(rng() % 57);
    cfg.m = 12;
    cfg.r = 2;
    cfg.seed = rng();
    ProblemInstance inst = generate_instance(cfg);
    auto xs = expand_demand_instances(inst);
    for (const TreeNetwork& net : inst.networks) {
      RootedDecomposition dec = build_ideal(net);
      LayeredDecomposition lay = layer_from_decomposition(inst, net, dec, xs);
      CHECK(lay.delta_measured <= 6);
      CHECK_FALSE(check_interference(lay, xs));

      // same group means same capture depth; distinct captures cannot overlap
      for (auto& g : lay.groups)
        for (int a : g)
          for (int b : g) {
            CHECK(dec.depth[lay.capture.at(a)] == dec.depth[lay.capture.at(b)]);
            if (lay.capture.at(a) != lay.capture.at(b)) CHECK_FALSE(overlapping(xs[a], xs[b]));
          }
    }
  }
}

TEST_CASE("line layering groups by length class") {
  ProblemInstance inst = make_line_instance(
      10, 1, {{3, 7, 5}, {1, 1, 1}, {2, 4, 2}, {1, 10, 10}});
  auto xs = expand_demand_instances(inst);
  REQUIRE(xs.size() == 1 + 1 + 2 + 1);
  LayeredDecomposition lay = layer_line_by_length(inst, xs);
  CHECK(lay.net_id == 0);
  CHECK(lay.delta == 3);
  // lmin 1, lmax 10: classes [1,2), [2,4), [4,8), [8,16)
  CHECK(lay.levels == 5);
  for (const DemandInstance& di : xs) {
    int len = di.end - di.start + 1;
    int want = len >= 8 ? 3 : len >= 4 ? 2 : len >= 2 ? 1 : 0;
    CHECK(group_of(lay, di.id) == want);
  }
  // s=3 e=7 -> slots {3,5,7}
  const DemandInstance& d0 = xs[0];
  REQUIRE(d0.start == 3);
  CHECK(lay.critical.at(0) == std::vector<int>{2, 4, 6});
  // unit length collapses to one slot
  CHECK(lay.critical.at(1).size() == 1);
  CHECK_FALSE(check_interference(lay, xs));
}

TEST_CASE("equal lengths make a single group") {
  ProblemInstance inst = make_line_instance(8, 2, {{1, 4, 3}, {5, 8, 3}, {2, 6, 3}});
  auto xs = expand_demand_instances(inst);
  LayeredDecomposition lay = layer_line_by_length(inst, xs);
  CHECK(lay.levels == 1);
  CHECK(lay.groups[0].size() == xs.size());
  CHECK_FALSE(check_interference(lay, xs));
  CHECK_THROWS_AS(layer_line_by_length(inst, {}), std::invalid_argument);
}

TEST_CASE("interference property holds on random line instances") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 25; ++it) {
    GenConfig cfg;
    cfg.kind = Mode::line;
    cfg.n = 8 + static_cast<int>(rng() % 57);
    cfg.m = 12;
    cfg.r = 2;
    cfg.max_starts = 4;
    cfg.seed = rng();
    ProblemInstance inst = generate_instance(cfg);
    auto xs = expand_demand_instances(inst);
    if (xs.empty()) continue;
    LayeredDecomposition lay = layer_line_by_length(inst, xs);
    CHECK(lay.delta_measured <= 3);
    CHECK_FALSE(check_interference(lay, xs));
  }
}

TEST_CASE("interference checker reports a violating pair") {
  ProblemInstance inst = make_tree_instance({shared_edge_tree()}, {{1, 10}, {2, 3}});
  auto xs = expand_demand_instances(inst);
  LayeredDecomposition lay;
  lay.net_id = 1;
  lay.levels = 2;
  lay.groups = {{0}, {1}};
  lay.critical[0] = {};  // empty critical set cannot interfere
  lay.critical[1] = xs[1].edges_global;
  auto bad = check_interference(lay, xs);
  REQUIRE(bad);
  CHECK(bad->d1 == 0);
  CHECK(bad->d2 == 1);

  LayeredDecomposition solo;
  solo.levels = 1;
  solo.groups = {{0}};
  solo.critical[0] = xs[0].edges_global;
  CHECK_FALSE(check_interference(solo, xs));
}
