// Rooted tree decompositions of a network T: a rooted tree H on the same
// vertex set such that (i) for any two vertices on a path in T the path also
// visits their H-LCA, and (ii) every C(z) = {z} + H-descendants induces a
// connected subtree of T. Pivot set of z = network neighborhood of C(z).
//
// Three builders:
//   root_fixing  pick a root, H = T rooted there (theta = 1, depth up to n)
//   balancing    recursive balancer split (depth <= ceil(log2 n) + 1)
//   ideal        balancing with junction rewiring, theta <= 2 and
//                depth <= 2*ceil(log2 n) + 1
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chanflow/model.hpp"

namespace chanflow {

enum class DecompKind { root_fixing, balancing, ideal };

struct RootedDecomposition {
  int net_id{0};
  DecompKind kind{DecompKind::root_fixing};
  int root{0};
  std::vector<int> parent;  // 1-based, parent[root] = 0
  std::vector<int> depth;   // root has depth 1
  std::vector<std::vector<int>> children;  // sorted

  void finalize();  // children and depth from parent
};

struct DecompositionReport {
  int depth{0};
  int theta{0};
  std::vector<std::vector<int>> pivots;  // per vertex, sorted
};

struct DecompViolation {
  enum class Kind { malformed, edge_unrelated, component_disconnected };
  Kind kind;
  int a{0}, b{0};  // offending edge or vertex (in a, b unused for vertex kinds)
  std::string describe() const;
};

// Lowest-id vertex of comp whose removal splits comp into parts of size
// <= floor(|comp|/2) each. comp must induce a connected subtree.
int find_balancer(const TreeNetwork& net, const std::vector<int>& comp);

// Connected parts of comp minus z, each sorted, ordered by smallest member.
std::vector<std::vector<int>> split_component(const TreeNetwork& net,
                                              const std::vector<int>& comp, int z);

RootedDecomposition build_root_fixing(const TreeNetwork& net, int root);
RootedDecomposition build_balancing(const TreeNetwork& net);
RootedDecomposition build_ideal(const TreeNetwork& net);

// Unique vertex common to the three pairwise paths among a, b, c.
int find_junction(const TreeNetwork& net, int a, int b, int c);

// Network neighborhood of C(z); sorted.
std::vector<int> pivot_set(const TreeNetwork& net, const RootedDecomposition& dec, int z);

DecompositionReport analyze_decomposition(const TreeNetwork& net, const RootedDecomposition& dec);

// Checks the two defining properties; returns the first violation found.
std::optional<DecompViolation> validate_decomposition(const TreeNetwork& net,
                                                      const RootedDecomposition& dec);

}  // namespace chanflow
