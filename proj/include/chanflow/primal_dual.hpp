// Dual-state bookkeeping and the raise rules. A raise spends the entire
// slackness of an instance in one shot, leaving its constraint exactly tight;
// since duals only grow, every instance is raised at most once per run. The
// second phase pops the recorded raise tuples in reverse and greedily keeps
// whatever still fits. Everything here is exact rational arithmetic.
#pragma once

#include <optional>
#include <vector>

#include "chanflow/model.hpp"
#include "chanflow/rational.hpp"

namespace chanflow {

// unit: p - alpha - sum beta; height: p - alpha - h * sum beta
enum class RaiseMode { unit, height };

struct DualState {
  std::vector<Rat> alpha;  // by demand index
  std::vector<Rat> beta;   // by global edge index

  void init(const ProblemInstance& inst) {
    alpha.assign(inst.demands.size(), Rat(0));
    beta.assign(inst.total_edges, Rat(0));
  }
  Rat objective() const;  // sum of all duals
};

struct RaiseRecord {
  int instance_id{-1};
  Rat delta;
  std::vector<int> pi;  // sorted global edge indices
  int f1{0}, f2{0}, f3{0};  // epoch, stage, step
};

// One pushed stack level: the independent set raised under one tuple.
struct StackEntry {
  std::vector<int> set;  // instance ids, ascending
  int f1{0}, f2{0}, f3{0};
};

struct AlgoParams {
  Rat eps;
  RaiseMode mode{RaiseMode::unit};
  int delta{0};       // critical-set bound from the layering
  Rat xi;             // per-stage satisfaction base
  Rat h_min{1};       // narrow mode floor
  int b{0};           // stages per epoch: smallest b with xi^b <= eps
  long long step_cap{0};  // per-stage safety cap on steps
};

// xi = 2(delta+1) / (2(delta+1)+1)
AlgoParams make_unit_params(int delta, const Rat& eps, const Rat& pmax, const Rat& pmin,
                            int c_steps = 2);
// xi = c/(c+h_min), default c = 2(1+2 delta^2)
AlgoParams make_narrow_params(int delta, const Rat& eps, const Rat& h_min, const Rat& pmax,
                              const Rat& pmin, long long c = 0, int c_steps = 2);

Rat slackness(const DemandInstance& di, const DualState& duals, RaiseMode mode);

// LHS of the instance's dual constraint >= level * p(d)?
bool xi_satisfied(const DemandInstance& di, const DualState& duals, const Rat& level,
                  RaiseMode mode);

// delta = s/(|pi|+1); alpha += delta, beta(e in pi) += delta. Throws if s <= 0.
RaiseRecord raise_unit(const DemandInstance& di, const std::vector<int>& pi, DualState& duals);

// delta = s/(1+2h|pi|^2); alpha += delta, beta(e in pi) += 2|pi| delta.
// Narrow instances only (h <= 1/2). Throws if s <= 0 or the instance is wide.
RaiseRecord raise_height(const DemandInstance& di, const std::vector<int>& pi, DualState& duals);

// Pops entries newest-first, instances in ascending id inside an entry, and
// keeps every instance that preserves feasibility in the given mode.
Solution second_phase(const ProblemInstance& inst, const std::vector<DemandInstance>& instances,
                      const std::vector<StackEntry>& stack, FeasMode fmode);

struct DualCheck {
  std::optional<int> violator;  // instance id failing the scaled constraint
  Rat objective;                // unscaled sum of duals
};

// Verifies every instance satisfies its constraint under alpha/lambda,
// beta/lambda, i.e. is lambda-satisfied by the raw duals.
DualCheck scale_and_check_dual(const std::vector<DemandInstance>& instances,
                               const DualState& duals, const Rat& lambda, RaiseMode mode);

struct SeqResult {
  Solution sol;
  DualState duals;
  std::vector<RaiseRecord> records;
  std::vector<StackEntry> stack;
};

// Single-machine variant: per network hang the tree from vertex 1, process
// instances by descending capture depth, raise any instance still slack with
// pi = the wings of its capture node, then run the usual second phase with
// edge-disjoint feasibility. With single_tree (requires exactly one network)
// alpha is never raised and delta = s/|pi|.
SeqResult sequential_tree_solve(const ProblemInstance& inst,
                                const std::vector<DemandInstance>& instances, bool single_tree);

}  // namespace chanflow
