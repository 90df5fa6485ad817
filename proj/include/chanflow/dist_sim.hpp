#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "chanflow/layering.hpp"
#include "chanflow/model.hpp"
#include "chanflow/primal_dual.hpp"

namespace chanflow {

// Synchronous simulation of the distributed two-phase algorithm. The engine
// keeps a global dual state as ground truth and mirrors it in per-processor
// views that are updated only through messages; the two are checked against
// each other after every exchange.

struct SimConfig {
  std::uint64_t seed{1};
  Rat eps{make_rat(1, 10)};
  RaiseMode mode{RaiseMode::unit};
  int c_steps{2};
  std::optional<Rat> h_min{};  // narrow height floor; inferred when absent
  std::optional<long long> c_narrow{};  // xi constant for narrow mode; default 2(1+2*delta^2)
};

struct Message {
  enum class Kind { raise, select };
  Kind kind{Kind::raise};
  int sender{};  // processor id
  int f1{}, f2{}, f3{};
  int instance_id{};
  Rat delta{0};
  std::vector<int> pi;  // global edge ids, raise only
  long long bits() const;
};

struct ProcessorState {
  int id{};
  std::vector<int> owned;       // demand instance ids, ascending
  Rat alpha{0};                 // dual of the one owned demand
  std::map<int, Rat> beta;      // tracked edges: union of owned instances' paths
  std::vector<RaiseRecord> stack;
  std::vector<int> heard;       // selected instance ids known locally, phase two
};

struct StepStat {
  int epoch{}, stage{}, step{};
  int u_size{}, mis_size{}, mis_rounds{};
  long long messages{};
};

struct RoundStats {
  long long rounds{};     // mis_rounds + one exchange per step + one per pop round
  long long mis_calls{};
  long long mis_rounds{};
  long long messages{};
  long long max_msg_bits{};
  int epochs{};
  int stages_per_epoch{};
  std::vector<StepStat> steps;
};

struct DistResult {
  Solution sol;
  DualState duals;
  std::vector<StackEntry> stack;
  std::vector<RaiseRecord> trace;  // every raise in execution order
  RoundStats stats;
  Rat lambda_achieved{0};
  long long declared_msg_bits{};
  AlgoParams params;
  FeasMode fmode{FeasMode::disjoint};
};

struct OverallResult {
  Solution sol;
  std::optional<DistResult> wide, narrow;
  Rat h_min_used{};
};

// adjacency over processor indices; edge iff access sets intersect
std::vector<std::vector<int>> build_communication_graph(const ProblemInstance& inst);

// adjacency aligned with `active` (positions, not ids); edge iff conflicting
std::vector<std::vector<int>> build_conflict_graph(const std::vector<DemandInstance>& xs,
                                                   const std::vector<int>& active);

// Luby's randomized MIS. Returns vertex indices; rounds_out gets the number of
// internal rounds. Priorities are drawn from rng in vertex order each round.
std::vector<int> luby_mis(const std::vector<std::vector<int>>& adj, std::mt19937_64& rng,
                          int* rounds_out = nullptr);

// core loop with caller-supplied priorities; draw(round, active) returns one
// priority per active vertex, aligned with it
std::vector<int> luby_mis_core(
    const std::vector<std::vector<int>>& adj,
    const std::function<std::vector<std::uint64_t>(int, const std::vector<int>&)>& draw,
    int* rounds_out);

// layerings for the active instances: ideal decomposition per tree network, or
// one length-class layering for line mode
std::vector<LayeredDecomposition> make_layerings(const ProblemInstance& inst,
                                                 const std::vector<DemandInstance>& active);

// schedule parameters for the active set; delta = max declared critical size
AlgoParams derive_params(const std::vector<DemandInstance>& xs, const std::vector<int>& active,
                         const std::vector<LayeredDecomposition>& lays, const SimConfig& cfg);

// full two-phase run over the active ids; xs must be the full expansion with
// id == index, layering groups must partition the active set
DistResult run_distributed(const ProblemInstance& inst, const std::vector<DemandInstance>& xs,
                           const std::vector<int>& active,
                           const std::vector<LayeredDecomposition>& lays,
                           const AlgoParams& params, const SimConfig& cfg);

// re-executes the recorded schedule centrally; must match the simulation bit
// for bit
std::pair<DualState, Solution> replay_centralized(const ProblemInstance& inst,
                                                  const std::vector<DemandInstance>& xs,
                                                  const std::vector<LayeredDecomposition>& lays,
                                                  const std::vector<StackEntry>& stack,
                                                  RaiseMode mode, FeasMode fmode);

// wide/narrow split, sub-runs, per-network merge by higher profit
OverallResult run_overall_height(const ProblemInstance& inst,
                                 const std::vector<DemandInstance>& xs, const SimConfig& cfg);

}  // namespace chanflow
