#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chanflow/decomposition.hpp"
#include "chanflow/dist_sim.hpp"
#include "chanflow/model.hpp"
#include "chanflow/oracle.hpp"
#include "chanflow/primal_dual.hpp"

namespace chanflow {

// the five pipeline entry points
enum class Algo { dist_unit, dist_height, dist_line_unit, dist_line_height, seq_tree };

std::string algo_name(Algo a);
std::optional<Algo> algo_from_name(const std::string& name);

// the certified approximation factor for an algorithm at a given epsilon
Rat ratio_bound(Algo a, const Rat& eps, bool single_tree);

struct RunConfig {
  Algo algo{Algo::dist_unit};
  Rat eps{make_rat(1, 10)};
  std::uint64_t seed{1};
  bool with_oracle{false};
  int oracle_cap{24};
  std::optional<Rat> h_min{};
  int c_steps{2};
  bool single_tree{false};  // seq_tree variant with a single network
  std::string digest;       // instance content digest, carried into the report
};

struct RunReport {
  std::string digest;
  Algo algo{Algo::dist_unit};
  Mode mode{Mode::tree};
  Solution sol;
  std::optional<Rat> optimum;
  std::optional<Rat> ratio;  // optimum / profit, when the oracle ran and profit > 0
  Rat lambda{0};
  Rat xi{0};  // stage threshold in effect; narrow side wins for the overall runs
  int delta{0};
  int theta{0};  // 0 for line mode
  int depth{0};
  RoundStats stats;  // all zero for seq_tree
  std::vector<RaiseRecord> trace;
  double wall_ms{0};
};

// decompose -> layer -> two phases -> feasibility check -> optional oracle.
// Throws std::invalid_argument on an algorithm/instance mode mismatch and
// OracleCapExceeded when with_oracle hits the cap.
RunReport run_pipeline(const ProblemInstance& inst, const RunConfig& cfg);

// deterministic JSON text; wall_ms is the only field that varies between
// identical runs
std::string report_json(const RunReport& rep, bool with_wall = true);

// one JSON object per line, in raise order
std::string trace_lines(const ProblemInstance& inst, const std::vector<RaiseRecord>& trace);

std::string stats_json(const RoundStats& stats);

// decomposition dumps for every network of a tree instance
std::string decompositions_json(const ProblemInstance& inst, DecompKind kind);

// digest,algorithm,profit,optimum,ratio,lambda,rounds,messages,wall_ms
std::string report_csv_header();
std::string report_csv_row(const RunReport& rep);

}  // namespace chanflow
