#include "chanflow/report.hpp"

#include <chrono>
#include <sstream>

#include <json.hpp>

namespace chanflow {

using nlohmann::json;

std::string algo_name(Algo a) {
  switch (a) {
    case Algo::dist_unit: return "dist-unit";
    case Algo::dist_height: return "dist-height";
    case Algo::dist_line_unit: return "dist-line-unit";
    case Algo::dist_line_height: return "dist-line-height";
    case Algo::seq_tree: return "seq-tree";
  }
  return "?";
}

std::optional<Algo> algo_from_name(const std::string& name) {
  for (Algo a : {Algo::dist_unit, Algo::dist_height, Algo::dist_line_unit,
                 Algo::dist_line_height, Algo::seq_tree})
    if (algo_name(a) == name) return a;
  return std::nullopt;
}

Rat ratio_bound(Algo a, const Rat& eps, bool single_tree) {
  switch (a) {
    case Algo::dist_unit: return Rat(7) + eps;
    case Algo::dist_height: return Rat(80) + 2 * eps;
    case Algo::dist_line_unit: return Rat(4) + eps;
    case Algo::dist_line_height: return Rat(23) + 2 * eps;
    case Algo::seq_tree: return single_tree ? Rat(2) : Rat(3);
  }
  return Rat(1);
}

namespace {

bool unit_heights(const std::vector<DemandInstance>& xs) {
  for (const DemandInstance& di : xs)
    if (di.height != 1) return false;
  return true;
}

Rat min_satisfaction(const std::vector<DemandInstance>& xs, const DualState& duals,
                     RaiseMode mode) {
  Rat lam = 1;
  for (const DemandInstance& di : xs) {
    Rat sat = Rat(1) - slackness(di, duals, mode) / di.profit;
    if (sat < lam) lam = sat;
  }
  return lam;
}

RoundStats merge_stats(const RoundStats& a, const RoundStats& b) {
  RoundStats out = a;
  out.rounds += b.rounds;
  out.mis_calls += b.mis_calls;
  out.mis_rounds += b.mis_rounds;
  out.messages += b.messages;
  out.max_msg_bits = std::max(out.max_msg_bits, b.max_msg_bits);
  out.epochs = std::max(out.epochs, b.epochs);
  out.stages_per_epoch = std::max(out.stages_per_epoch, b.stages_per_epoch);
  out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
  return out;
}

}  // namespace

RunReport run_pipeline(const ProblemInstance& inst, const RunConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.digest = cfg.digest;
  rep.algo = cfg.algo;
  rep.mode = inst.mode;

  bool line_algo = cfg.algo == Algo::dist_line_unit || cfg.algo == Algo::dist_line_height;
  if ((inst.mode == Mode::line) != line_algo)
    throw std::invalid_argument("algorithm does not match the instance mode");

  std::vector<DemandInstance> xs = expand_demand_instances(inst);
  FeasMode fmode = FeasMode::capacity;

  SimConfig sim;
  sim.seed = cfg.seed;
  sim.eps = cfg.eps;
  sim.c_steps = cfg.c_steps;
  sim.h_min = cfg.h_min;

  if (cfg.algo == Algo::seq_tree) {
    SeqResult res = sequential_tree_solve(inst, xs, cfg.single_tree);
    rep.sol = res.sol;
    rep.trace = res.records;
    rep.lambda = min_satisfaction(xs, res.duals, RaiseMode::unit);
    rep.delta = 2;
    fmode = FeasMode::disjoint;
    for (const TreeNetwork& net : inst.networks) {
      RootedDecomposition dec = build_root_fixing(net, 1);
      DecompositionReport dr = analyze_decomposition(net, dec);
      rep.theta = std::max(rep.theta, dr.theta);
      rep.depth = std::max(rep.depth, dr.depth);
    }
  } else if (cfg.algo == Algo::dist_unit || cfg.algo == Algo::dist_line_unit) {
    if (!unit_heights(xs))
      throw std::invalid_argument("unit-height algorithm on an instance with heights");
    sim.mode = RaiseMode::unit;
    std::vector<int> ids(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) ids[i] = static_cast<int>(i);
    std::vector<LayeredDecomposition> lays = make_layerings(inst, xs);
    AlgoParams params = derive_params(xs, ids, lays, sim);
    DistResult res = run_distributed(inst, xs, ids, lays, params, sim);
    rep.sol = res.sol;
    rep.trace = res.trace;
    rep.stats = res.stats;
    rep.lambda = res.lambda_achieved;
    rep.xi = params.xi;
    rep.delta = params.delta;
    fmode = res.fmode;
  } else {
    sim.mode = RaiseMode::height;
    OverallResult res = run_overall_height(inst, xs, sim);
    rep.sol = res.sol;
    rep.lambda = 1;
    if (res.wide) {
      rep.trace.insert(rep.trace.end(), res.wide->trace.begin(), res.wide->trace.end());
      rep.stats = merge_stats(rep.stats, res.wide->stats);
      rep.lambda = std::min(rep.lambda, res.wide->lambda_achieved);
      rep.xi = res.wide->params.xi;
      rep.delta = std::max(rep.delta, res.wide->params.delta);
    }
    if (res.narrow) {
      rep.trace.insert(rep.trace.end(), res.narrow->trace.begin(), res.narrow->trace.end());
      rep.stats = merge_stats(rep.stats, res.narrow->stats);
      rep.lambda = std::min(rep.lambda, res.narrow->lambda_achieved);
      rep.xi = res.narrow->params.xi;
      rep.delta = std::max(rep.delta, res.narrow->params.delta);
    }
  }

  if (inst.mode == Mode::tree && cfg.algo != Algo::seq_tree) {
    for (const TreeNetwork& net : inst.networks) {
      RootedDecomposition dec = build_ideal(net);
      DecompositionReport dr = analyze_decomposition(net, dec);
      rep.theta = std::max(rep.theta, dr.theta);
      rep.depth = std::max(rep.depth, dr.depth);
    }
  }

  if (auto bad = check_feasible(inst, xs, rep.sol.chosen, fmode))
    throw std::logic_error("pipeline produced an infeasible solution: " + bad->describe());

  if (cfg.with_oracle) {
    OracleResult opt = exact_optimum(inst, xs, fmode, cfg.oracle_cap);
    rep.optimum = opt.optimum;
    if (rep.sol.profit > 0) rep.ratio = opt.optimum / rep.sol.profit;
  }

  auto t1 = std::chrono::steady_clock::now();
  rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return rep;
}

namespace {

json stats_obj(const RoundStats& stats) {
  json steps = json::array();
  for (const StepStat& st : stats.steps)
    steps.push_back({{"k", st.epoch},
                     {"j", st.stage},
                     {"t", st.step},
                     {"u", st.u_size},
                     {"mis", st.mis_size},
                     {"mis_rounds", st.mis_rounds},
                     {"messages", st.messages}});
  return {{"rounds", stats.rounds},
          {"mis_calls", stats.mis_calls},
          {"mis_rounds", stats.mis_rounds},
          {"messages", stats.messages},
          {"max_msg_bits", stats.max_msg_bits},
          {"epochs", stats.epochs},
          {"stages_per_epoch", stats.stages_per_epoch},
          {"steps", steps}};
}

}  // namespace

std::string report_json(const RunReport& rep, bool with_wall) {
  json j;
  j["digest"] = rep.digest;
  j["algorithm"] = algo_name(rep.algo);
  j["mode"] = rep.mode == Mode::tree ? "tree" : "line";
  j["chosen"] = rep.sol.chosen;
  j["profit"] = rat_str(rep.sol.profit);
  j["profit_double"] = rat_double(rep.sol.profit);
  if (rep.optimum) j["optimum"] = rat_str(*rep.optimum);
  if (rep.ratio) {
    j["ratio"] = rat_str(*rep.ratio);
    j["ratio_double"] = rat_double(*rep.ratio);
  }
  j["lambda"] = rat_str(rep.lambda);
  j["xi"] = rat_str(rep.xi);
  j["delta"] = rep.delta;
  j["theta"] = rep.theta;
  j["depth"] = rep.depth;
  j["raises"] = rep.trace.size();
  j["stats"] = stats_obj(rep.stats);
  if (with_wall) j["wall_ms"] = rep.wall_ms;
  return j.dump(2) + "\n";
}

std::string trace_lines(const ProblemInstance& inst, const std::vector<RaiseRecord>& trace) {
  std::ostringstream out;
  for (const RaiseRecord& rec : trace) {
    json pi = json::array();
    for (int e : rec.pi) {
      EdgeRef ref = edge_ref_of(inst, e);
      pi.push_back({ref.net, ref.u, ref.v});
    }
    json j{{"f1", rec.f1},
           {"f2", rec.f2},
           {"f3", rec.f3},
           {"instance", rec.instance_id},
           {"delta_num", numerator(rec.delta).str()},
           {"delta_den", denominator(rec.delta).str()},
           {"pi", pi}};
    out << j.dump() << "\n";
  }
  return out.str();
}

std::string stats_json(const RoundStats& stats) { return stats_obj(stats).dump(2) + "\n"; }

std::string decompositions_json(const ProblemInstance& inst, DecompKind kind) {
  json arr = json::array();
  for (const TreeNetwork& net : inst.networks) {
    RootedDecomposition dec;
    switch (kind) {
      case DecompKind::root_fixing: dec = build_root_fixing(net, 1); break;
      case DecompKind::balancing: dec = build_balancing(net); break;
      case DecompKind::ideal: dec = build_ideal(net); break;
    }
    DecompositionReport dr = analyze_decomposition(net, dec);
    json j;
    j["net"] = net.id;
    j["kind"] = kind == DecompKind::root_fixing   ? "root-fixing"
                : kind == DecompKind::balancing ? "balancing"
                                                : "ideal";
    j["root"] = dec.root;
    j["parent"] = std::vector<int>(dec.parent.begin() + 1, dec.parent.end());
    j["report"] = {{"depth", dr.depth}, {"theta", dr.theta}};
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

std::string report_csv_header() {
  return "digest,algorithm,profit,optimum,ratio,lambda,rounds,messages,wall_ms\n";
}

std::string report_csv_row(const RunReport& rep) {
  std::ostringstream out;
  out << rep.digest << ',' << algo_name(rep.algo) << ',' << rat_str(rep.sol.profit) << ',';
  if (rep.optimum) out << rat_str(*rep.optimum);
  out << ',';
  if (rep.ratio) out << rat_double(*rep.ratio);
  out << ',' << rat_str(rep.lambda) << ',' << rep.stats.rounds << ',' << rep.stats.messages
      << ',' << rep.wall_ms << "\n";
  return out.str();
}

}  // namespace chanflow
