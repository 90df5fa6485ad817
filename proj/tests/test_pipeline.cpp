#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "chanflow/generator.hpp"
#include "chanflow/instance_io.hpp"
#include "chanflow/report.hpp"
#include "fixtures.hpp"

using namespace chanflow;
using namespace chanflow::testing;
using nlohmann::json;

namespace {

GenConfig small_tree_cfg(uint64_t seed) {
  GenConfig cfg;
  cfg.n = 16;
  cfg.m = 8;
  cfg.r = 2;
  cfg.seed = seed;
  return cfg;
}

RunConfig run_cfg(Algo algo, uint64_t seed, bool oracle) {
  RunConfig cfg;
  cfg.algo = algo;
  cfg.seed = seed;
  cfg.with_oracle = oracle;
  cfg.digest = "t";
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("algorithm names round-trip and the ratio bounds are pinned") {
  for (Algo a : {Algo::dist_unit, Algo::dist_height, Algo::dist_line_unit,
                 Algo::dist_line_height, Algo::seq_tree}) {
    auto back = algo_from_name(algo_name(a));
    REQUIRE(back.has_value());
    CHECK(*back == a);
  }
  CHECK_FALSE(algo_from_name("dist").has_value());

  Rat eps = make_rat(1, 10);
  CHECK(ratio_bound(Algo::dist_unit, eps, false) == make_rat(71, 10));
  CHECK(ratio_bound(Algo::dist_height, eps, false) == make_rat(401, 5));
  CHECK(ratio_bound(Algo::dist_line_unit, eps, false) == make_rat(41, 10));
  CHECK(ratio_bound(Algo::dist_line_height, eps, false) == make_rat(116, 5));
  CHECK(ratio_bound(Algo::seq_tree, eps, false) == 3);
  CHECK(ratio_bound(Algo::seq_tree, eps, true) == 2);
}

TEST_CASE("generation is deterministic per seed and validates") {
  GenConfig cfg = small_tree_cfg(7);
  std::string a = serialize_instance(generate_instance(cfg));
  std::string b = serialize_instance(generate_instance(cfg));
  CHECK(a == b);
  cfg.seed = 8;
  CHECK(a != serialize_instance(generate_instance(cfg)));

  for (uint64_t seed : {1, 2, 3}) {
    GenConfig t = small_tree_cfg(seed);
    CHECK(generate_instance(t).validate().empty());
    t.kind = Mode::line;
    t.heights = GenConfig::Heights::mixed;
    ProblemInstance line = generate_instance(t);
    CHECK(line.validate().empty());
    CHECK(serialize_instance(line) == serialize_instance(generate_instance(t)));
  }
}

TEST_CASE("instance files survive a serialize-parse round trip") {
  GenConfig cfg = small_tree_cfg(11);
  for (Mode kind : {Mode::tree, Mode::line}) {
    cfg.kind = kind;
    std::string text = serialize_instance(generate_instance(cfg));
    CHECK(serialize_instance(parse_instance(text)) == text);
  }
}

TEST_CASE("tight line windows expand to one start per accessible resource") {
  ProblemInstance inst =
      make_line_instance(8, 2, {{1, 3, 3}, {4, 7, 4}, {2, 5, 4, 1, 1, 1, {2}}});
  std::vector<DemandInstance> xs = expand_demand_instances(inst);
  CHECK(xs.size() == 5);  // two demands on both resources, one restricted
}

TEST_CASE("sequential pipeline on a two-demand tree emits a feasible report") {
  ProblemInstance inst = make_tree_instance({wide_tree()}, {{4, 13, 3}, {1, 10}});
  RunReport rep = run_pipeline(inst, run_cfg(Algo::seq_tree, 1, true));
  CHECK(rep.sol.profit >= 1);
  CHECK_FALSE(check_feasible(inst, expand_demand_instances(inst), rep.sol.chosen,
                             FeasMode::disjoint));
  CHECK(rep.lambda == 1);
  CHECK(rep.optimum.has_value());
  CHECK(rep.stats.rounds == 0);
  CHECK(rep.trace.size() >= 1);
  CHECK(rep.theta == 1);  // root fixing
  std::string text = report_json(rep, false);
  CHECK(text.find("wall_ms") == std::string::npos);
  json j = json::parse(text);
  CHECK(j["algorithm"] == "seq-tree");
  CHECK(j["raises"] == rep.trace.size());
}

TEST_CASE("distributed pipelines are deterministic and certified") {
  GenConfig gcfg = small_tree_cfg(21);
  gcfg.m = 5;
  ProblemInstance inst = generate_instance(gcfg);
  RunConfig cfg = run_cfg(Algo::dist_unit, 21, true);

  RunReport a = run_pipeline(inst, cfg);
  RunReport b = run_pipeline(inst, cfg);
  CHECK(report_json(a, false) == report_json(b, false));
  CHECK(trace_lines(inst, a.trace) == trace_lines(inst, b.trace));

  REQUIRE(a.ratio.has_value());
  CHECK(*a.ratio <= ratio_bound(Algo::dist_unit, cfg.eps, false));
  CHECK(a.lambda >= 1 - cfg.eps);
  CHECK(a.xi == make_rat(14, 15));
  CHECK(a.delta == 6);

  RunConfig bare = run_cfg(Algo::dist_unit, 21, false);
  RunReport c = run_pipeline(inst, bare);
  CHECK_FALSE(c.optimum.has_value());
  CHECK_FALSE(c.ratio.has_value());
  CHECK(c.sol.profit == a.sol.profit);
}

TEST_CASE("line pipeline reports the line parameters") {
  GenConfig gcfg = small_tree_cfg(5);
  gcfg.kind = Mode::line;
  gcfg.m = 5;
  ProblemInstance inst = generate_instance(gcfg);
  RunReport rep = run_pipeline(inst, run_cfg(Algo::dist_line_unit, 5, true));
  CHECK(rep.delta == 3);
  CHECK(rep.xi == make_rat(8, 9));
  CHECK(rep.theta == 0);
  REQUIRE(rep.ratio.has_value());
  CHECK(*rep.ratio <= ratio_bound(Algo::dist_line_unit, make_rat(1, 10), false));
}

TEST_CASE("height pipelines merge the wide and narrow sides") {
  for (Mode kind : {Mode::tree, Mode::line}) {
    GenConfig gcfg = small_tree_cfg(kind == Mode::tree ? 31 : 32);
    gcfg.kind = kind;
    gcfg.m = 5;
    gcfg.heights = GenConfig::Heights::mixed;
    ProblemInstance inst = generate_instance(gcfg);
    Algo algo = kind == Mode::tree ? Algo::dist_height : Algo::dist_line_height;
    RunConfig cfg = run_cfg(algo, 9, true);
    RunReport rep = run_pipeline(inst, cfg);
    CHECK_FALSE(check_feasible(inst, expand_demand_instances(inst), rep.sol.chosen,
                               FeasMode::capacity));
    REQUIRE(rep.ratio.has_value());
    CHECK(*rep.ratio <= ratio_bound(algo, cfg.eps, false));
    CHECK(rep.lambda >= 1 - cfg.eps);
    CHECK(report_json(rep, false) == report_json(run_pipeline(inst, cfg), false));
  }
}

TEST_CASE("pipeline rejects mismatched algorithms") {
  ProblemInstance tree = make_tree_instance({wide_tree()}, {{4, 13}});
  ProblemInstance line = make_line_instance(6, 1, {{1, 3, 2}});
  CHECK_THROWS_AS(run_pipeline(tree, run_cfg(Algo::dist_line_unit, 1, false)),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_pipeline(line, run_cfg(Algo::dist_unit, 1, false)),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_pipeline(line, run_cfg(Algo::seq_tree, 1, false)),
                  std::invalid_argument);

  ProblemInstance narrow = make_tree_instance({wide_tree()}, {{4, 13, 4, 1, 4}});
  CHECK_THROWS_AS(run_pipeline(narrow, run_cfg(Algo::dist_unit, 1, false)),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_pipeline(narrow, run_cfg(Algo::seq_tree, 1, false)),
                  std::invalid_argument);

  RunConfig capped = run_cfg(Algo::dist_unit, 1, true);
  capped.oracle_cap = 0;
  CHECK_THROWS_AS(run_pipeline(tree, capped), OracleCapExceeded);
}

TEST_CASE("report text forms parse back") {
  GenConfig gcfg = small_tree_cfg(41);
  gcfg.m = 4;
  ProblemInstance inst = generate_instance(gcfg);
  RunReport rep = run_pipeline(inst, run_cfg(Algo::dist_unit, 41, true));

  json j = json::parse(report_json(rep));
  for (const char* key : {"digest", "algorithm", "mode", "chosen", "profit", "optimum",
                          "ratio", "lambda", "xi", "delta", "theta", "depth", "stats",
                          "wall_ms"})
    CHECK(j.contains(key));
  CHECK(json::parse(stats_json(rep.stats)).contains("rounds"));

  std::istringstream lines(trace_lines(inst, rep.trace));
  std::string line;
  size_t count = 0;
  while (std::getline(lines, line)) {
    json rec = json::parse(line);
    CHECK(rec.contains("f1"));
    CHECK(rec["pi"].is_array());
    ++count;
  }
  CHECK(count == rep.trace.size());

  json decs = json::parse(decompositions_json(inst, DecompKind::ideal));
  REQUIRE(decs.size() == inst.networks.size());
  for (const json& d : decs) {
    CHECK(d["report"]["theta"] <= 2);
    CHECK(d["parent"].size() == 16);
  }

  std::string row = report_csv_row(rep);
  std::string header = report_csv_header();
  CHECK(std::count(row.begin(), row.end(), ',') == 8);
  CHECK(std::count(header.begin(), header.end(), ',') == 8);
  CHECK(row.substr(0, row.find(',')) == rep.digest);
}

namespace {

int sh(const std::string& cmd) {
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

const std::string kBin = CHANFLOW_BIN;

}  // namespace

TEST_CASE("command line drives the whole pipeline") {
  std::string inst = "pipeline_cli_inst.json";
  std::string inst2 = "pipeline_cli_inst2.json";
  std::string rep = "pipeline_cli_report.json";
  std::string trace = "pipeline_cli_trace.jsonl";

  CHECK(sh(kBin + " gen --n 12 --m 5 --r 2 --seed 7 -o " + inst) == 0);
  CHECK(sh(kBin + " gen --n 12 --m 5 --r 2 --seed 7 -o " + inst2) == 0);
  CHECK(slurp(inst) == slurp(inst2));

  CHECK(sh(kBin + " validate " + inst + " > /dev/null") == 0);
  CHECK(sh(kBin + " validate /dev/null > /dev/null 2>&1") == 2);
  CHECK(sh(kBin + " decompose " + inst + " --kind ideal > /dev/null") == 0);

  CHECK(sh(kBin + " run " + inst + " --algo dist-unit --oracle --seed 3 -o " + rep +
           " --trace " + trace) == 0);
  json j = json::parse(slurp(rep));
  CHECK(j["digest"] == digest_file(inst));
  CHECK(j["ratio_double"].get<double>() <= 7.1);
  std::ifstream tr(trace);
  std::string first;
  CHECK(std::getline(tr, first));
  CHECK(json::parse(first).contains("instance"));

  CHECK(sh(kBin + " run " + inst + " --algo dist-line-unit 2> /dev/null") == 2);
  CHECK(sh(kBin + " run " + inst + " --algo dist-unit --oracle --oracle-cap 1 2> /dev/null "
                                   "> /dev/null") == 4);
  CHECK(sh(kBin + " bench --runs 2 --n 10 --m 4 --seed 50 --algo dist-unit -o " + rep) == 0);
  std::string csv = slurp(rep);
  CHECK(csv.rfind("digest,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

  setenv("CHANNELFLOW_SEED", "42", 1);
  CHECK(sh(kBin + " gen --n 8 --m 3 --r 1 -o " + inst) == 0);
  unsetenv("CHANNELFLOW_SEED");
  CHECK(sh(kBin + " gen --n 8 --m 3 --r 1 --seed 42 -o " + inst2) == 0);
  CHECK(slurp(inst) == slurp(inst2));

  for (const std::string& f : {inst, inst2, rep, trace}) std::remove(f.c_str());
}
