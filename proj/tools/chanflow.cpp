#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "chanflow/generator.hpp"
#include "chanflow/instance_io.hpp"
#include "chanflow/report.hpp"

using namespace chanflow;
using nlohmann::json;

namespace {

// accepts "1/10", "3", and decimals like "0.1"
Rat parse_rat_flexible(const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) return parse_rat(s);
  std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
  bool neg = !head.empty() && head[0] == '-';
  if (neg) head = head.substr(1);
  if (head.empty()) head = "0";
  if (tail.empty()) tail = "0";
  for (char c : head + tail)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("bad number: " + s);
  Rat den = 1;
  for (size_t i = 0; i < tail.size(); ++i) den *= 10;
  Rat val = Rat(BigInt(head)) + Rat(BigInt(tail)) / den;
  return neg ? -val : val;
}

uint64_t default_seed() {
  if (const char* env = std::getenv("CHANNELFLOW_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "chanflow: ignoring bad CHANNELFLOW_SEED\n";
    }
  }
  return 1;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct GenFlags {
  std::string kind{"tree"}, heights{"unit"};
  int n{16}, m{6}, r{2}, acc_max{2}, max_starts{3};
  long long pmin{1}, pmax{10};

  void attach(CLI::App* cmd) {
    cmd->add_option("--kind", kind)->check(CLI::IsMember({"tree", "line"}));
    cmd->add_option("--n", n, "vertices (line: slots = n-1)");
    cmd->add_option("--m", m, "demands");
    cmd->add_option("--r", r, "networks / resources");
    cmd->add_option("--heights", heights)->check(CLI::IsMember({"unit", "narrow", "mixed"}));
    cmd->add_option("--pmin", pmin);
    cmd->add_option("--pmax", pmax);
    cmd->add_option("--acc-max", acc_max);
    cmd->add_option("--max-starts", max_starts);
  }

  GenConfig config(uint64_t seed) const {
    GenConfig cfg;
    cfg.kind = kind == "line" ? Mode::line : Mode::tree;
    cfg.n = n;
    cfg.m = m;
    cfg.r = r;
    cfg.seed = seed;
    cfg.heights = heights == "narrow" ? GenConfig::Heights::narrow
                  : heights == "mixed" ? GenConfig::Heights::mixed
                                       : GenConfig::Heights::unit;
    cfg.pmin = pmin;
    cfg.pmax = pmax;
    cfg.acc_max = acc_max;
    cfg.max_starts = max_starts;
    return cfg;
  }
};

struct RunFlags {
  std::string algo, eps{"1/10"}, hmin, trace_path, out_path;
  bool oracle{false}, csv{false}, single_tree{false};
  int oracle_cap{24}, c_steps{2};

  void attach(CLI::App* cmd, bool with_outputs) {
    cmd->add_option("--algo", algo, "dist-unit | dist-height | dist-line-unit | dist-line-height | seq-tree")
        ->required()
        ->check(CLI::IsMember({"dist-unit", "dist-height", "dist-line-unit",
                               "dist-line-height", "seq-tree"}));
    cmd->add_option("--eps", eps, "slack tolerance, e.g. 0.1 or 1/10");
    cmd->add_flag("--oracle", oracle, "compute the exact optimum and certify the ratio");
    cmd->add_option("--oracle-cap", oracle_cap, "instance-count cap for the oracle");
    cmd->add_option("--hmin", hmin, "height floor override for the narrow side");
    cmd->add_option("--c-steps", c_steps, "step-cap constant");
    if (with_outputs) {
      cmd->add_flag("--single-tree", single_tree, "sequential variant for one network");
      cmd->add_flag("--csv", csv, "emit a CSV row instead of JSON");
      cmd->add_option("--trace", trace_path, "write the raise trace to this file, one JSON object per line");
      cmd->add_option("-o,--out", out_path, "write the report here instead of stdout");
    }
  }

  RunConfig config(uint64_t seed, const std::string& digest) const {
    RunConfig cfg;
    cfg.algo = *algo_from_name(algo);
    cfg.eps = parse_rat_flexible(eps);
    cfg.seed = seed;
    cfg.with_oracle = oracle;
    cfg.oracle_cap = oracle_cap;
    if (!hmin.empty()) cfg.h_min = parse_rat_flexible(hmin);
    cfg.c_steps = c_steps;
    cfg.single_tree = single_tree;
    cfg.digest = digest;
    return cfg;
  }
};

// 0 ok, 2 validation, 3 certification, 4 oracle cap
int run_one(const ProblemInstance& inst, const RunConfig& cfg, const RunFlags& flags,
            RunReport& rep) {
  try {
    rep = run_pipeline(inst, cfg);
  } catch (const OracleCapExceeded& e) {
    std::cerr << "chanflow: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "chanflow: " << e.what() << "\n";
    return 2;
  }
  if (rep.optimum) {
    Rat bound = ratio_bound(cfg.algo, cfg.eps, cfg.single_tree);
    std::vector<DemandInstance> xs = expand_demand_instances(inst);
    if (auto bad = certify_ratio(xs, rep.sol.chosen, *rep.optimum, bound)) {
      std::cerr << "chanflow: " << *bad << "\n";
      return 3;
    }
  }
  if (!flags.trace_path.empty()) emit(trace_lines(inst, rep.trace), flags.trace_path);
  return 0;
}

int cmd_gen(const GenFlags& gen, uint64_t seed, const std::string& out_path) {
  ProblemInstance inst;
  try {
    inst = generate_instance(gen.config(seed));
  } catch (const std::invalid_argument& e) {
    std::cerr << "chanflow: " << e.what() << "\n";
    return 2;
  }
  emit(serialize_instance(inst), out_path);
  return 0;
}

int cmd_validate(const std::string& path) {
  json j;
  ProblemInstance inst;
  try {
    inst = parse_instance(read_file(path));
  } catch (const std::exception& e) {
    j["ok"] = false;
    j["error"] = e.what();
    std::cout << j.dump(2) << "\n";
    return 2;
  }
  if (std::vector<std::string> problems = inst.validate(); !problems.empty()) {
    j["ok"] = false;
    j["errors"] = problems;
    std::cout << j.dump(2) << "\n";
    return 2;
  }
  j["ok"] = true;
  j["digest"] = digest_file(path);
  j["mode"] = inst.mode == Mode::tree ? "tree" : "line";
  j["networks"] = inst.networks.size();
  j["processors"] = inst.processors.size();
  j["demands"] = inst.demands.size();
  j["instances"] = expand_demand_instances(inst).size();
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_decompose(const std::string& path, const std::string& kind_name,
                  const std::string& out_path) {
  ProblemInstance inst;
  try {
    inst = parse_instance(read_file(path));
    if (auto problems = inst.validate(); !problems.empty())
      throw std::runtime_error(problems.front());
  } catch (const std::exception& e) {
    std::cerr << "chanflow: " << e.what() << "\n";
    return 2;
  }
  if (inst.mode != Mode::tree) {
    std::cerr << "chanflow: decompose applies to tree instances\n";
    return 2;
  }
  DecompKind kind = kind_name == "root-fixing" ? DecompKind::root_fixing
                    : kind_name == "balancing" ? DecompKind::balancing
                                               : DecompKind::ideal;
  for (const TreeNetwork& net : inst.networks) {
    RootedDecomposition dec = kind == DecompKind::root_fixing ? build_root_fixing(net, 1)
                              : kind == DecompKind::balancing ? build_balancing(net)
                                                              : build_ideal(net);
    if (auto bad = validate_decomposition(net, dec)) {
      std::cerr << "chanflow: network " << net.id << ": " << bad->describe() << "\n";
      return 2;
    }
  }
  emit(decompositions_json(inst, kind), out_path);
  return 0;
}

int cmd_run(const std::string& path, const RunFlags& flags, uint64_t seed) {
  std::string text;
  ProblemInstance inst;
  try {
    text = read_file(path);
    inst = parse_instance(text);
    if (auto problems = inst.validate(); !problems.empty())
      throw std::runtime_error(problems.front());
  } catch (const std::exception& e) {
    std::cerr << "chanflow: " << e.what() << "\n";
    return 2;
  }
  RunReport rep;
  int rc = run_one(inst, flags.config(seed, digest_bytes(text)), flags, rep);
  if (rc != 0 && rc != 3) return rc;
  if (flags.csv)
    emit(report_csv_header() + report_csv_row(rep), flags.out_path);
  else
    emit(report_json(rep), flags.out_path);
  return rc;
}

int cmd_bench(const GenFlags& gen, const RunFlags& flags, uint64_t seed, int runs,
              const std::string& out_path) {
  std::ostringstream rows;
  rows << report_csv_header();
  for (int i = 0; i < runs; ++i) {
    ProblemInstance inst;
    try {
      inst = generate_instance(gen.config(seed + static_cast<uint64_t>(i)));
    } catch (const std::invalid_argument& e) {
      std::cerr << "chanflow: " << e.what() << "\n";
      return 2;
    }
    RunFlags per = flags;
    per.trace_path.clear();
    RunReport rep;
    std::string digest = digest_bytes(serialize_instance(inst));
    int rc = run_one(inst, per.config(seed + static_cast<uint64_t>(i), digest), per, rep);
    if (rc != 0) {
      std::cerr << "chanflow: bench run " << i << " (seed " << seed + i << ") failed\n";
      return rc;
    }
    rows << report_csv_row(rep);
  }
  emit(rows.str(), out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"throughput maximization on tree and line networks"};
  app.require_subcommand(1);
  uint64_t seed = default_seed();

  GenFlags gen_flags;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "generate a random instance");
  gen_flags.attach(gen);
  gen->add_option("--seed", seed);
  gen->add_option("-o,--out", gen_out, "write the instance here instead of stdout");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "check an instance file");
  validate->add_option("file", validate_path)->required();

  std::string dec_path, dec_kind{"ideal"}, dec_out;
  CLI::App* decompose = app.add_subcommand("decompose", "dump rooted decompositions");
  decompose->add_option("file", dec_path)->required();
  decompose->add_option("--kind", dec_kind)
      ->check(CLI::IsMember({"root-fixing", "balancing", "ideal"}));
  decompose->add_option("-o,--out", dec_out);

  std::string run_path;
  RunFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "run an algorithm on an instance file");
  run->add_option("file", run_path)->required();
  run_flags.attach(run, true);
  run->add_option("--seed", seed);

  GenFlags bench_gen;
  RunFlags bench_flags;
  int bench_runs = 10;
  std::string bench_out;
  CLI::App* bench = app.add_subcommand("bench", "generate and run a batch, CSV output");
  bench_gen.attach(bench);
  bench_flags.attach(bench, false);
  bench->add_option("--runs", bench_runs);
  bench->add_option("--seed", seed, "base seed, run i uses seed+i");
  bench->add_option("-o,--out", bench_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen_flags, seed, gen_out);
    if (validate->parsed()) return cmd_validate(validate_path);
    if (decompose->parsed()) return cmd_decompose(dec_path, dec_kind, dec_out);
    if (run->parsed()) return cmd_run(run_path, run_flags, seed);
    if (bench->parsed()) return cmd_bench(bench_gen, bench_flags, seed, bench_runs, bench_out);
  } catch (const std::exception& e) {
    std::cerr << "chanflow: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
