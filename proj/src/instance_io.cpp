#include "chanflow/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace chanflow {

using nlohmann::json;

namespace {

json must_get(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field: ") + key);
  return j.at(key);
}

int get_int(const json& j, const char* key) {
  json v = must_get(j, key);
  if (!v.is_number_integer()) throw ParseError(std::string("field not an integer: ") + key);
  return v.get<int>();
}

}  // namespace

ProblemInstance parse_instance(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what());
  }
  try {
    ProblemInstance inst;
    std::string mode = must_get(j, "mode").get<std::string>();
    if (mode == "tree")
      inst.mode = Mode::tree;
    else if (mode == "line")
      inst.mode = Mode::line;
    else
      throw ParseError("mode must be \"tree\" or \"line\"");
    inst.n = get_int(j, "n");
    for (const json& jn : must_get(j, "networks")) {
      TreeNetwork net;
      net.id = get_int(jn, "id");
      net.n = inst.n;
      if (inst.mode == Mode::line) {
        // timeslot t <-> edge (t, t+1); the file carries no edge list
        if (jn.contains("edges") && !jn.at("edges").empty())
          throw ParseError("line-mode networks must not carry edge lists");
        for (int t = 1; t < inst.n; ++t) net.edges.emplace_back(t, t + 1);
      } else {
        for (const json& je : must_get(jn, "edges")) {
          if (!je.is_array() || je.size() != 2) throw ParseError("edge must be a [u,v] pair");
          net.edges.emplace_back(je.at(0).get<int>(), je.at(1).get<int>());
        }
      }
      inst.networks.push_back(std::move(net));
    }
    for (const json& jp : must_get(j, "processors")) {
      Processor p;
      p.id = get_int(jp, "id");
      for (const json& ja : must_get(jp, "access")) p.access.push_back(ja.get<int>());
      inst.processors.push_back(std::move(p));
    }
    for (const json& jd : must_get(j, "demands")) {
      Demand d;
      d.id = get_int(jd, "id");
      d.owner = get_int(jd, "owner");
      if (inst.mode == Mode::tree) {
        d.u = get_int(jd, "u");
        d.v = get_int(jd, "v");
      } else {
        d.rt = get_int(jd, "rt");
        d.dl = get_int(jd, "dl");
        d.rho = get_int(jd, "rho");
      }
      long long denom = get_int(jd, "denom");
      if (denom <= 0) throw ParseError("demand denom must be positive");
      d.profit = make_rat(get_int(jd, "profit_num"), denom);
      d.height = make_rat(get_int(jd, "height_num"), denom);
      inst.demands.push_back(std::move(d));
    }
    inst.finalize();
    return inst;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad instance JSON: ") + e.what());
  }
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_instance(ss.str());
}

std::string serialize_instance(const ProblemInstance& inst) {
  json j;
  j["mode"] = inst.mode == Mode::tree ? "tree" : "line";
  j["n"] = inst.n;
  j["networks"] = json::array();
  for (const TreeNetwork& net : inst.networks) {
    json jn;
    jn["id"] = net.id;
    jn["edges"] = json::array();
    if (inst.mode == Mode::tree)
      for (auto [a, b] : net.edges) jn["edges"].push_back(json::array({a, b}));
    j["networks"].push_back(std::move(jn));
  }
  j["processors"] = json::array();
  for (const Processor& p : inst.processors) {
    json jp;
    jp["id"] = p.id;
    jp["access"] = p.access;
    j["processors"].push_back(std::move(jp));
  }
  j["demands"] = json::array();
  for (const Demand& d : inst.demands) {
    json jd;
    jd["id"] = d.id;
    jd["owner"] = d.owner;
    if (inst.mode == Mode::tree) {
      jd["u"] = d.u;
      jd["v"] = d.v;
    } else {
      jd["rt"] = d.rt;
      jd["dl"] = d.dl;
      jd["rho"] = d.rho;
    }
    // common denominator for profit and height, as written by the generator
    BigInt denom = boost::multiprecision::lcm(denominator(d.profit), denominator(d.height));
    jd["denom"] = denom.convert_to<long long>();
    jd["profit_num"] = (numerator(d.profit) * (denom / denominator(d.profit))).convert_to<long long>();
    jd["height_num"] = (numerator(d.height) * (denom / denominator(d.height))).convert_to<long long>();
    j["demands"].push_back(std::move(jd));
  }
  return j.dump(2) + "\n";
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write " + path);
  f << serialize_instance(inst);
}

std::string digest_bytes(const std::string& bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string digest_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return digest_bytes(ss.str());
}

}  // namespace chanflow
