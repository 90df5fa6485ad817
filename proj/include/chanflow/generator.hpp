// Seeded random instance generation. All draws go through mt19937_64 with
// modulo range reduction so output is byte-identical across platforms
// (std::uniform_int_distribution is not).
#pragma once

#include <random>

#include "chanflow/model.hpp"

namespace chanflow {

struct GenConfig {
  Mode kind{Mode::tree};
  int n{16};   // vertices; line mode has n-1 timeslots
  int m{6};    // demands (= processors)
  int r{2};    // networks / resources
  uint64_t seed{1};
  enum class Heights { unit, narrow, mixed } heights{Heights::unit};
  long long pmin{1}, pmax{10};
  int acc_max{2};     // largest access set handed to a processor
  int max_starts{3};  // line mode: cap on start slots per (demand, resource)
};

inline long long rand_int(std::mt19937_64& rng, long long lo, long long hi) {
  return lo + static_cast<long long>(rng() % static_cast<uint64_t>(hi - lo + 1));
}

TreeNetwork random_tree(int id, int n, std::mt19937_64& rng);

ProblemInstance generate_instance(const GenConfig& cfg);

}  // namespace chanflow
