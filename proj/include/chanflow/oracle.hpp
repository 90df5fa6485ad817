// Exact optimum for small instance sets by branch and bound, plus the ratio
// and weak-duality certification helpers built on top of it.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chanflow/model.hpp"
#include "chanflow/rational.hpp"

namespace chanflow {

struct OracleCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  Rat optimum{0};
  std::vector<int> chosen;  // one optimal selection, sorted ids
  long long nodes{0};
};

// Maximum-profit feasible selection. Include-first depth search pruned by the
// remaining-profit bound. Throws OracleCapExceeded above cap instances.
OracleResult exact_optimum(const ProblemInstance& inst,
                           const std::vector<DemandInstance>& instances, FeasMode fmode,
                           int cap = 24);

// ok (nullopt) iff p(S) * bound >= optimum, exact arithmetic.
std::optional<std::string> certify_ratio(const std::vector<DemandInstance>& instances,
                                         const std::vector<int>& chosen, const Rat& optimum,
                                         const Rat& bound);

// ok (nullopt) iff the scaled dual objective dominates the optimum.
std::optional<std::string> verify_weak_duality(const Rat& scaled_dual_objective,
                                               const Rat& optimum);

}  // namespace chanflow
