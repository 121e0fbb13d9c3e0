#pragma once

#include <optional>
#include <vector>

#include "shop2/model.hpp"
#include "shop2/term.hpp"

namespace shop2::testing {

struct OraclePlan {
  std::vector<Term> actions;
  std::vector<double> costs;
  double total = 0.0;
};

struct OracleOptions {
  int depthLimit = 20;
  std::size_t maxPlans = 200000;  // 0 means no bound
};

/// Exhaustive expander over an explicit precedence relation. Shares the
/// prover and state store with the planner but none of its network or
/// search code.
std::vector<OraclePlan> enumeratePlans(const Domain& domain, const Problem& problem, const OracleOptions& options = {});

std::optional<double> minimumCost(const std::vector<OraclePlan>& plans);

}  // namespace shop2::testing
