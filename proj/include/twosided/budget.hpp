#pragma once

#include <cmath>
#include <utility>

#include "twosided/core.hpp"

namespace twosided {

// An instance together with a cost model and an energy budget.
struct BudgetedInstance {
  BudgetedInstance(ProblemInstance instance, CostModel cost, double w_max)
      : instance(std::move(instance)), cost(std::move(cost)), w_max(w_max) {
    if (!(w_max > 0.0) || !std::isfinite(w_max)) throw DomainError("w_max must be positive");
  }

  ProblemInstance instance;
  CostModel cost;
  double w_max;
};

// Slack allowed when comparing an energy figure against the budget.
inline double budget_tolerance(double w_max) { return 1e-9 * (1.0 + w_max); }

}  // namespace twosided
