#pragma once

#include <vector>

#include "twosided/budget.hpp"
#include "twosided/core.hpp"

namespace twosided {

enum class OracleMode { grid, descent, automatic };

struct OracleConfig {
  // Lattice points per departure variable in grid mode.
  int grid_points = 200;
  // Newton steps allowed across all barrier stages in descent mode.
  int max_iterations = 5000;
  // Target duality gap relative to 1 + cost in descent mode.
  double convergence_tol = 1e-12;
  OracleMode mode = OracleMode::automatic;

  void validate() const;
};

// The descent solver ran out of iterations; carries its best iterate.
class OracleConvergenceError : public Error {
 public:
  OracleConvergenceError(const std::string& what, std::vector<double> best)
      : Error(what), best_(std::move(best)) {}
  const std::vector<double>& best_durations() const noexcept { return best_; }

 private:
  std::vector<double> best_;
};

struct OracleResult {
  Schedule schedule;
  double cost = 0.0;
};

// Minimum of sum w(tau) over departure times with the last departure pinned
// at end_time, solved directly on the departure variables. Throws
// InfeasibleError when the constraints leave no room.
OracleResult oracle_energy(const ProblemInstance& instance, const CostModel& cost, double end_time,
                           const OracleConfig& config = {});

struct OracleTimeResult {
  Schedule schedule;
  double completion_time = 0.0;
};

// Smallest end time whose minimum energy fits the budget, by bisection.
// Throws InsufficientBudget when even t_E needs more than w_max.
OracleTimeResult oracle_time(const BudgetedInstance& budgeted, const OracleConfig& config = {});

}  // namespace twosided
