#pragma once

#include <string>

#include "twosided/budget.hpp"
#include "twosided/core.hpp"

namespace twosided {

// Which floor anchored the allocation.
//   Case1   : every floor is at or before the last arrival.
//   Case2a  : an earlier packet has the latest floor after the last arrival.
//   Case2bI : the last packet has the latest floor and the budget reaches it.
//   Case2bII: as Case2bI but the budget falls short of it.
enum class CaseTag { Case1, Case2a, Case2bI, Case2bII };

std::string to_string(CaseTag tag);

struct TimeScheduleResult {
  Schedule schedule;
  // Last departure. Equals the sum of durations unless a forced idle period
  // separates segments.
  double completion_time = 0.0;
  CaseTag case_tag = CaseTag::Case1;
  double energy_used = 0.0;
};

// Minimum energy needed to finish every packet by t_E.
double minimum_energy(const ProblemInstance& instance, const CostModel& cost);

// Completion-time minimization when only post-delays constrain the packets.
// Throws PreconditionError if any pre-delay is finite and InsufficientBudget
// if the budget cannot finish by t_E.
TimeScheduleResult schedule_time_post(const BudgetedInstance& budgeted);

// Completion-time minimization under both delay bounds. Segments before the
// last forced idle period get their minimum-energy schedule; the last segment
// spends the rest of the budget.
TimeScheduleResult schedule_time_two_sided(const BudgetedInstance& budgeted);

}  // namespace twosided
