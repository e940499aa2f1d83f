#pragma once

#include <span>
#include <vector>

#include "twosided/core.hpp"

namespace twosided {

// Minimum-energy schedule when every packet shares the end time `end_time`.
// `inter_arrivals` are d_1..d_M with d_M = end_time - t_M, so they must sum
// to end_time. Throws DomainError on a non-positive entry or a bad sum.
Schedule schedule_single_deadline(std::span<const double> inter_arrivals, double end_time);

// Working state of the two-sided energy scheduler. Exposed for tests.
struct BatchState {
  std::size_t cursor = 0;             // next unallocated packet
  double start = 0.0;                 // departure of the last allocated packet
  std::vector<double> arrivals;       // working arrivals, clamped to `start`
  std::vector<double> deadlines;      // fixed, already clipped to the frame end
  std::vector<double> floors;         // fixed, -inf when absent
  double end_time = 0.0;
};

// One allocation step: equal durations for the next batch of packets.
struct EnergyBatch {
  enum class End { regular, post_critical, pre_critical };
  std::size_t count = 0;
  double duration = 0.0;
  double departure = 0.0;
  End end = End::regular;
};

// Chooses and applies the next batch. Requires state.cursor < size.
EnergyBatch next_batch(BatchState& state);

// Minimum-energy schedule of a feasible instance without forced idle periods.
// The result does not depend on the cost model. Throws PreconditionError when
// the instance is infeasible or needs decomposition first.
Schedule schedule_energy_two_sided(const ProblemInstance& instance);

// Decomposes at forced idle periods, schedules every segment, and stitches.
Schedule schedule_energy(const ProblemInstance& instance);

// True iff the two-sided scheduler returns bitwise-identical schedules under
// both cost models (it never evaluates the cost).
bool cost_independence_check(const ProblemInstance& instance, const CostModel& a,
                             const CostModel& b);

}  // namespace twosided
