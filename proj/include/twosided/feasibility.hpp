#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twosided/core.hpp"

namespace twosided {

enum class FeasibilityRule { necessary, fifo_strict, validity };

std::string to_string(FeasibilityRule rule);

struct FeasibilityViolation {
  FeasibilityRule rule;
  // Earlier packet of a pair (fifo_strict only), 0-based.
  std::optional<std::size_t> earlier;
  // Packet whose window is violated, 0-based.
  std::size_t packet = 0;
  std::string detail;
};

struct FeasibilityVerdict {
  bool feasible = true;
  std::vector<FeasibilityViolation> violations;
};

// Checks every packet window and every ordered pair. The pair test for
// j < i is deadline_i > floor_j, accepted down to a gap of -eq_tolerance(t_E).
FeasibilityVerdict check_feasibility(const ProblemInstance& instance);

struct Segment {
  std::size_t first = 0;  // first packet, 0-based
  std::size_t last = 0;   // last packet, inclusive
  double origin = 0.0;    // arrival time of `first`
};

struct Decomposition {
  std::vector<Segment> segments;
};

// Splits after every packet whose deadline expires before the next arrival.
// Throws PreconditionError on an infeasible instance.
Decomposition decompose(const ProblemInstance& instance);

// Stand-alone instance for one segment, with arrivals shifted to start at 0.
// Floors and the segment end keep their absolute position once shifted back.
ProblemInstance segment_instance(const ProblemInstance& instance, const Segment& segment);

// Concatenates per-segment schedules (in segment-local time) into one
// schedule on the original time axis.
Schedule stitch(const Decomposition& decomposition, std::span<const Schedule> parts);

}  // namespace twosided
