#include "twosided/feasibility.hpp"

#include <sstream>

namespace twosided {

std::string to_string(FeasibilityRule rule) {
  switch (rule) {
    case FeasibilityRule::necessary:
      return "necessary";
    case FeasibilityRule::fifo_strict:
      return "fifo_strict";
    case FeasibilityRule::validity:
      return "validity";
  }
  return "unknown";
}

FeasibilityVerdict check_feasibility(const ProblemInstance& instance) {
  const DerivedBounds b = derive_bounds(instance);
  const double tol = eq_tolerance(b.end_time);
  const auto t = instance.arrivals();
  const std::size_t m = instance.size();
  FeasibilityVerdict v;

  if (!(b.end_time > t[m - 1])) {
    std::ostringstream os;
    os << "frame end " << b.end_time << " is not after the last arrival " << t[m - 1];
    v.violations.push_back({FeasibilityRule::validity, std::nullopt, m - 1, os.str()});
  }
  // raw deadlines; the frame end is covered by the pairs against the last packet
  for (std::size_t i = 0; i < m; ++i) {
    const double deadline = b.departure_deadlines[i].value_or(kInf);
    const double floor_i = b.floor(i);
    if (deadline < floor_i - tol) {
      std::ostringstream os;
      os << "deadline " << deadline << " < floor " << floor_i;
      v.violations.push_back({FeasibilityRule::necessary, std::nullopt, i, os.str()});
    }
  }
  // floors of earlier packets, scanned for each later deadline
  for (std::size_t i = 1; i < m; ++i) {
    const double deadline = b.departure_deadlines[i].value_or(kInf);
    for (std::size_t j = 0; j < i; ++j) {
      const double floor_j = b.floor(j);
      if (deadline - floor_j <= -tol) {
        std::ostringstream os;
        os << "deadline " << deadline << " of packet " << i + 1 << " <= floor " << floor_j
           << " of packet " << j + 1;
        v.violations.push_back({FeasibilityRule::fifo_strict, j, i, os.str()});
      }
    }
  }
  v.feasible = v.violations.empty();
  return v;
}

Decomposition decompose(const ProblemInstance& instance) {
  if (!check_feasibility(instance).feasible) {
    throw PreconditionError("decompose: instance is infeasible");
  }
  const DerivedBounds b = derive_bounds(instance);
  const auto t = instance.arrivals();
  Decomposition d;
  std::size_t first = 0;
  for (std::size_t split : forced_idle_points(instance, b)) {
    d.segments.push_back({first, split, t[first]});
    first = split + 1;
  }
  d.segments.push_back({first, instance.size() - 1, t[first]});
  return d;
}

ProblemInstance segment_instance(const ProblemInstance& instance, const Segment& segment) {
  const auto t = instance.arrivals();
  const auto pre = instance.pre_delays();
  const auto post = instance.post_delays();
  const std::size_t n = segment.last - segment.first + 1;
  std::vector<double> arrivals(n);
  std::vector<Bound> pre_s;
  std::vector<Bound> post_s;
  pre_s.reserve(n);
  post_s.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = segment.first + k;
    arrivals[k] = t[i] - segment.origin;
    pre_s.push_back(pre[i]);
    post_s.push_back(post[i].is_finite() ? Bound::at(post[i].value() + segment.origin)
                                         : Bound::unbounded());
  }
  if (!pre_s.back().is_finite()) {
    // only the final segment can end on an unbounded delay; pin its end at t_R
    const double end = instance.reference_time();
    pre_s.back() = Bound::at(end - t[segment.last]);
  }
  return ProblemInstance(std::move(arrivals), std::move(pre_s), std::move(post_s),
                         instance.reference_time());
}

Schedule stitch(const Decomposition& decomposition, std::span<const Schedule> parts) {
  if (parts.size() != decomposition.segments.size()) {
    throw PreconditionError("stitch: one schedule per segment required");
  }
  std::vector<double> durations;
  std::vector<double> departures;
  for (std::size_t s = 0; s < parts.size(); ++s) {
    const Segment& seg = decomposition.segments[s];
    if (parts[s].size() != seg.last - seg.first + 1) {
      throw PreconditionError("stitch: schedule length does not match its segment");
    }
    for (std::size_t k = 0; k < parts[s].size(); ++k) {
      durations.push_back(parts[s].durations()[k]);
      departures.push_back(seg.origin + parts[s].departures()[k]);
    }
  }
  return Schedule(std::move(durations), std::move(departures));
}

}  // namespace twosided
