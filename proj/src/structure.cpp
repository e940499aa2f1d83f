#include "twosided/structure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace twosided {

std::string to_string(SubgroupKind kind) {
  switch (kind) {
    case SubgroupKind::regular:
      return "regular";
    case SubgroupKind::pre_critical:
      return "pre_critical";
    case SubgroupKind::post_critical:
      return "post_critical";
    case SubgroupKind::free:
      return "free";
  }
  return "unknown";
}

std::string to_string(GroupKind kind) { return kind == GroupKind::R ? "R" : "H"; }

std::vector<Subgroup> ScheduleStructure::flat_subgroups() const {
  std::vector<Subgroup> out;
  for (const Group& g : groups) out.insert(out.end(), g.subgroups.begin(), g.subgroups.end());
  return out;
}

std::vector<std::size_t> ScheduleStructure::subgroup_sizes() const {
  std::vector<std::size_t> out;
  for (const Group& g : groups) {
    for (const Subgroup& s : g.subgroups) out.push_back(s.size());
  }
  return out;
}

namespace {

SubgroupKind choose_kind(const PacketLabel& p, double tau, const double* next_tau,
                         double tol) {
  if (next_tau == nullptr) return SubgroupKind::regular;
  const bool not_shorter = tau >= *next_tau - tol;
  const bool not_longer = tau <= *next_tau + tol;
  if (p.regular_end && not_shorter) return SubgroupKind::regular;
  if (p.post_critical && not_shorter) return SubgroupKind::post_critical;
  if (p.pre_critical && not_longer) return SubgroupKind::pre_critical;
  if (p.regular_end) return SubgroupKind::regular;
  if (p.post_critical) return SubgroupKind::post_critical;
  if (p.pre_critical) return SubgroupKind::pre_critical;
  return SubgroupKind::free;
}

}  // namespace

ScheduleStructure classify(const ProblemInstance& instance, const Schedule& schedule,
                           FrameEnd frame_end) {
  // verification is cost-independent apart from the totals
  const VerificationReport report =
      verify_schedule(instance, schedule, CostModel::reciprocal(), frame_end);
  if (!report.all_ok()) {
    throw PreconditionError("classify: schedule violates " +
                            std::to_string(report.violation_count()) + " constraint(s)");
  }
  const std::size_t m = instance.size();
  const DerivedBounds b = derive_bounds(instance);
  const double tol = eq_tolerance(b.end_time);
  const auto t = instance.arrivals();
  const auto tau = schedule.durations();
  const auto s = schedule.departures();

  ScheduleStructure st;
  st.tolerance = tol;
  std::vector<bool> segment_end(m, false);
  for (std::size_t i : forced_idle_points(instance, b)) segment_end[i] = true;
  segment_end[m - 1] = true;
  for (std::size_t i = 0; i < m; ++i) {
    if (segment_end[i]) st.segment_ends.push_back(i);
  }

  st.packets.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    PacketLabel& p = st.packets[i];
    p.index = i;
    p.regular_end = segment_end[i] || std::abs(s[i] - t[i + 1]) <= tol;
    p.pre_critical = b.departure_deadlines[i].is_finite() &&
                     std::abs(s[i] - b.departure_deadlines[i].value()) <= tol;
    p.post_critical = b.departure_floors[i].is_finite() &&
                      std::abs(s[i] - b.departure_floors[i].value()) <= tol;
  }

  // maximal equal-duration runs that do not cross a segment end
  std::vector<Subgroup> runs;
  for (std::size_t i = 0; i < m;) {
    std::size_t j = i;
    while (!segment_end[j] && std::abs(tau[j + 1] - tau[i]) <= tol) ++j;
    runs.push_back({i, j, tau[i], SubgroupKind::free});
    i = j + 1;
  }
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const bool has_next = !segment_end[runs[r].last];
    const double* next_tau = has_next ? &runs[r + 1].duration : nullptr;
    runs[r].kind = choose_kind(st.packets[runs[r].last], runs[r].duration, next_tau, tol);
  }

  Group current;
  bool open = false;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (!open) {
      current = Group{runs[r].first, runs[r].last, GroupKind::R, {}};
      open = true;
    }
    current.subgroups.push_back(runs[r]);
    current.last = runs[r].last;
    if (runs[r].kind == SubgroupKind::regular || segment_end[runs[r].last]) {
      for (std::size_t i = current.first; i <= current.last; ++i) {
        if (st.packets[i].pre_critical || st.packets[i].post_critical) current.kind = GroupKind::H;
      }
      st.groups.push_back(std::move(current));
      open = false;
    }
  }
  return st;
}

std::vector<OrderingViolation> check_ordering(const ScheduleStructure& structure) {
  std::vector<OrderingViolation> out;
  const std::vector<Subgroup> subs = structure.flat_subgroups();
  const double tol = structure.tolerance;
  auto is_segment_end = [&](std::size_t i) {
    return std::binary_search(structure.segment_ends.begin(), structure.segment_ends.end(), i);
  };
  for (std::size_t r = 0; r < subs.size(); ++r) {
    const Subgroup& cur = subs[r];
    std::ostringstream os;
    if (cur.kind == SubgroupKind::free) {
      os << "subgroup " << r << " (packets " << cur.first + 1 << ".." << cur.last + 1
         << ") ends on no binding condition";
      out.push_back({r, os.str()});
      continue;
    }
    if (is_segment_end(cur.last) || r + 1 >= subs.size()) continue;
    const Subgroup& next = subs[r + 1];
    const bool ok = cur.kind == SubgroupKind::pre_critical ? cur.duration <= next.duration + tol
                                                           : cur.duration >= next.duration - tol;
    if (!ok) {
      os << to_string(cur.kind) << " subgroup " << r << " has duration " << cur.duration
         << " against " << next.duration << " for its successor";
      out.push_back({r, os.str()});
    }
  }
  return out;
}

}  // namespace twosided
