#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "twosided/core.hpp"

namespace twosided {

// Binding conditions at a packet's departure. Several may hold at once when
// bounds coincide; none holds for an interior packet.
struct PacketLabel {
  std::size_t index = 0;
  bool regular_end = false;    // departs at the next arrival or at a segment end
  bool pre_critical = false;   // departs at its deadline
  bool post_critical = false;  // departs at its floor
};

enum class SubgroupKind { regular, pre_critical, post_critical, free };
enum class GroupKind { R, H };

std::string to_string(SubgroupKind kind);
std::string to_string(GroupKind kind);

struct Subgroup {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
  double duration = 0.0;
  SubgroupKind kind = SubgroupKind::free;
  std::size_t size() const { return last - first + 1; }
};

struct Group {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
  GroupKind kind = GroupKind::R;
  std::vector<Subgroup> subgroups;
};

struct ScheduleStructure {
  std::vector<PacketLabel> packets;
  std::vector<Group> groups;
  // Index of the last packet of every forced-idle segment.
  std::vector<std::size_t> segment_ends;
  double tolerance = 0.0;

  // Subgroups of all groups in packet order.
  std::vector<Subgroup> flat_subgroups() const;
  // Packet counts of the flat subgroups.
  std::vector<std::size_t> subgroup_sizes() const;
};

// Labels packets, splits them into equal-duration subgroups and groups.
// Throws PreconditionError when the schedule violates the instance.
ScheduleStructure classify(const ProblemInstance& instance, const Schedule& schedule,
                           FrameEnd frame_end = FrameEnd::exact);

struct OrderingViolation {
  std::size_t subgroup = 0;  // flat subgroup index
  std::string message;
};

// Ordering relations between consecutive subgroups of one segment: a regular
// or post-critical subgroup is not shorter than its successor, a pre-critical
// one is not longer. Subgroups with no binding condition are reported too.
std::vector<OrderingViolation> check_ordering(const ScheduleStructure& structure);

}  // namespace twosided
