#include "twosided/energy_sched.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twosided/feasibility.hpp"

namespace twosided {

Schedule schedule_single_deadline(std::span<const double> inter_arrivals, double end_time) {
  const std::size_t m = inter_arrivals.size();
  if (m == 0) throw DomainError("schedule_single_deadline: empty input");
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(inter_arrivals[i] > 0.0)) {
      throw DomainError("inter-arrival " + std::to_string(i) + " is not positive");
    }
    total += inter_arrivals[i];
  }
  if (std::abs(total - end_time) > eq_tolerance(end_time)) {
    throw DomainError("inter-arrivals must sum to the end time");
  }
  // arrivals as running sums; blocks are measured in absolute time
  std::vector<double> arrival(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) arrival[i] = arrival[i - 1] + inter_arrivals[i - 1];
  const double tie = 1e-12 * std::max(1.0, std::abs(end_time));
  std::vector<double> tau(m);
  std::size_t c = 0;
  double start = 0.0;
  while (c < m) {
    double best_mean = -kInf;
    std::size_t best_k = 0;
    double best_end = end_time;
    for (std::size_t k = 1; c + k <= m; ++k) {
      const double next = (c + k < m) ? arrival[c + k] : end_time;
      const double mean = (next - start) / static_cast<double>(k);
      if (mean > best_mean + tie || (mean >= best_mean - tie && k > best_k)) {
        best_mean = std::max(best_mean, mean);
        best_k = k;
        best_end = next;
      }
    }
    const double value = (best_end - start) / static_cast<double>(best_k);
    std::fill_n(tau.begin() + static_cast<std::ptrdiff_t>(c), best_k, value);
    c += best_k;
    start = best_end;
  }
  return Schedule(std::move(tau));
}

EnergyBatch next_batch(BatchState& st) {
  const std::size_t n = st.arrivals.size();
  const std::size_t c = st.cursor;
  const double s0 = st.start;
  const double tie = 1e-12 * std::max(1.0, std::abs(st.end_time));

  EnergyBatch best;
  double best_value = -kInf;
  // min over the deadline-capped entries seen so far, and the batch size it implies
  double pre_min = kInf;
  std::size_t pre_count = 0;
  for (std::size_t k = 1; c + k <= n; ++k) {
    if (k > 1) {
      const std::size_t j = k - 1;
      const double entry = (st.deadlines[c + j - 1] - s0) / static_cast<double>(j);
      if (entry < pre_min - tie) {
        pre_min = entry;
        pre_count = j;
      } else if (entry <= pre_min + tie) {
        pre_min = std::min(pre_min, entry);
        pre_count = j;
      }
    }
    const std::size_t last = c + k - 1;
    const double next_arrival = (last + 1 < n) ? st.arrivals[last + 1] : st.end_time;
    const double arrival_mean = (next_arrival - s0) / static_cast<double>(k);
    const double floor_mean = (st.floors[last] - s0) / static_cast<double>(k);

    EnergyBatch cand;
    double value;
    if (pre_count > 0 && pre_min <= std::max(arrival_mean, floor_mean) + tie) {
      value = pre_min;
      cand.count = pre_count;
      cand.end = EnergyBatch::End::pre_critical;
      cand.departure = st.deadlines[c + pre_count - 1];
    } else if (arrival_mean >= floor_mean) {
      value = arrival_mean;
      cand.count = k;
      cand.end = EnergyBatch::End::regular;
      cand.departure = next_arrival;
    } else {
      value = floor_mean;
      cand.count = k;
      cand.end = EnergyBatch::End::post_critical;
      cand.departure = st.floors[last];
    }
    if (value > best_value + tie ||
        (value >= best_value - tie && cand.count > best.count)) {
      best_value = std::max(best_value, value);
      best = cand;
    }
  }
  best.duration = (best.departure - s0) / static_cast<double>(best.count);
  st.start = best.departure;
  st.cursor += best.count;
  for (std::size_t i = st.cursor; i < n; ++i) st.arrivals[i] = std::max(st.arrivals[i], st.start);
  return best;
}

Schedule schedule_energy_two_sided(const ProblemInstance& instance) {
  if (!check_feasibility(instance).feasible) {
    throw PreconditionError("schedule_energy_two_sided: instance is infeasible");
  }
  const DerivedBounds b = derive_bounds(instance);
  if (!forced_idle_points(instance, b).empty()) {
    throw PreconditionError("schedule_energy_two_sided: instance has forced idle periods; "
                            "decompose it first");
  }
  const std::size_t m = instance.size();
  BatchState st;
  st.arrivals.assign(instance.arrivals().begin(), instance.arrivals().end());
  st.deadlines.resize(m);
  st.floors.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    st.deadlines[i] = b.deadline(i);
    st.floors[i] = b.floor(i);
  }
  st.end_time = b.end_time;
  st.start = st.arrivals.front();

  std::vector<double> tau(m);
  while (st.cursor < m) {
    const std::size_t from = st.cursor;
    const EnergyBatch batch = next_batch(st);
    std::fill_n(tau.begin() + static_cast<std::ptrdiff_t>(from), batch.count, batch.duration);
  }
  return Schedule(std::move(tau));
}

Schedule schedule_energy(const ProblemInstance& instance) {
  const Decomposition d = decompose(instance);
  if (d.segments.size() == 1) return schedule_energy_two_sided(instance);
  std::vector<Schedule> parts;
  parts.reserve(d.segments.size());
  for (const Segment& seg : d.segments) {
    parts.push_back(schedule_energy_two_sided(segment_instance(instance, seg)));
  }
  return stitch(d, parts);
}

bool cost_independence_check(const ProblemInstance& instance, const CostModel& a,
                             const CostModel& b) {
  const Schedule sa = schedule_energy_two_sided(instance);
  const Schedule sb = schedule_energy_two_sided(instance);
  // both costs must accept the schedule; neither influences it
  (void)total_cost(sa, a);
  (void)total_cost(sb, b);
  return sa == sb;
}

}  // namespace twosided
