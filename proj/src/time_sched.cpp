#include "twosided/time_sched.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "twosided/energy_sched.hpp"
#include "twosided/feasibility.hpp"
#include "twosided/structure.hpp"

namespace twosided {

std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::Case1:
      return "Case1";
    case CaseTag::Case2a:
      return "Case2a";
    case CaseTag::Case2bI:
      return "Case2bI";
    case CaseTag::Case2bII:
      return "Case2bII";
  }
  return "unknown";
}

double minimum_energy(const ProblemInstance& instance, const CostModel& cost) {
  return total_cost(schedule_energy(instance), cost);
}

namespace {

// A segment without forced idle periods, in its own time frame.
struct SegmentView {
  explicit SegmentView(const ProblemInstance& inst) : instance(inst), bounds(derive_bounds(inst)) {
    const std::size_t m = inst.size();
    arrivals.assign(inst.arrivals().begin(), inst.arrivals().end());
    deadlines.resize(m);
    floors.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      deadlines[i] = bounds.deadline(i);
      floors[i] = bounds.floor(i);
    }
    tol = eq_tolerance(bounds.end_time);
  }

  std::size_t size() const { return arrivals.size(); }

  const ProblemInstance& instance;
  DerivedBounds bounds;
  std::vector<double> arrivals;
  std::vector<double> deadlines;
  std::vector<double> floors;
  double tol = 0.0;
};

// Minimum-energy allocation of the first `count` packets ending at `end`,
// with subgroup sizes of the result.
struct PrefixPlan {
  std::vector<double> durations;
  std::vector<std::size_t> subgroup_sizes;
  double cost = 0.0;
};

PrefixPlan plan_prefix(const SegmentView& v, std::size_t count, double end, const CostModel& w) {
  PrefixPlan plan;
  if (count == 0) return plan;
  const auto post = v.instance.post_delays();
  std::vector<double> t(v.arrivals.begin(), v.arrivals.begin() + static_cast<std::ptrdiff_t>(count));
  std::vector<Bound> pre;
  pre.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double deadline = (i + 1 == count) ? end : std::min(v.deadlines[i], end);
    pre.push_back(Bound::at(deadline - t[i]));
  }
  std::vector<Bound> post_p(post.begin(), post.begin() + static_cast<std::ptrdiff_t>(count));
  const ProblemInstance prefix(std::move(t), std::move(pre), std::move(post_p),
                               v.instance.reference_time());
  const Schedule sched = schedule_energy_two_sided(prefix);
  plan.subgroup_sizes = classify(prefix, sched).subgroup_sizes();
  plan.durations.assign(sched.durations().begin(), sched.durations().end());
  plan.cost = total_cost(sched, w);
  return plan;
}

std::optional<double> equal_share(const CostModel& w, double energy, std::size_t packets) {
  try {
    return w.inverse(energy / static_cast<double>(packets));
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

double sum_cost(const std::vector<double>& tau, std::size_t count, const CostModel& w) {
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) sum += w(tau[i]);
  return sum;
}

// First packet in [from, M) whose departure passes its deadline.
std::optional<std::size_t> first_deadline_violation(const SegmentView& v,
                                                    const std::vector<double>& tau,
                                                    std::size_t from) {
  double s = 0.0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    s += tau[i];
    if (i >= from && s > v.deadlines[i] + v.tol) return i;
  }
  return std::nullopt;
}

// Deadline in [from, M) with the smallest mean duration from the departure
// of packet from-1; ties go to the later packet.
std::size_t binding_deadline(const SegmentView& v, const std::vector<double>& tau,
                             std::size_t from) {
  const double start =
      std::accumulate(tau.begin(), tau.begin() + static_cast<std::ptrdiff_t>(from), 0.0);
  std::size_t best = from;
  double best_mean = kInf;
  for (std::size_t j = from; j < tau.size(); ++j) {
    const double mean = (v.deadlines[j] - start) / static_cast<double>(j - from + 1);
    if (mean <= best_mean) {
      best_mean = mean;
      best = j;
    }
  }
  return best;
}

// Durations for packets first..last that make `last` depart at its deadline.
// Equal shares when they respect every bound on the way; otherwise the
// minimum-energy allocation of that window.
void fill_to_deadline(const SegmentView& v, std::vector<double>& tau, std::size_t first,
                      std::size_t last) {
  const double start = std::accumulate(tau.begin(), tau.begin() + static_cast<std::ptrdiff_t>(first), 0.0);
  const double target = v.deadlines[last];
  const std::size_t n = last - first + 1;
  const double share = (target - start) / static_cast<double>(n);
  bool equal_ok = share > 0.0;
  for (std::size_t i = first; equal_ok && i <= last; ++i) {
    const double s = start + share * static_cast<double>(i - first + 1);
    if (i < last && s < v.arrivals[i + 1] - v.tol) equal_ok = false;
    if (s > v.deadlines[i] + v.tol || s < v.floors[i] - v.tol) equal_ok = false;
  }
  if (equal_ok) {
    std::fill_n(tau.begin() + static_cast<std::ptrdiff_t>(first), n, share);
    return;
  }
  BatchState st;
  st.start = start;
  st.end_time = target;
  for (std::size_t i = first; i <= last; ++i) {
    st.arrivals.push_back(std::max(v.arrivals[i], start));
    st.deadlines.push_back(std::min(v.deadlines[i], target));
    st.floors.push_back(v.floors[i]);
  }
  while (st.cursor < n) {
    const std::size_t from = st.cursor;
    const EnergyBatch batch = next_batch(st);
    std::fill_n(tau.begin() + static_cast<std::ptrdiff_t>(first + from), batch.count,
                batch.duration);
  }
}

// Equal shares of the remaining budget for packets k.., with deadline
// repairs in the two-sided variant. Empty when the budget runs out.
std::optional<std::vector<double>> fill_tail(const SegmentView& v, std::vector<double> tau,
                                             std::size_t k, double budget, const CostModel& w,
                                             bool two_sided) {
  const std::size_t m = v.size();
  while (k < m) {
    const std::optional<double> share = equal_share(w, budget - sum_cost(tau, k, w), m - k);
    if (!share) return std::nullopt;
    std::fill(tau.begin() + static_cast<std::ptrdiff_t>(k), tau.end(), *share);
    if (!two_sided) break;
    if (!first_deadline_violation(v, tau, k)) break;
    const std::size_t bind = binding_deadline(v, tau, k);
    fill_to_deadline(v, tau, k, bind);
    k = bind + 1;
  }
  if (sum_cost(tau, m, w) > budget + budget_tolerance(budget)) return std::nullopt;
  return tau;
}

// Keeps the prefix allocation for packets before k, spends the rest of the
// budget on the tail, and moves k back one subgroup at a time until the tail
// fits and does not outlast the prefix.
std::vector<double> merge_and_fill(const SegmentView& v, const PrefixPlan& plan, double budget,
                                   const CostModel& w, bool two_sided) {
  const std::size_t m = v.size();
  std::size_t groups = plan.subgroup_sizes.size();
  std::size_t k = plan.durations.size();
  const double tau_tol = v.tol;
  while (true) {
    std::vector<double> prefix(m, 0.0);
    std::copy_n(plan.durations.begin(), k, prefix.begin());
    const auto tau = fill_tail(v, std::move(prefix), k, budget, w, two_sided);
    bool accept = tau.has_value();
    if (accept && k > 0) {
      if (two_sided) {
        // a prefix packet at its deadline cannot give time to the tail
        const double s = std::accumulate(tau->begin(), tau->begin() + static_cast<std::ptrdiff_t>(k), 0.0);
        accept = (*tau)[k - 1] >= (*tau)[k] - tau_tol || s >= v.deadlines[k - 1] - v.tol;
      } else {
        for (std::size_t i = 0; i + 1 < m; ++i) {
          if ((*tau)[i] < (*tau)[i + 1] - tau_tol) accept = false;
        }
      }
    }
    if (accept) return *tau;
    if (groups == 0) throw InsufficientBudget(kInf, budget);
    --groups;
    k = std::accumulate(plan.subgroup_sizes.begin(),
                        plan.subgroup_sizes.begin() + static_cast<std::ptrdiff_t>(groups),
                        std::size_t{0});
  }
}

struct SegmentResult {
  std::vector<double> durations;
  CaseTag tag = CaseTag::Case1;
};

SegmentResult solve_segment(const ProblemInstance& inst, const CostModel& w, double budget,
                            bool two_sided) {
  const SegmentView v(inst);
  const std::size_t m = v.size();
  const double t_last = v.arrivals[m - 1];
  const double slack = budget_tolerance(budget);

  std::size_t top = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (v.floors[i] >= v.floors[top]) top = i;
  }

  auto case1 = [&]() {
    return merge_and_fill(v, plan_prefix(v, m - 1, t_last, w), budget, w, two_sided);
  };
  if (!(v.floors[top] > t_last + v.tol)) return {case1(), CaseTag::Case1};

  // earlier packets with floors after the last arrival, latest first
  std::vector<std::size_t> anchors;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (v.floors[i] >= t_last - v.tol) anchors.push_back(i);
  }
  std::stable_sort(anchors.begin(), anchors.end(), [&](std::size_t a, std::size_t b) {
    return v.floors[a] != v.floors[b] ? v.floors[a] > v.floors[b] : a > b;
  });
  auto from_anchors = [&]() -> std::vector<double> {
    for (std::size_t a : anchors) {
      if (!(v.floors[a] > t_last)) break;
      PrefixPlan plan;
      try {
        plan = plan_prefix(v, a + 1, v.floors[a], w);
      } catch (const PreconditionError&) {
        continue;
      }
      return merge_and_fill(v, plan, budget, w, two_sided);
    }
    return case1();
  };

  if (top + 1 != m) return {from_anchors(), CaseTag::Case2a};
  const PrefixPlan full = plan_prefix(v, m, v.floors[m - 1], w);
  if (full.cost <= budget + slack) return {full.durations, CaseTag::Case2bI};
  return {from_anchors(), CaseTag::Case2bII};
}

TimeScheduleResult schedule_time(const BudgetedInstance& budgeted, bool two_sided) {
  const ProblemInstance& inst = budgeted.instance;
  const CostModel& w = budgeted.cost;
  const Decomposition d = decompose(inst);
  std::vector<ProblemInstance> segs;
  std::vector<Schedule> parts;
  double required = 0.0;
  for (const Segment& seg : d.segments) {
    segs.push_back(segment_instance(inst, seg));
    parts.push_back(schedule_energy_two_sided(segs.back()));
    required += total_cost(parts.back(), w);
  }
  if (required > budgeted.w_max + budget_tolerance(budgeted.w_max)) {
    throw InsufficientBudget(required, budgeted.w_max);
  }
  const double last_cost = total_cost(parts.back(), w);
  const double remaining = budgeted.w_max - (required - last_cost);
  SegmentResult r = solve_segment(segs.back(), w, remaining, two_sided);
  parts.back() = Schedule(std::move(r.durations));
  Schedule sched = d.segments.size() == 1 ? parts.back() : stitch(d, parts);

  TimeScheduleResult out{std::move(sched), 0.0, r.tag, 0.0};
  out.completion_time = out.schedule.finish_time();
  out.energy_used = total_cost(out.schedule, w);
  return out;
}

}  // namespace

TimeScheduleResult schedule_time_post(const BudgetedInstance& budgeted) {
  for (const Bound& pre : budgeted.instance.pre_delays()) {
    if (pre.is_finite()) {
      throw PreconditionError("schedule_time_post: every pre-delay must be unbounded");
    }
  }
  return schedule_time(budgeted, false);
}

TimeScheduleResult schedule_time_two_sided(const BudgetedInstance& budgeted) {
  return schedule_time(budgeted, true);
}

}  // namespace twosided
