#include "twosided/bench.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <random>

#include "json.hpp"
#include "twosided/budget.hpp"
#include "twosided/energy_sched.hpp"
#include "twosided/feasibility.hpp"
#include "twosided/time_sched.hpp"

namespace twosided {

void GeneratorSpec::validate() const {
  if (packets < 1) throw DomainError("generator needs at least one packet");
  if (!(window > 0.0) || !(reference_time > 2.0 * window) || !std::isfinite(reference_time)) {
    throw DomainError("generator needs 0 < 2T < t_R");
  }
}

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::TwoSided:
      return "TwoSided";
    case BaselineKind::PreOnly:
      return "PreOnly";
    case BaselineKind::PostOnly:
      return "PostOnly";
    case BaselineKind::NoIndividual:
      return "NoIndividual";
  }
  return "unknown";
}

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) {
  std::uint64_t z = base + (trial + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ProblemInstance generate_instance(const GeneratorSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const double span = spec.reference_time - 2.0 * spec.window;
  std::vector<double> t(spec.packets);
  // explicit 53-bit mapping keeps the stream identical across standard libraries
  for (double& x : t) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 * span;
  std::sort(t.begin(), t.end());
  const double origin = t.front();
  for (double& x : t) x -= origin;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] <= t[i - 1]) t[i] = std::nextafter(t[i - 1], kInf);
  }
  std::vector<Bound> pre(spec.packets, Bound::at(2.0 * spec.window));
  std::vector<Bound> post;
  post.reserve(spec.packets);
  for (double x : t) post.push_back(Bound::at(spec.reference_time - x - spec.window));
  return ProblemInstance(std::move(t), std::move(pre), std::move(post), spec.reference_time);
}

ProblemInstance reduced_instance(const ProblemInstance& instance, BaselineKind kind) {
  const std::size_t m = instance.size();
  const auto pre = instance.pre_delays();
  const auto post = instance.post_delays();
  std::vector<Bound> keep_pre(pre.begin(), pre.end());
  std::vector<Bound> keep_post(post.begin(), post.end());
  const std::vector<Bound> none(m, Bound::unbounded());
  switch (kind) {
    case BaselineKind::TwoSided:
      return instance;
    case BaselineKind::PreOnly:
      return instance.with_delays(keep_pre, none);
    case BaselineKind::PostOnly:
      return instance.with_delays(none, keep_post);
    case BaselineKind::NoIndividual:
      return instance.with_delays(none, none);
  }
  return instance;
}

namespace {

std::size_t count_successes(const ProblemInstance& instance, const Schedule& schedule) {
  const DerivedBounds b = derive_bounds(instance);
  const double tol = eq_tolerance(b.end_time);
  const auto s = schedule.departures();
  std::size_t n = 0;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const double deadline = b.departure_deadlines[i].value_or(kInf);
    if (s[i] >= b.floor(i) - tol && s[i] <= deadline + tol) ++n;
  }
  return n;
}

Schedule schedule_for(const ProblemInstance& reduced, BaselineKind kind, const CostModel& cost,
                      const Objective& objective) {
  if (objective.kind == Objective::Kind::energy) {
    if (kind == BaselineKind::NoIndividual) {
      const DerivedBounds b = derive_bounds(reduced);
      return schedule_single_deadline(b.inter_arrivals, b.end_time);
    }
    return schedule_energy(reduced);
  }
  const BudgetedInstance budgeted(reduced, cost, objective.w_max);
  if (kind == BaselineKind::PostOnly || kind == BaselineKind::NoIndividual) {
    return schedule_time_post(budgeted).schedule;
  }
  return schedule_time_two_sided(budgeted).schedule;
}

}  // namespace

BaselineOutcome run_baseline(const ProblemInstance& instance, BaselineKind kind,
                             const CostModel& cost, const Objective& objective) {
  BaselineOutcome out;
  const ProblemInstance reduced = reduced_instance(instance, kind);
  try {
    out.schedule = schedule_for(reduced, kind, cost, objective);
  } catch (const InsufficientBudget& e) {
    out.note = e.what();
    return out;
  } catch (const PreconditionError& e) {
    out.note = e.what();
    return out;
  }
  out.feasible = true;
  out.successes = count_successes(instance, *out.schedule);
  out.total = objective.kind == Objective::Kind::energy ? total_cost(*out.schedule, cost)
                                                        : out.schedule->finish_time();
  out.metric = out.successes > 0 ? out.total / static_cast<double>(out.successes) : kInf;
  return out;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

BaselineAggregate aggregate(const std::vector<TrialRecord>& trials, std::size_t which) {
  BaselineAggregate a;
  a.trials = trials.size();
  std::vector<double> totals;
  std::vector<double> ratios;
  for (const TrialRecord& r : trials) {
    const TrialOutcome& o = r.outcomes[which];
    if (!o.feasible) {
      ++a.infeasible_trials;
      continue;
    }
    a.successes_total += o.successes;
    totals.push_back(o.total);
    if (std::isfinite(o.metric)) {
      ratios.push_back(o.metric);
    } else {
      ++a.zero_success_trials;
    }
  }
  a.total_sum = pairwise_sum(totals);
  if (a.successes_total > 0) a.metric_agg = a.total_sum / static_cast<double>(a.successes_total);
  if (!ratios.empty()) {
    a.metric_mean_of_ratios = pairwise_sum(ratios) / static_cast<double>(ratios.size());
  }
  return a;
}

template <class MakeInstance, class MakeObjective>
SweepReport run_sweep(const GeneratorSpec& base, std::span<const double> axis,
                      const CostModel& cost, const SweepOptions& options,
                      MakeInstance make_instance, MakeObjective make_objective) {
  base.validate();
  if (axis.empty()) throw DomainError("sweep axis is empty");
  SweepReport report;
  report.base = base;
  report.cost_label = cost.label();
  report.points.resize(axis.size());
  const std::size_t trials = base.trials;
  for (std::size_t p = 0; p < axis.size(); ++p) {
    report.points[p].axis = axis[p];
    report.points[p].trials.resize(trials);
  }
  const std::int64_t jobs = static_cast<std::int64_t>(axis.size() * trials);
  auto run_job = [&](std::int64_t job) {
    const std::size_t p = static_cast<std::size_t>(job) / trials;
    const std::size_t k = static_cast<std::size_t>(job) % trials;
    TrialRecord& rec = report.points[p].trials[k];
    rec.seed = trial_seed(base.seed, k);
    const ProblemInstance inst = make_instance(axis[p], rec.seed);
    const Objective objective = make_objective(axis[p]);
    for (std::size_t b = 0; b < kBaselines.size(); ++b) {
      const BaselineOutcome o = run_baseline(inst, kBaselines[b], cost, objective);
      rec.outcomes[b] = {o.feasible, o.successes, o.total, o.metric};
    }
  };
  if (options.parallel) {
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
    for (std::int64_t job = 0; job < jobs; ++job) run_job(job);
  } else {
    for (std::int64_t job = 0; job < jobs; ++job) run_job(job);
  }
  for (SweepPoint& point : report.points) {
    for (std::size_t b = 0; b < kBaselines.size(); ++b) {
      point.baselines[b] = aggregate(point.trials, b);
    }
  }
  return report;
}

}  // namespace

SweepReport sweep_energy(const GeneratorSpec& base, std::span<const double> windows,
                         const CostModel& cost, const SweepOptions& options) {
  SweepReport r = run_sweep(
      base, windows, cost, options,
      [&](double window, std::uint64_t seed) {
        GeneratorSpec spec = base;
        spec.window = window;
        spec.seed = seed;
        return generate_instance(spec);
      },
      [](double) { return Objective::energy(); });
  r.axis_name = "T";
  r.objective = "energy";
  return r;
}

SweepReport sweep_time(const GeneratorSpec& base, std::span<const double> budgets,
                       const CostModel& cost, const SweepOptions& options) {
  for (double w : budgets) {
    if (!(w > 0.0)) throw DomainError("budgets must be positive");
  }
  SweepReport r = run_sweep(
      base, budgets, cost, options,
      [&](double, std::uint64_t seed) {
        GeneratorSpec spec = base;
        spec.seed = seed;
        return generate_instance(spec);
      },
      [](double w_max) { return Objective::time(w_max); });
  r.axis_name = "w_max";
  r.objective = "time";
  return r;
}

namespace {

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

void write_csv(const SweepReport& report, std::ostream& out) {
  out << "axis,baseline,trials,successes_total,metric_agg,metric_mean_of_ratios,"
         "infeasible_trials\n";
  for (const SweepPoint& p : report.points) {
    for (std::size_t b = 0; b < kBaselines.size(); ++b) {
      const BaselineAggregate& a = p.baselines[b];
      out << number(p.axis) << ',' << to_string(kBaselines[b]) << ',' << a.trials << ','
          << a.successes_total << ',' << number(a.metric_agg) << ','
          << number(a.metric_mean_of_ratios) << ',' << a.infeasible_trials << '\n';
    }
  }
}

void write_json(const SweepReport& report, std::ostream& out) {
  nlohmann::json j;
  j["axis_name"] = report.axis_name;
  j["objective"] = report.objective;
  j["cost"] = report.cost_label;
  j["generator"] = {{"packets", report.base.packets},
                    {"reference_time", report.base.reference_time},
                    {"window", report.base.window},
                    {"seed", report.base.seed},
                    {"trials", report.base.trials}};
  nlohmann::json points = nlohmann::json::array();
  for (const SweepPoint& p : report.points) {
    nlohmann::json jp;
    jp["axis"] = p.axis;
    nlohmann::json aggs = nlohmann::json::object();
    for (std::size_t b = 0; b < kBaselines.size(); ++b) {
      const BaselineAggregate& a = p.baselines[b];
      aggs[to_string(kBaselines[b])] = {{"trials", a.trials},
                                        {"successes_total", a.successes_total},
                                        {"infeasible_trials", a.infeasible_trials},
                                        {"zero_success_trials", a.zero_success_trials},
                                        {"total_sum", a.total_sum},
                                        {"metric_agg", json_number(a.metric_agg)},
                                        {"metric_mean_of_ratios",
                                         json_number(a.metric_mean_of_ratios)}};
    }
    jp["baselines"] = std::move(aggs);
    nlohmann::json trials = nlohmann::json::array();
    for (const TrialRecord& r : p.trials) {
      nlohmann::json jt;
      jt["seed"] = r.seed;
      for (std::size_t b = 0; b < kBaselines.size(); ++b) {
        const TrialOutcome& o = r.outcomes[b];
        jt[to_string(kBaselines[b])] = {{"feasible", o.feasible},
                                        {"successes", o.successes},
                                        {"total", o.total},
                                        {"metric", json_number(o.metric)}};
      }
      trials.push_back(std::move(jt));
    }
    jp["trials"] = std::move(trials);
    points.push_back(std::move(jp));
  }
  j["points"] = std::move(points);
  out << j.dump(1) << '\n';
}

FigurePreset figure_preset(const std::string& name) {
  FigurePreset p;
  p.name = name;
  if (name == "fig6") {
    p.spec = {30, 100.0, 5.0, 1, 500};
    p.objective = Objective::Kind::energy;
    p.axis = {1.0, 2.0, 3.0, 4.0, 5.0, 7.5, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0};
  } else if (name == "fig7") {
    p.spec = {5, 20.0, 3.0, 1, 500};
    p.objective = Objective::Kind::time;
    p.axis = {6.0, 7.0, 8.0, 10.0, 12.0, 15.0, 20.0, 25.0, 30.0};
  } else {
    throw DomainError("unknown figure preset '" + name + "'");
  }
  return p;
}

SweepReport run_preset(const FigurePreset& preset, const CostModel& cost,
                       const SweepOptions& options) {
  if (preset.objective == Objective::Kind::energy) {
    return sweep_energy(preset.spec, preset.axis, cost, options);
  }
  return sweep_time(preset.spec, preset.axis, cost, options);
}

}  // namespace twosided
