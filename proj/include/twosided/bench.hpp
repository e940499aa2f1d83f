#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twosided/core.hpp"

namespace twosided {

// Random instances whose packets must each depart within [t_i + T, t_i + 2T].
struct GeneratorSpec {
  std::size_t packets = 1;
  double reference_time = 1.0;
  double window = 0.25;  // T
  std::uint64_t seed = 0;
  std::size_t trials = 1;

  // Throws DomainError unless packets >= 1 and 0 < 2T < t_R.
  void validate() const;

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

enum class BaselineKind { TwoSided, PreOnly, PostOnly, NoIndividual };
inline constexpr std::array<BaselineKind, 4> kBaselines = {
    BaselineKind::TwoSided, BaselineKind::PreOnly, BaselineKind::PostOnly,
    BaselineKind::NoIndividual};

std::string to_string(BaselineKind kind);

// Seed of trial `trial` derived from `base` by splitmix64, so every trial has
// its own stream no matter which thread runs it.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial);

// Arrivals uniform on [0, t_R - 2T] from mt19937_64 seeded with spec.seed,
// sorted and shifted to start at 0; T_pre = 2T, T_post = t_R - t_i - T.
ProblemInstance generate_instance(const GeneratorSpec& spec);

struct Objective {
  enum class Kind { energy, time };
  Kind kind = Kind::energy;
  double w_max = 0.0;

  static Objective energy() { return {Kind::energy, 0.0}; }
  static Objective time(double w_max) { return {Kind::time, w_max}; }
};

// The instance a baseline schedules: PreOnly drops post-delays, PostOnly
// drops pre-delays, NoIndividual drops both.
ProblemInstance reduced_instance(const ProblemInstance& instance, BaselineKind kind);

struct BaselineOutcome {
  // False when the reduced problem is infeasible or the budget is too small.
  bool feasible = false;
  std::optional<Schedule> schedule;
  // Packets departing inside their window of the original instance.
  std::size_t successes = 0;
  // Total energy (energy objective) or completion time (time objective).
  double total = 0.0;
  // total / successes; +inf with no success.
  double metric = kInf;
  std::string note;
};

BaselineOutcome run_baseline(const ProblemInstance& instance, BaselineKind kind,
                             const CostModel& cost, const Objective& objective);

struct TrialOutcome {
  bool feasible = false;
  std::size_t successes = 0;
  double total = 0.0;
  double metric = kInf;

  friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  std::array<TrialOutcome, 4> outcomes;  // indexed like kBaselines

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct BaselineAggregate {
  std::size_t trials = 0;
  std::size_t successes_total = 0;
  std::size_t infeasible_trials = 0;
  std::size_t zero_success_trials = 0;
  double total_sum = 0.0;
  // sum of totals / sum of successes over feasible trials
  double metric_agg = kInf;
  // mean of finite per-trial metrics
  double metric_mean_of_ratios = kInf;

  friend bool operator==(const BaselineAggregate&, const BaselineAggregate&) = default;
};

struct SweepPoint {
  double axis = 0.0;
  std::array<BaselineAggregate, 4> baselines;
  std::vector<TrialRecord> trials;

  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

struct SweepReport {
  std::string axis_name;  // "T" or "w_max"
  std::string objective;  // "energy" or "time"
  std::string cost_label;
  GeneratorSpec base;
  std::vector<SweepPoint> points;

  friend bool operator==(const SweepReport&, const SweepReport&) = default;
};

struct SweepOptions {
  bool parallel = true;
  // OpenMP threads; 0 keeps the runtime default.
  int threads = 0;
};

// One point per window T in `windows`; trial k uses trial_seed(base.seed, k)
// at every point.
SweepReport sweep_energy(const GeneratorSpec& base, std::span<const double> windows,
                         const CostModel& cost, const SweepOptions& options = {});

// One point per budget; instances drawn from `base` as in sweep_energy.
SweepReport sweep_time(const GeneratorSpec& base, std::span<const double> budgets,
                       const CostModel& cost, const SweepOptions& options = {});

// Parameters of the two published comparison experiments: "fig6" sweeps the
// window T at t_R = 100, M = 30 for energy; "fig7" sweeps the budget at
// t_R = 20, M = 5, T = 3 for completion time. Both use w = 1/tau.
struct FigurePreset {
  std::string name;
  GeneratorSpec spec;
  Objective::Kind objective = Objective::Kind::energy;
  std::vector<double> axis;
};

// Throws DomainError for a name other than "fig6" or "fig7".
FigurePreset figure_preset(const std::string& name);

SweepReport run_preset(const FigurePreset& preset, const CostModel& cost,
                       const SweepOptions& options = {});

// Sum by recursive halving, independent of thread scheduling.
double pairwise_sum(std::span<const double> values);

// One row per axis value and baseline.
void write_csv(const SweepReport& report, std::ostream& out);
// Everything including per-trial records; infinities are written as "inf".
void write_json(const SweepReport& report, std::ostream& out);

}  // namespace twosided
