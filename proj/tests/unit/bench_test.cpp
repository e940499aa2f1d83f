#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "twosided/bench.hpp"
#include "twosided/feasibility.hpp"

namespace twosided {
namespace {

GeneratorSpec small_spec() {
  GeneratorSpec s;
  s.packets = 5;
  s.reference_time = 20;
  s.window = 3;
  s.seed = 7;
  s.trials = 40;
  return s;
}

TEST(Generator, RejectsBadSpec) {
  GeneratorSpec s = small_spec();
  s.window = 10;
  EXPECT_THROW(s.validate(), DomainError);
  s = small_spec();
  s.packets = 0;
  EXPECT_THROW(generate_instance(s), DomainError);
}

TEST(Generator, Reproducible) {
  EXPECT_EQ(generate_instance(small_spec()), generate_instance(small_spec()));
  GeneratorSpec other = small_spec();
  other.seed = 8;
  EXPECT_FALSE(generate_instance(small_spec()) == generate_instance(other));
}

TEST(Generator, WindowsAreNonEmpty) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GeneratorSpec s = small_spec();
    s.seed = seed;
    const ProblemInstance inst = generate_instance(s);
    const DerivedBounds b = derive_bounds(inst);
    EXPECT_EQ(inst.arrivals()[0], 0.0);
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const double t = inst.arrivals()[i];
      EXPECT_NEAR(b.floor(i), t + 3.0, 1e-12);
      EXPECT_NEAR(b.departure_deadlines[i].value(), t + 6.0, 1e-12);
      EXPECT_LE(t, 20.0 - 6.0);
    }
    // the per-packet condition always holds; only FIFO pairs may fail
    for (const FeasibilityViolation& v : check_feasibility(inst).violations) {
      EXPECT_NE(v.rule, FeasibilityRule::necessary);
    }
  }
}

TEST(Generator, TrialSeedsDiffer) {
  EXPECT_NE(trial_seed(1, 0), trial_seed(1, 1));
  EXPECT_EQ(trial_seed(1, 5), trial_seed(1, 5));
}

TEST(Baseline, TwoSidedSucceedsOnEveryPacket) {
  GeneratorSpec s = small_spec();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    s.seed = seed;
    const ProblemInstance inst = generate_instance(s);
    const BaselineOutcome o =
        run_baseline(inst, BaselineKind::TwoSided, CostModel::reciprocal(), Objective::energy());
    if (!o.feasible) continue;
    EXPECT_EQ(o.successes, inst.size());
    EXPECT_NEAR(o.metric, o.total / static_cast<double>(inst.size()), 1e-15);
  }
}

TEST(Baseline, ReducedInstancesDropBounds) {
  const ProblemInstance inst = generate_instance(small_spec());
  const ProblemInstance pre_only = reduced_instance(inst, BaselineKind::PreOnly);
  const ProblemInstance post_only = reduced_instance(inst, BaselineKind::PostOnly);
  const ProblemInstance neither = reduced_instance(inst, BaselineKind::NoIndividual);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    EXPECT_FALSE(pre_only.post_delays()[i].is_finite());
    EXPECT_TRUE(pre_only.pre_delays()[i].is_finite());
    EXPECT_FALSE(post_only.pre_delays()[i].is_finite());
    EXPECT_TRUE(post_only.post_delays()[i].is_finite());
    EXPECT_FALSE(neither.pre_delays()[i].is_finite());
    EXPECT_FALSE(neither.post_delays()[i].is_finite());
  }
  EXPECT_EQ(reduced_instance(inst, BaselineKind::TwoSided), inst);
}

TEST(Baseline, TinyWindowStarvesTheUnconstrainedBaseline) {
  GeneratorSpec s;
  s.packets = 30;
  s.reference_time = 100;
  s.window = 1;
  std::size_t successes = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    s.seed = seed;
    successes += run_baseline(generate_instance(s), BaselineKind::NoIndividual,
                              CostModel::reciprocal(), Objective::energy())
                     .successes;
  }
  EXPECT_LT(successes, 50u * 30u / 10u);
}

TEST(Baseline, ZeroSuccessMetricIsInfinite) {
  GeneratorSpec s;
  s.packets = 30;
  s.reference_time = 100;
  s.window = 1;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    s.seed = seed;
    const BaselineOutcome o = run_baseline(generate_instance(s), BaselineKind::NoIndividual,
                                           CostModel::reciprocal(), Objective::energy());
    if (o.successes == 0) {
      EXPECT_TRUE(std::isinf(o.metric));
      return;
    }
  }
  GTEST_SKIP() << "no zero-success trial in the sample";
}

TEST(PairwiseSum, MatchesExactSums) {
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7};
  EXPECT_EQ(pairwise_sum(v), 28.0);
  EXPECT_EQ(pairwise_sum(std::span<const double>{}), 0.0);
}

TEST(Sweep, Reproducible) {
  const std::vector<double> windows{1, 3, 5};
  const SweepReport a = sweep_energy(small_spec(), windows, CostModel::reciprocal());
  const SweepReport b = sweep_energy(small_spec(), windows, CostModel::reciprocal());
  EXPECT_EQ(a, b);
}

TEST(Sweep, SerialEqualsParallel) {
  const std::vector<double> budgets{2, 4, 8};
  SweepOptions serial;
  serial.parallel = false;
  SweepOptions parallel;
  parallel.threads = 4;
  const SweepReport a = sweep_time(small_spec(), budgets, CostModel::reciprocal(), serial);
  const SweepReport b = sweep_time(small_spec(), budgets, CostModel::reciprocal(), parallel);
  EXPECT_EQ(a, b);
  std::ostringstream ja;
  std::ostringstream jb;
  write_json(a, ja);
  write_json(b, jb);
  EXPECT_EQ(ja.str(), jb.str());
}

TEST(Sweep, SingleTrialEqualsBaselineRun) {
  GeneratorSpec s = small_spec();
  s.trials = 1;
  const std::vector<double> windows{3};
  const SweepReport r = sweep_energy(s, windows, CostModel::reciprocal());
  ASSERT_EQ(r.points.size(), 1u);
  ASSERT_EQ(r.points[0].trials.size(), 1u);
  GeneratorSpec one = s;
  one.seed = r.points[0].trials[0].seed;
  const ProblemInstance inst = generate_instance(one);
  for (std::size_t b = 0; b < kBaselines.size(); ++b) {
    const BaselineOutcome o =
        run_baseline(inst, kBaselines[b], CostModel::reciprocal(), Objective::energy());
    const BaselineAggregate& agg = r.points[0].baselines[b];
    EXPECT_EQ(agg.trials, 1u);
    EXPECT_EQ(agg.successes_total, o.successes);
    EXPECT_EQ(agg.metric_agg, o.metric);
    EXPECT_EQ(r.points[0].trials[0].outcomes[b].metric, o.metric);
  }
}

TEST(Sweep, CsvHasOneRowPerPointAndBaseline) {
  const std::vector<double> windows{1, 3};
  const SweepReport r = sweep_energy(small_spec(), windows, CostModel::reciprocal());
  std::ostringstream os;
  write_csv(r, os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("axis,baseline,trials,successes_total,metric_agg,metric_mean_of_ratios,"
                       "infeasible_trials",
                       0),
            0u);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2 * 4);
}

TEST(Presets, Parameters) {
  const FigurePreset f6 = figure_preset("fig6");
  EXPECT_EQ(f6.spec.packets, 30u);
  EXPECT_EQ(f6.spec.reference_time, 100.0);
  EXPECT_EQ(f6.objective, Objective::Kind::energy);
  const FigurePreset f7 = figure_preset("fig7");
  EXPECT_EQ(f7.spec.packets, 5u);
  EXPECT_EQ(f7.spec.reference_time, 20.0);
  EXPECT_EQ(f7.spec.window, 3.0);
  EXPECT_EQ(f7.objective, Objective::Kind::time);
  EXPECT_THROW(figure_preset("fig5"), DomainError);
}

}  // namespace
}  // namespace twosided
