#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "random_instances.hpp"
#include "twosided/energy_sched.hpp"
#include "twosided/feasibility.hpp"
#include "twosided/oracle.hpp"

namespace twosided {
namespace {

std::vector<Bound> none(std::size_t n) { return std::vector<Bound>(n, Bound::unbounded()); }

std::vector<Bound> finite(std::initializer_list<double> values) {
  std::vector<Bound> out;
  for (double v : values) out.push_back(Bound::at(v));
  return out;
}

TEST(CheckFeasibility, SinglePacketWindow) {
  const ProblemInstance inst({0}, finite({6}), finite({9}), 12);
  const FeasibilityVerdict v = check_feasibility(inst);
  EXPECT_TRUE(v.feasible);
  EXPECT_TRUE(v.violations.empty());
}

TEST(CheckFeasibility, EmptyWindowIsNecessaryViolation) {
  const ProblemInstance inst({0}, finite({1}), finite({2}), 10);
  const FeasibilityVerdict v = check_feasibility(inst);
  EXPECT_FALSE(v.feasible);
  ASSERT_EQ(v.violations.size(), 1u);
  EXPECT_EQ(v.violations[0].rule, FeasibilityRule::necessary);
  EXPECT_EQ(v.violations[0].packet, 0u);
  EXPECT_EQ(to_string(FeasibilityRule::necessary), "necessary");
}

TEST(CheckFeasibility, FifoPairViolation) {
  const ProblemInstance inst({0, 5}, finite({20, 1}), finite({2, 20}), 10);
  const FeasibilityVerdict v = check_feasibility(inst);
  EXPECT_FALSE(v.feasible);
  ASSERT_EQ(v.violations.size(), 1u);
  EXPECT_EQ(v.violations[0].rule, FeasibilityRule::fifo_strict);
  ASSERT_TRUE(v.violations[0].earlier.has_value());
  EXPECT_EQ(*v.violations[0].earlier, 0u);
  EXPECT_EQ(v.violations[0].packet, 1u);
}

TEST(CheckFeasibility, WindowEqualityIsFeasible) {
  // deadline 3 == floor 3
  const ProblemInstance inst({0}, finite({3}), finite({7}), 10);
  EXPECT_TRUE(check_feasibility(inst).feasible);
}

TEST(CheckFeasibility, ListsEveryViolation) {
  const ProblemInstance inst({0, 1, 2}, finite({1, 1, 1}), finite({2, 2, 2}), 10);
  const FeasibilityVerdict v = check_feasibility(inst);
  EXPECT_FALSE(v.feasible);
  EXPECT_GE(v.violations.size(), 3u);
}

TEST(Decompose, NoSplitPoint) {
  const ProblemInstance inst({0, 2, 5}, finite({3, 4, 5}), none(3), 20);
  const Decomposition d = decompose(inst);
  ASSERT_EQ(d.segments.size(), 1u);
  EXPECT_EQ(d.segments[0].first, 0u);
  EXPECT_EQ(d.segments[0].last, 2u);
}

TEST(Decompose, TwoSegments) {
  const ProblemInstance inst({0, 1, 10}, finite({2, 2, 5}), none(3), 20);
  const Decomposition d = decompose(inst);
  ASSERT_EQ(d.segments.size(), 2u);
  EXPECT_EQ(d.segments[0].first, 0u);
  EXPECT_EQ(d.segments[0].last, 1u);
  EXPECT_EQ(d.segments[1].first, 2u);
  EXPECT_EQ(d.segments[1].last, 2u);
  EXPECT_EQ(d.segments[1].origin, 10.0);
}

TEST(Decompose, ThreeSegments) {
  const ProblemInstance inst({0, 5, 6, 20}, finite({2, 3, 2, 4}), none(4), 30);
  const Decomposition d = decompose(inst);
  ASSERT_EQ(d.segments.size(), 3u);
  EXPECT_EQ(d.segments[0].last, 0u);
  EXPECT_EQ(d.segments[1].first, 1u);
  EXPECT_EQ(d.segments[1].last, 2u);
  EXPECT_EQ(d.segments[2].first, 3u);
}

TEST(Decompose, InfeasibleThrows) {
  const ProblemInstance inst({0}, finite({1}), finite({2}), 10);
  EXPECT_THROW(decompose(inst), PreconditionError);
}

TEST(Decompose, SegmentInstanceIsShifted) {
  const ProblemInstance inst({0, 1, 10}, finite({2, 2, 5}), finite({30, 30, 6}), 20);
  const Decomposition d = decompose(inst);
  const ProblemInstance last = segment_instance(inst, d.segments[1]);
  ASSERT_EQ(last.size(), 1u);
  EXPECT_EQ(last.arrivals()[0], 0.0);
  const DerivedBounds b = derive_bounds(last);
  EXPECT_EQ(b.end_time, 5.0);
  // floor 14 on the original axis is 4 in segment time
  EXPECT_DOUBLE_EQ(b.floor(0), 4.0);
}

TEST(Decompose, StitchRestoresAbsoluteDepartures) {
  const ProblemInstance inst({0, 1, 10}, finite({2, 2, 5}), none(3), 20);
  const Schedule s = schedule_energy(inst);
  EXPECT_EQ(std::vector<double>(s.departures().begin(), s.departures().end()),
            (std::vector<double>{1.5, 3, 15}));
  EXPECT_TRUE(verify_schedule(inst, s, CostModel::reciprocal()).all_ok());
}

// Earliest FIFO departures on a lattice of step t_E/400.
bool grid_feasible(const ProblemInstance& inst) {
  const DerivedBounds b = derive_bounds(inst);
  const double step = b.end_time / 400.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < inst.size(); ++k) {
    const double lo = std::max({prev + step, inst.arrivals()[k] + step, b.floor(k)});
    const double s = std::ceil(lo / step) * step;
    if (s > b.deadline(k)) return false;
    prev = s;
  }
  return true;
}

TEST(CheckFeasibilityProperty, AgreesWithLatticeSearch) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> gap(0.2, 4.0);
  std::uniform_real_distribution<double> delay(0.2, 12.0);
  std::bernoulli_distribution coin(0.7);
  int grid_hits = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + trial % 3;
    std::vector<double> t{0.0};
    while (t.size() < m) t.push_back(t.back() + gap(rng));
    std::vector<Bound> pre;
    std::vector<Bound> post;
    for (std::size_t i = 0; i < m; ++i) {
      pre.push_back(coin(rng) ? Bound::at(delay(rng)) : Bound::unbounded());
      post.push_back(coin(rng) ? Bound::at(delay(rng)) : Bound::unbounded());
    }
    const double t_r = t.back() + delay(rng);
    const ProblemInstance inst(t, pre, post, t_r);
    const FeasibilityVerdict v = check_feasibility(inst);
    if (grid_feasible(inst)) {
      ++grid_hits;
      EXPECT_TRUE(v.feasible) << trial;
    }
    if (v.feasible) {
      const DerivedBounds b = derive_bounds(inst);
      for (std::size_t i = 0; i < m; ++i) {
        EXPECT_LE(std::max(b.floor(i), t[i]), b.deadline(i) + eq_tolerance(b.end_time));
      }
    }
  }
  EXPECT_GT(grid_hits, 100);
}

TEST(DecomposeProperty, SegmentwiseMatchesWholeOracle) {
  std::mt19937_64 rng(31);
  testing::RandomInstanceOptions opts;
  const CostModel w = CostModel::reciprocal();
  for (int i = 0; i < 200; ++i) {
    opts.segments = 2 + i % 2;
    opts.max_packets = 6 / opts.segments;
    const ProblemInstance inst = testing::random_feasible_instance(rng, opts);
    EXPECT_GE(decompose(inst).segments.size(), 2u);
    const double ours = total_cost(schedule_energy(inst), w);
    const OracleResult o = oracle_energy(inst, w, derive_bounds(inst).end_time);
    EXPECT_NEAR(ours, o.cost, 1e-6) << i;
  }
}

}  // namespace
}  // namespace twosided
