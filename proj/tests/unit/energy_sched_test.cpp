#include <gtest/gtest.h>

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

std::vector<double> durations(const Schedule& s) {
  return {s.durations().begin(), s.durations().end()};
}

ProblemInstance golden_instance(double t3 = 10.0) {
  return ProblemInstance({0, 4, t3, 18}, finite({24, 16, 34, 23}), finite({37, 31, 8, 24}), 41);
}

TEST(SingleDeadline, Goldens) {
  const std::vector<double> a{4, 8, 18, 2};
  EXPECT_EQ(durations(schedule_single_deadline(a, 32)), (std::vector<double>{10, 10, 10, 2}));
  const std::vector<double> b{8, 8, 8, 8};
  EXPECT_EQ(durations(schedule_single_deadline(b, 32)), (std::vector<double>{8, 8, 8, 8}));
  const std::vector<double> c{2, 2, 2, 26};
  EXPECT_EQ(durations(schedule_single_deadline(c, 32)), (std::vector<double>{8, 8, 8, 8}));
}

TEST(SingleDeadline, RejectsBadInput) {
  const std::vector<double> zero{4, 0, 2};
  EXPECT_THROW(schedule_single_deadline(zero, 6), DomainError);
  const std::vector<double> bad_sum{1, 2};
  EXPECT_THROW(schedule_single_deadline(bad_sum, 5), DomainError);
}

TEST(TwoSided, Golden) {
  EXPECT_EQ(durations(schedule_energy_two_sided(golden_instance())),
            (std::vector<double>{10, 10, 13, 8}));
}

TEST(TwoSided, GoldenInvariantInThirdArrival) {
  // 18 itself collides with the fourth arrival; the closest admissible value stands in
  const CostModel w = CostModel::reciprocal();
  for (double t3 : {5.0, 10.0, 15.0, std::nextafter(18.0, 0.0)}) {
    const ProblemInstance inst = golden_instance(t3);
    const Schedule s = schedule_energy_two_sided(inst);
    const std::vector<double> expect{10, 10, 13, 8};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(s.durations()[i], expect[i], 1e-9) << t3;
    const OracleResult o = oracle_energy(inst, w, 41.0);
    EXPECT_NEAR(o.cost, total_cost(s, w), 1e-6) << t3;
  }
}

TEST(TwoSided, UnboundedDeadlinesReduceToSingleDeadline) {
  const ProblemInstance inst({0, 8, 16, 24}, none(4), none(4), 32);
  EXPECT_EQ(durations(schedule_energy_two_sided(inst)), (std::vector<double>{8, 8, 8, 8}));
}

TEST(TwoSided, SinglePacketDepartsAtDeadline) {
  const ProblemInstance inst({0}, finite({6}), finite({9}), 12);
  EXPECT_EQ(durations(schedule_energy_two_sided(inst)), (std::vector<double>{6}));
}

TEST(TwoSided, RejectsInfeasibleAndSegmented) {
  const ProblemInstance infeasible({0}, finite({1}), finite({2}), 10);
  EXPECT_THROW(schedule_energy_two_sided(infeasible), PreconditionError);
  const ProblemInstance segmented({0, 1, 10}, finite({2, 2, 5}), none(3), 20);
  EXPECT_THROW(schedule_energy_two_sided(segmented), PreconditionError);
  EXPECT_NO_THROW(schedule_energy(segmented));
}

TEST(NextBatch, FirstBatchOfGolden) {
  BatchState st;
  st.arrivals = {0, 4, 10, 18};
  st.deadlines = {24, 20, 41, 41};
  st.floors = {4, 10, 33, 17};
  st.end_time = 41;
  const EnergyBatch first = next_batch(st);
  EXPECT_EQ(first.count, 2u);
  EXPECT_EQ(first.duration, 10.0);
  EXPECT_EQ(first.end, EnergyBatch::End::pre_critical);
  EXPECT_EQ(st.cursor, 2u);
  const EnergyBatch second = next_batch(st);
  EXPECT_EQ(second.count, 1u);
  EXPECT_EQ(second.duration, 13.0);
  EXPECT_EQ(second.end, EnergyBatch::End::post_critical);
  const EnergyBatch third = next_batch(st);
  EXPECT_EQ(third.duration, 8.0);
  EXPECT_EQ(third.end, EnergyBatch::End::regular);
  EXPECT_EQ(st.cursor, 4u);
}

TEST(CostIndependence, Golden) {
  EXPECT_TRUE(
      cost_independence_check(golden_instance(), CostModel::reciprocal(), CostModel::shannon(1)));
}

TEST(CostIndependenceProperty, RandomInstances) {
  std::mt19937_64 rng(3);
  testing::RandomInstanceOptions opts;
  for (int i = 0; i < 100; ++i) {
    const ProblemInstance inst = testing::random_feasible_instance(rng, opts);
    EXPECT_TRUE(
        cost_independence_check(inst, CostModel::reciprocal(), CostModel::shannon(1.0)));
  }
}

TEST(CostIndependenceProperty, OracleOptimumMatchesAcrossCosts) {
  std::mt19937_64 rng(4);
  testing::RandomInstanceOptions opts;
  opts.max_packets = 4;
  for (int i = 0; i < 40; ++i) {
    const ProblemInstance inst = testing::random_feasible_instance(rng, opts);
    const double end = derive_bounds(inst).end_time;
    const OracleResult a = oracle_energy(inst, CostModel::reciprocal(), end);
    const OracleResult b = oracle_energy(inst, CostModel::shannon(1.0), end);
    for (std::size_t k = 0; k < inst.size(); ++k) {
      EXPECT_NEAR(a.schedule.durations()[k], b.schedule.durations()[k], 1e-4 * end) << i;
    }
  }
}

TEST(TwoSidedProperty, ValidOnRandomInstances) {
  std::mt19937_64 rng(8);
  testing::RandomInstanceOptions opts;
  opts.max_packets = 10;
  for (int i = 0; i < 10000; ++i) {
    const ProblemInstance inst = testing::random_feasible_instance(rng, opts);
    ASSERT_TRUE(verify_schedule(inst, schedule_energy_two_sided(inst), CostModel::reciprocal())
                    .all_ok())
        << i;
  }
}

TEST(TwoSidedProperty, OptimalAgainstOracle) {
  std::mt19937_64 rng(9);
  testing::RandomInstanceOptions opts;
  for (int i = 0; i < 300; ++i) {
    const ProblemInstance inst = testing::random_feasible_instance(rng, opts);
    const Schedule s = schedule_energy_two_sided(inst);
    const double end = derive_bounds(inst).end_time;
    for (const CostModel& w : {CostModel::reciprocal(), CostModel::shannon(1.0)}) {
      const double oracle = oracle_energy(inst, w, end).cost;
      EXPECT_LE(total_cost(s, w), oracle + 1e-6 * (1.0 + oracle)) << i << ' ' << w.label();
    }
  }
}

TEST(TwoSidedProperty, PostOnlyDurationsNonIncreasing) {
  std::mt19937_64 rng(10);
  testing::RandomInstanceOptions opts;
  opts.pre_probability = 0.0;
  opts.max_packets = 10;
  for (int i = 0; i < 2000; ++i) {
    const ProblemInstance inst = testing::random_feasible_instance(rng, opts);
    const Schedule s = schedule_energy_two_sided(inst);
    const double tol = eq_tolerance(derive_bounds(inst).end_time);
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
      EXPECT_GE(s.durations()[k], s.durations()[k + 1] - tol) << i;
    }
  }
}

TEST(TwoSidedProperty, NoDeadlinesMatchesSingleDeadline) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> gap(0.1, 6.0);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t m = 1 + i % 10;
    std::vector<double> d(m);
    for (double& x : d) x = gap(rng);
    // arrivals are the running sums of d, as the single-deadline scheduler sees them
    std::vector<double> t{0.0};
    while (t.size() < m) t.push_back(t.back() + d[t.size() - 1]);
    const double t_r = t.back() + d.back();
    const ProblemInstance inst(t, none(m), none(m), t_r);
    EXPECT_EQ(durations(schedule_energy_two_sided(inst)),
              durations(schedule_single_deadline(d, t_r)))
        << i;
  }
}

TEST(TwoSidedProperty, Deterministic) {
  std::mt19937_64 rng(13);
  testing::RandomInstanceOptions opts;
  for (int i = 0; i < 200; ++i) {
    opts.segments = 1 + i % 2;
    const ProblemInstance inst = testing::random_feasible_instance(rng, opts);
    EXPECT_EQ(schedule_energy(inst), schedule_energy(inst));
  }
}

}  // namespace
}  // namespace twosided
