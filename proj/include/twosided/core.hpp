#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twosided/errors.hpp"

namespace twosided {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Equality tolerance for constraint tightness and criticality tests on an
// instance whose frame ends at `end_time`.
inline double eq_tolerance(double end_time) {
  return 1e-9 * (end_time > 1.0 ? end_time : 1.0);
}

// A delay bound that is either a finite positive value or absent.
class Bound {
 public:
  static Bound unbounded() { return Bound(); }
  static Bound at(double value) { return Bound(value); }

  bool is_finite() const noexcept { return value_.has_value(); }
  // Throws PreconditionError when unbounded.
  double value() const;
  double value_or(double fallback) const noexcept { return value_.value_or(fallback); }

  friend bool operator==(const Bound&, const Bound&) = default;

 private:
  Bound() = default;
  explicit Bound(double v) : value_(v) {}
  std::optional<double> value_;
};

// Arrival times with two-sided per-packet delay bounds and a reference time.
// Immutable after construction; the constructor rejects invalid data with
// DomainError.
class ProblemInstance {
 public:
  ProblemInstance(std::vector<double> arrivals, std::vector<Bound> pre_delays,
                  std::vector<Bound> post_delays, double reference_time);

  std::size_t size() const noexcept { return arrivals_.size(); }
  std::span<const double> arrivals() const noexcept { return arrivals_; }
  std::span<const Bound> pre_delays() const noexcept { return pre_delays_; }
  std::span<const Bound> post_delays() const noexcept { return post_delays_; }
  double reference_time() const noexcept { return reference_time_; }

  // Same arrivals and reference time with replaced delay vectors.
  ProblemInstance with_delays(std::vector<Bound> pre_delays, std::vector<Bound> post_delays) const;

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;

 private:
  std::vector<double> arrivals_;
  std::vector<Bound> pre_delays_;
  std::vector<Bound> post_delays_;
  double reference_time_;
};

struct DerivedBounds {
  // d_i = t_{i+1} - t_i, with t_{M+1} = end_time.
  std::vector<double> inter_arrivals;
  // t_i + T_pre,i.
  std::vector<Bound> departure_deadlines;
  // t_R - T_post,i.
  std::vector<Bound> departure_floors;
  // t_M + T_pre,M, or t_R when the last pre-delay is unbounded.
  double end_time = 0.0;

  // Deadline of packet i clipped to the end of the frame.
  double deadline(std::size_t i) const {
    const double nu = departure_deadlines[i].value_or(kInf);
    return nu < end_time ? nu : end_time;
  }
  // Floor of packet i, -inf when absent.
  double floor(std::size_t i) const { return departure_floors[i].value_or(-kInf); }
};

DerivedBounds derive_bounds(const ProblemInstance& instance);

// Indices i (0-based) after which the pre-delay of packet i expires before
// packet i+1 arrives, so the link idles regardless of the schedule.
std::vector<std::size_t> forced_idle_points(const ProblemInstance& instance,
                                            const DerivedBounds& bounds);

// A strictly convex, strictly decreasing, positive per-packet cost w(tau)
// together with its inverse and first two derivatives.
class CostModel {
 public:
  using Fn = std::function<double(double)>;

  CostModel(std::string label, Fn evaluate, Fn inverse, Fn derivative, Fn second_derivative);

  // w(tau) = 1 / tau.
  static CostModel reciprocal();
  // w(tau) = tau * (2^(bits / tau) - 1): energy to push `bits` through a unit
  // bandwidth channel in time tau.
  static CostModel shannon(double bits);

  double operator()(double tau) const { return evaluate_(tau); }
  double evaluate(double tau) const { return evaluate_(tau); }
  // Unique tau with w(tau) = cost. Throws DomainError outside the range of w.
  double inverse(double cost) const { return inverse_(cost); }
  double derivative(double tau) const { return derivative_(tau); }
  double second_derivative(double tau) const { return second_derivative_(tau); }
  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
  Fn evaluate_;
  Fn inverse_;
  Fn derivative_;
  Fn second_derivative_;
};

// Transmission durations and the resulting departure times. A contiguous
// schedule departs at the running sums of its durations; a segmented one
// restarts at the arrival that follows a forced idle period.
class Schedule {
 public:
  // Contiguous schedule starting at time 0.
  explicit Schedule(std::vector<double> durations);
  // Schedule with explicit departures. Each transmission must start no
  // earlier than the previous departure.
  Schedule(std::vector<double> durations, std::vector<double> departures);

  std::size_t size() const noexcept { return durations_.size(); }
  std::span<const double> durations() const noexcept { return durations_; }
  std::span<const double> departures() const noexcept { return departures_; }
  // Departure of the last packet.
  double finish_time() const { return departures_.back(); }

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::vector<double> durations_;
  std::vector<double> departures_;
};

struct VerificationReport {
  std::vector<bool> non_idling_ok;
  std::vector<bool> pre_ok;
  std::vector<bool> post_ok;
  double total_cost = 0.0;
  double completion_time = 0.0;

  std::size_t violation_count() const;
  bool all_ok() const { return violation_count() == 0; }
};

// How the last departure relates to t_E: the energy problem ends exactly at
// t_E, the completion-time problem may finish earlier.
enum class FrameEnd { exact, at_most };

// Evaluates every non-idling, pre-delay and post-delay constraint with
// eq_tolerance(t_E). Violations are reported, never thrown.
VerificationReport verify_schedule(const ProblemInstance& instance, const Schedule& schedule,
                                   const CostModel& cost, FrameEnd frame_end = FrameEnd::exact);

// Sum of w(tau_i). Throws DomainError on a non-positive duration.
double total_cost(std::span<const double> durations, const CostModel& cost);
double total_cost(const Schedule& schedule, const CostModel& cost);
// Sum of tau_i.
double completion_time(std::span<const double> durations);
double completion_time(const Schedule& schedule);

}  // namespace twosided
