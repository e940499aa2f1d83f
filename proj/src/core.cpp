#include "twosided/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace twosided {

double Bound::value() const {
  if (!value_) throw PreconditionError("value() called on an unbounded delay");
  return *value_;
}

namespace {

void require_positive_bounds(const std::vector<Bound>& bounds, const char* name) {
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    if (!bounds[i].is_finite()) continue;
    const double v = bounds[i].value();
    if (!std::isfinite(v) || v <= 0.0) {
      throw DomainError(std::string(name) + "[" + std::to_string(i) +
                        "] must be positive and finite or unbounded");
    }
  }
}

}  // namespace

ProblemInstance::ProblemInstance(std::vector<double> arrivals, std::vector<Bound> pre_delays,
                                 std::vector<Bound> post_delays, double reference_time)
    : arrivals_(std::move(arrivals)),
      pre_delays_(std::move(pre_delays)),
      post_delays_(std::move(post_delays)),
      reference_time_(reference_time) {
  if (arrivals_.empty()) throw DomainError("instance needs at least one packet");
  if (pre_delays_.size() != arrivals_.size() || post_delays_.size() != arrivals_.size()) {
    throw DomainError("arrivals, pre_delays and post_delays must have equal length");
  }
  if (arrivals_.front() != 0.0) throw DomainError("arrivals[0] must be 0");
  for (std::size_t i = 1; i < arrivals_.size(); ++i) {
    if (!std::isfinite(arrivals_[i]) || arrivals_[i] <= arrivals_[i - 1]) {
      throw DomainError("arrivals must be finite and strictly increasing (index " +
                        std::to_string(i) + ")");
    }
  }
  require_positive_bounds(pre_delays_, "pre_delays");
  require_positive_bounds(post_delays_, "post_delays");
  if (!std::isfinite(reference_time_) || reference_time_ <= 0.0) {
    throw DomainError("reference_time must be positive and finite");
  }
}

ProblemInstance ProblemInstance::with_delays(std::vector<Bound> pre_delays,
                                             std::vector<Bound> post_delays) const {
  return ProblemInstance(arrivals_, std::move(pre_delays), std::move(post_delays),
                         reference_time_);
}

DerivedBounds derive_bounds(const ProblemInstance& instance) {
  const std::size_t m = instance.size();
  const auto t = instance.arrivals();
  const double t_r = instance.reference_time();
  DerivedBounds b;
  const Bound& last_pre = instance.pre_delays()[m - 1];
  b.end_time = last_pre.is_finite() ? t[m - 1] + last_pre.value() : t_r;
  b.inter_arrivals.resize(m);
  b.departure_deadlines.reserve(m);
  b.departure_floors.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double next = (i + 1 < m) ? t[i + 1] : b.end_time;
    b.inter_arrivals[i] = next - t[i];
    const Bound& pre = instance.pre_delays()[i];
    const Bound& post = instance.post_delays()[i];
    b.departure_deadlines.push_back(pre.is_finite() ? Bound::at(t[i] + pre.value())
                                                    : Bound::unbounded());
    b.departure_floors.push_back(post.is_finite() ? Bound::at(t_r - post.value())
                                                  : Bound::unbounded());
  }
  return b;
}

std::vector<std::size_t> forced_idle_points(const ProblemInstance& instance,
                                            const DerivedBounds& bounds) {
  std::vector<std::size_t> points;
  const auto t = instance.arrivals();
  const double tol = eq_tolerance(bounds.end_time);
  for (std::size_t i = 0; i + 1 < instance.size(); ++i) {
    const Bound& nu = bounds.departure_deadlines[i];
    if (nu.is_finite() && t[i + 1] > nu.value() + tol) points.push_back(i);
  }
  return points;
}

// ---------------------------------------------------------------------------

CostModel::CostModel(std::string label, Fn evaluate, Fn inverse, Fn derivative,
                     Fn second_derivative)
    : label_(std::move(label)),
      evaluate_(std::move(evaluate)),
      inverse_(std::move(inverse)),
      derivative_(std::move(derivative)),
      second_derivative_(std::move(second_derivative)) {}

CostModel CostModel::reciprocal() {
  return CostModel(
      "inverse",
      [](double tau) {
        if (!(tau > 0.0)) throw DomainError("cost evaluated at non-positive duration");
        return 1.0 / tau;
      },
      [](double c) {
        if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("w^-1 needs a positive cost");
        return 1.0 / c;
      },
      [](double tau) { return -1.0 / (tau * tau); },
      [](double tau) { return 2.0 / (tau * tau * tau); });
}

CostModel CostModel::shannon(double bits) {
  if (!(bits > 0.0) || !std::isfinite(bits)) throw DomainError("shannon cost needs bits > 0");
  const double a = bits * std::numbers::ln2;
  auto w = [a](double tau) {
    if (!(tau > 0.0)) throw DomainError("cost evaluated at non-positive duration");
    return tau * std::expm1(a / tau);
  };
  // w decreases from +inf to a as tau grows, so every c > a has one preimage.
  auto inv = [a, w](double c) {
    if (!(c > a) || !std::isfinite(c)) {
      throw DomainError("w^-1 for the shannon cost needs a finite cost above bits*ln2");
    }
    double lo = 1.0;
    double hi = 1.0;
    while (w(hi) > c) hi *= 2.0;
    while (w(lo) < c) lo *= 0.5;
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (w(mid) > c) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (hi - lo <= 1e-15 * hi) break;
    }
    return 0.5 * (lo + hi);
  };
  auto d1 = [a](double tau) {
    const double x = a / tau;
    return std::expm1(x) - x * std::exp(x);
  };
  auto d2 = [a](double tau) {
    const double x = a / tau;
    return x * x * std::exp(x) / tau;
  };
  return CostModel("shannon(" + std::to_string(bits) + ")", w, inv, d1, d2);
}

// ---------------------------------------------------------------------------

Schedule::Schedule(std::vector<double> durations) : durations_(std::move(durations)) {
  departures_.resize(durations_.size());
  double s = 0.0;
  for (std::size_t i = 0; i < durations_.size(); ++i) {
    if (!(durations_[i] > 0.0) || !std::isfinite(durations_[i])) {
      throw DomainError("schedule durations must be positive (index " + std::to_string(i) + ")");
    }
    s += durations_[i];
    departures_[i] = s;
  }
}

Schedule::Schedule(std::vector<double> durations, std::vector<double> departures)
    : durations_(std::move(durations)), departures_(std::move(departures)) {
  if (durations_.size() != departures_.size()) {
    throw DomainError("durations and departures must have equal length");
  }
  double prev = 0.0;
  for (std::size_t i = 0; i < durations_.size(); ++i) {
    if (!(durations_[i] > 0.0) || !std::isfinite(durations_[i])) {
      throw DomainError("schedule durations must be positive (index " + std::to_string(i) + ")");
    }
    const double start = departures_[i] - durations_[i];
    const double tol = 1e-9 * std::max(1.0, std::abs(departures_[i]));
    if (start < prev - tol) {
      throw DomainError("transmission " + std::to_string(i) +
                        " starts before the previous departure");
    }
    prev = departures_[i];
  }
}

// ---------------------------------------------------------------------------

std::size_t VerificationReport::violation_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < non_idling_ok.size(); ++i) {
    n += !non_idling_ok[i];
    n += !pre_ok[i];
    n += !post_ok[i];
  }
  return n;
}

VerificationReport verify_schedule(const ProblemInstance& instance, const Schedule& schedule,
                                   const CostModel& cost, FrameEnd frame_end) {
  const std::size_t m = instance.size();
  if (schedule.size() != m) {
    throw PreconditionError("schedule has " + std::to_string(schedule.size()) +
                            " durations for an instance of " + std::to_string(m) + " packets");
  }
  const DerivedBounds b = derive_bounds(instance);
  const double tol = eq_tolerance(b.end_time);
  const auto t = instance.arrivals();
  const auto tau = schedule.durations();
  const auto s = schedule.departures();

  std::vector<bool> forced(m, false);
  for (std::size_t i : forced_idle_points(instance, b)) forced[i] = true;

  VerificationReport r;
  r.non_idling_ok.assign(m, true);
  r.pre_ok.assign(m, true);
  r.post_ok.assign(m, true);
  for (std::size_t k = 0; k < m; ++k) {
    const double start = s[k] - tau[k];
    bool ok = start >= t[k] - tol;
    if (k == 0) ok = ok && std::abs(start) <= tol;
    if (k + 1 < m) {
      const double next_start = s[k + 1] - tau[k + 1];
      if (forced[k]) {
        ok = ok && std::abs(s[k] - b.departure_deadlines[k].value()) <= tol &&
             std::abs(next_start - t[k + 1]) <= tol;
      } else {
        ok = ok && s[k] >= t[k + 1] - tol && std::abs(next_start - s[k]) <= tol;
      }
    } else {
      ok = ok && (frame_end == FrameEnd::exact ? std::abs(s[k] - b.end_time) <= tol
                                               : s[k] <= b.end_time + tol);
    }
    r.non_idling_ok[k] = ok;
    r.pre_ok[k] = s[k] <= b.deadline(k) + tol;
    const Bound& floor = b.departure_floors[k];
    r.post_ok[k] = !floor.is_finite() || s[k] >= floor.value() - tol;
  }
  r.total_cost = total_cost(schedule, cost);
  r.completion_time = completion_time(schedule);
  return r;
}

double total_cost(std::span<const double> durations, const CostModel& cost) {
  double sum = 0.0;
  for (double tau : durations) {
    if (!(tau > 0.0)) throw DomainError("total_cost: non-positive duration");
    sum += cost(tau);
  }
  return sum;
}

double total_cost(const Schedule& schedule, const CostModel& cost) {
  return total_cost(schedule.durations(), cost);
}

double completion_time(std::span<const double> durations) {
  double sum = 0.0;
  for (double tau : durations) {
    if (!(tau > 0.0)) throw DomainError("completion_time: non-positive duration");
    sum += tau;
  }
  return sum;
}

double completion_time(const Schedule& schedule) { return completion_time(schedule.durations()); }

}  // namespace twosided
