#include "twosided/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace twosided {

void OracleConfig::validate() const {
  if (grid_points < 50) throw DomainError("oracle grid_points must be at least 50");
  if (!(convergence_tol > 0.0)) throw DomainError("oracle convergence_tol must be positive");
  if (max_iterations < 1) throw DomainError("oracle max_iterations must be positive");
}

namespace {

// Departure variables of the energy problem at a given end time. A packet
// followed by a forced idle period departs at its deadline and the next one
// starts at its own arrival.
struct Layout {
  std::size_t m = 0;
  std::vector<double> lo, hi;
  std::vector<bool> fixed;
  std::vector<bool> restart;  // restart[p]: packet p starts at its arrival
  std::vector<double> arrival;
  double scale = 1.0;
};

Layout make_layout(const ProblemInstance& instance, double end_time) {
  const DerivedBounds b = derive_bounds(instance);
  const double tol = eq_tolerance(b.end_time);
  const auto t = instance.arrivals();
  const std::size_t m = instance.size();
  if (!(end_time > t[m - 1])) throw InfeasibleError("end time is not after the last arrival");
  if (end_time > b.departure_deadlines[m - 1].value_or(kInf) + tol) {
    throw InfeasibleError("end time exceeds the last deadline");
  }
  if (end_time < b.floor(m - 1) - tol) throw InfeasibleError("end time precedes the last floor");

  Layout L;
  L.m = m;
  L.scale = std::max(1.0, end_time);
  L.lo.resize(m);
  L.hi.resize(m);
  L.fixed.assign(m, false);
  L.restart.assign(m, false);
  L.arrival.assign(t.begin(), t.end());
  L.restart[0] = true;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double nu = b.departure_deadlines[k].value_or(kInf);
    if (t[k + 1] > nu + tol) {
      if (nu < b.floor(k) - tol) throw InfeasibleError("packet window is empty");
      L.fixed[k] = true;
      L.lo[k] = L.hi[k] = nu;
      L.restart[k + 1] = true;
      continue;
    }
    L.lo[k] = std::max(b.floor(k), t[k + 1]);
    L.hi[k] = std::min(nu, end_time);
    if (L.lo[k] > L.hi[k] + tol) throw InfeasibleError("packet window is empty");
    if (L.hi[k] - L.lo[k] <= 1e-13 * L.scale) {
      L.fixed[k] = true;
      L.lo[k] = L.hi[k];
    }
  }
  L.fixed[m - 1] = true;
  L.lo[m - 1] = L.hi[m - 1] = end_time;
  return L;
}

double start_of(const Layout& L, const std::vector<double>& s, std::size_t p) {
  if (L.restart[p]) return p == 0 ? 0.0 : L.arrival[p];
  return s[p - 1];
}

std::vector<double> durations_of(const Layout& L, const std::vector<double>& s) {
  std::vector<double> tau(L.m);
  for (std::size_t p = 0; p < L.m; ++p) tau[p] = s[p] - start_of(L, s, p);
  return tau;
}

// Greedy earliest / latest departures keeping every free variable `margin`
// inside its box and every duration at least `margin`.
bool forward_path(const Layout& L, double margin, std::vector<double>& a) {
  a.resize(L.m);
  for (std::size_t p = 0; p < L.m; ++p) {
    const double start = L.restart[p] ? (p == 0 ? 0.0 : L.arrival[p]) : a[p - 1];
    if (L.fixed[p]) {
      if (start + margin > L.hi[p]) return false;
      a[p] = L.hi[p];
    } else {
      a[p] = std::max(L.lo[p] + margin, start + margin);
      if (a[p] > L.hi[p] - margin) return false;
    }
  }
  return true;
}

void backward_path(const Layout& L, double margin, std::vector<double>& b) {
  b.resize(L.m);
  for (std::size_t q = L.m; q-- > 0;) {
    if (L.fixed[q]) {
      b[q] = L.hi[q];
      continue;
    }
    const double next = b[q + 1] - margin;  // the last packet is always fixed
    b[q] = std::min(L.hi[q] - margin, next);
  }
}

std::vector<double> interior_point(const Layout& L) {
  std::vector<double> a;
  double lo = 0.0;
  double hi = L.scale;
  if (!forward_path(L, 0.0, a)) throw InfeasibleError("energy problem has no feasible point");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * L.scale; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (forward_path(L, mid, a)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!(lo > 1e-14 * L.scale)) throw InfeasibleError("energy problem has an empty interior");
  const double margin = 0.5 * lo;
  std::vector<double> b;
  forward_path(L, margin, a);
  backward_path(L, margin, b);
  std::vector<double> s(L.m);
  for (std::size_t p = 0; p < L.m; ++p) s[p] = L.fixed[p] ? L.hi[p] : 0.5 * (a[p] + b[p]);
  return s;
}

class BarrierProblem {
 public:
  BarrierProblem(const Layout& L, const CostModel& w) : L_(L), w_(w) {}

  double objective(const std::vector<double>& s) const {
    double f = 0.0;
    for (std::size_t p = 0; p < L_.m; ++p) {
      const double tau = s[p] - start_of(L_, s, p);
      if (!(tau > 0.0)) return kInf;
      f += w_(tau);
    }
    return f;
  }

  // t * F - sum of log slacks; +inf outside the open domain.
  double phi(const std::vector<double>& s, double t) const {
    double barrier = 0.0;
    for (std::size_t p = 0; p < L_.m; ++p) {
      if (L_.fixed[p]) continue;
      const double a = s[p] - L_.lo[p];
      const double b = L_.hi[p] - s[p];
      if (!(a > 0.0) || !(b > 0.0)) return kInf;
      barrier -= std::log(a) + std::log(b);
    }
    const double f = objective(s);
    if (!std::isfinite(f)) return kInf;
    return t * f + barrier;
  }

  // Newton direction of phi; returns the squared Newton decrement.
  double newton(const std::vector<double>& s, double t, std::vector<double>& dir,
                std::vector<double>& grad) const {
    const std::size_t m = L_.m;
    const std::vector<double> tau = durations_of(L_, s);
    std::vector<double> d1(m), d2(m);
    for (std::size_t p = 0; p < m; ++p) {
      d1[p] = w_.derivative(tau[p]);
      d2[p] = w_.second_derivative(tau[p]);
    }
    std::vector<double> diag(m, 1.0), off(m, 0.0);  // off[p] couples p and p+1
    grad.assign(m, 0.0);
    for (std::size_t p = 0; p < m; ++p) {
      if (L_.fixed[p]) continue;
      const bool coupled = p + 1 < m && !L_.restart[p + 1];
      double g = t * d1[p];
      double h = t * d2[p];
      if (coupled) {
        g -= t * d1[p + 1];
        h += t * d2[p + 1];
        if (!L_.fixed[p + 1]) off[p] = -t * d2[p + 1];
      }
      const double a = s[p] - L_.lo[p];
      const double b = L_.hi[p] - s[p];
      g += -1.0 / a + 1.0 / b;
      h += 1.0 / (a * a) + 1.0 / (b * b);
      grad[p] = g;
      diag[p] = h;
    }
    // Thomas algorithm on the symmetric tridiagonal system H dir = -grad
    std::vector<double> c(m, 0.0), r(m, 0.0);
    double denom = diag[0];
    c[0] = m > 1 ? off[0] / denom : 0.0;
    r[0] = -grad[0] / denom;
    for (std::size_t p = 1; p < m; ++p) {
      denom = diag[p] - off[p - 1] * c[p - 1];
      c[p] = p + 1 < m ? off[p] / denom : 0.0;
      r[p] = (-grad[p] - off[p - 1] * r[p - 1]) / denom;
    }
    dir.assign(m, 0.0);
    dir[m - 1] = r[m - 1];
    for (std::size_t p = m - 1; p-- > 0;) dir[p] = r[p] - c[p] * dir[p + 1];
    double dec = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
      if (L_.fixed[p]) dir[p] = 0.0;
      dec -= grad[p] * dir[p];
    }
    return dec;
  }

 private:
  const Layout& L_;
  const CostModel& w_;
};

OracleResult descent_solve(const Layout& L, const CostModel& cost, const OracleConfig& cfg) {
  std::vector<double> s = interior_point(L);
  BarrierProblem prob(L, cost);
  std::size_t n_free = 0;
  for (std::size_t p = 0; p < L.m; ++p) n_free += !L.fixed[p];
  if (n_free > 0) {
    const double constraints = 2.0 * static_cast<double>(n_free);
    double f = prob.objective(s);
    double t = constraints / (0.1 * (1.0 + std::abs(f)));
    int iterations = 0;
    std::vector<double> dir, grad, trial(L.m);
    while (true) {
      for (int inner = 0; inner < 200; ++inner) {
        if (++iterations > cfg.max_iterations) {
          throw OracleConvergenceError("descent oracle exceeded its iteration limit",
                                       durations_of(L, s));
        }
        const double dec = prob.newton(s, t, dir, grad);
        if (!(dec > 1e-12)) break;
        const double phi0 = prob.phi(s, t);
        double step = 1.0;
        bool moved = false;
        while (step > 1e-20) {
          for (std::size_t p = 0; p < L.m; ++p) trial[p] = s[p] + step * dir[p];
          const double phi1 = prob.phi(trial, t);
          if (phi1 <= phi0 - 0.25 * step * dec) {
            s.swap(trial);
            moved = true;
            break;
          }
          step *= 0.5;
        }
        if (!moved) break;
      }
      f = prob.objective(s);
      if (constraints / t <= cfg.convergence_tol * (1.0 + std::abs(f))) break;
      t *= 10.0;
    }
  }
  std::vector<double> tau = durations_of(L, s);
  const double total = total_cost(tau, cost);
  return {Schedule(std::move(tau), std::move(s)), total};
}

OracleResult grid_solve(const Layout& L, const CostModel& cost, const OracleConfig& cfg) {
  const std::size_t g = static_cast<std::size_t>(cfg.grid_points);
  std::vector<std::vector<double>> values(L.m);
  for (std::size_t p = 0; p < L.m; ++p) {
    if (L.fixed[p]) {
      values[p] = {L.hi[p]};
      continue;
    }
    values[p].resize(g);
    for (std::size_t i = 0; i < g; ++i) {
      values[p][i] = L.lo[p] + (L.hi[p] - L.lo[p]) * static_cast<double>(i) /
                                   static_cast<double>(g - 1);
    }
    values[p].back() = L.hi[p];
  }
  std::vector<std::vector<double>> best(L.m);
  std::vector<std::vector<std::size_t>> from(L.m);
  for (std::size_t p = 0; p < L.m; ++p) {
    best[p].assign(values[p].size(), kInf);
    from[p].assign(values[p].size(), 0);
    for (std::size_t i = 0; i < values[p].size(); ++i) {
      const double x = values[p][i];
      if (p == 0 || L.restart[p]) {
        const double start = p == 0 ? 0.0 : L.arrival[p];
        double prev = 0.0;
        std::size_t arg = 0;
        if (p > 0) {
          const auto it = std::min_element(best[p - 1].begin(), best[p - 1].end());
          prev = *it;
          arg = static_cast<std::size_t>(it - best[p - 1].begin());
        }
        if (x - start > 0.0 && std::isfinite(prev)) {
          best[p][i] = prev + cost(x - start);
          from[p][i] = arg;
        }
        continue;
      }
      for (std::size_t j = 0; j < values[p - 1].size(); ++j) {
        const double tau = x - values[p - 1][j];
        if (!(tau > 0.0) || !std::isfinite(best[p - 1][j])) continue;
        const double v = best[p - 1][j] + cost(tau);
        if (v < best[p][i]) {
          best[p][i] = v;
          from[p][i] = j;
        }
      }
    }
  }
  if (!std::isfinite(best[L.m - 1][0])) {
    throw InfeasibleError("grid oracle found no feasible lattice point");
  }
  std::vector<double> s(L.m);
  std::size_t idx = 0;
  for (std::size_t p = L.m; p-- > 0;) {
    s[p] = values[p][idx];
    idx = from[p][idx];
  }
  std::vector<double> tau = durations_of(L, s);
  const double total = total_cost(tau, cost);
  return {Schedule(std::move(tau), std::move(s)), total};
}

}  // namespace

OracleResult oracle_energy(const ProblemInstance& instance, const CostModel& cost, double end_time,
                           const OracleConfig& config) {
  config.validate();
  const Layout L = make_layout(instance, end_time);
  if (config.mode == OracleMode::grid) return grid_solve(L, cost, config);
  return descent_solve(L, cost, config);
}

OracleTimeResult oracle_time(const BudgetedInstance& budgeted, const OracleConfig& config) {
  const ProblemInstance& inst = budgeted.instance;
  const DerivedBounds b = derive_bounds(inst);
  const double slack = budget_tolerance(budgeted.w_max);
  const OracleResult at_end = oracle_energy(inst, budgeted.cost, b.end_time, config);
  if (at_end.cost > budgeted.w_max + slack) {
    throw InsufficientBudget(at_end.cost, budgeted.w_max);
  }
  auto energy_at = [&](double end) -> double {
    try {
      return oracle_energy(inst, budgeted.cost, end, config).cost;
    } catch (const InfeasibleError&) {
      return kInf;
    }
  };
  double lo = inst.arrivals().back();
  for (std::size_t i = 0; i < inst.size(); ++i) lo = std::max(lo, b.floor(i));
  double hi = b.end_time;
  if (energy_at(lo) <= budgeted.w_max + slack) hi = lo;
  while (hi - lo > 1e-9 * b.end_time) {
    const double mid = 0.5 * (lo + hi);
    if (energy_at(mid) <= budgeted.w_max + slack) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  OracleResult r = oracle_energy(inst, budgeted.cost, hi, config);
  return {std::move(r.schedule), hi};
}

}  // namespace twosided
