#include "rsmech/payments.hpp"

#include <algorithm>
#include <set>

#include "rsmech/errors.hpp"

namespace rsmech {

namespace {

std::vector<int> reinsert(std::vector<int> order, int rider, std::size_t position) {
  order.erase(std::find(order.begin(), order.end(), rider));
  order.insert(order.begin() + static_cast<std::ptrdiff_t>(std::min(position, order.size())), rider);
  return order;
}

int arrival_in(const Instance& instance, const Allocation& alloc, int rider) {
  const auto line = to_timeline(alloc.rider_routes[rider], instance.horizon);
  const Vertex d = instance.riders[rider].destination;
  return static_cast<int>(std::find(line.begin(), line.end(), d) - line.begin());
}

}  // namespace

Rational payment_param(GreedyCache& cache, const TypeProfile& profile, const std::vector<int>& riders,
                       const Rational& safety_coefficient, int* runs_with_taxi) {
  if (safety_coefficient < Rational(1)) throw ContractError("safety coefficient must be at least 1");
  const Instance& inst = cache.instance();
  const auto base = sorted_order(profile, riders);
  std::set<std::vector<int>> orders{base};
  for (int i : base) {
    for (std::size_t qi = 0; qi < base.size(); ++qi) {
      const auto moved_i = reinsert(base, i, qi);
      for (int j : base) {
        if (j == i) continue;
        for (std::size_t qj = 0; qj < base.size(); ++qj) orders.insert(reinsert(moved_i, j, qj));
      }
    }
  }
  int max_travel = 0;
  int with_taxi = 0;
  for (const auto& order : orders) {
    const auto& prefix = cache.run(order);
    if (!step_infeasible_riders(prefix).empty()) ++with_taxi;
    max_travel = std::max(max_travel, prefix.vehicle_travel());
  }
  if (runs_with_taxi) *runs_with_taxi = with_taxi;
  return safety_coefficient * inst.beta * Rational(max_travel);
}

std::vector<Rational> base_payment(const std::vector<int>& t0, const std::vector<int>& tmin_hat,
                                   const Rational& c_fub) {
  if (t0.size() != tmin_hat.size()) throw ShapeError("T0 and Tmin_hat differ in length");
  if (c_fub < Rational(0)) throw ContractError("c_Fub must be non-negative");
  const auto n = t0.size();
  if (n == 0) return {};
  std::vector<std::int64_t> delta(n);
  for (std::size_t i = 0; i < n; ++i) delta[i] = t0[i] - tmin_hat[i];
  const auto lowest = *std::min_element(delta.begin(), delta.end());
  std::int64_t total = 0;
  for (auto& d : delta) {
    d -= lowest;
    total += d;
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = total == 0 ? c_fub / Rational(static_cast<std::int64_t>(n)) : c_fub * Rational(delta[i], total);
  }
  return x;
}

PaymentParams compute_payment_params(GreedyCache& cache, const TypeProfile& profile, const std::vector<int>& riders,
                                     const Rational& safety_coefficient, const SolverOptions& options) {
  const Instance& inst = cache.instance();
  PaymentParams params;
  params.safety_coefficient = safety_coefficient;
  params.profile = profile;
  params.riders = riders;
  std::sort(params.riders.begin(), params.riders.end());
  const auto N = inst.num_riders();
  params.t0.resize(N);
  params.tmin_hat.assign(N, 0);
  for (std::size_t i = 0; i < N; ++i) params.t0[i] = inst.shortest_time(i);
  if (params.riders.empty()) return params;

  params.c_fub = payment_param(cache, profile, params.riders, safety_coefficient, &params.runs_with_taxi);
  try {
    const auto sol = solve_optimal(inst, profile, Objective::kTotalNormalizedDelay, cache.restriction(),
                                   params.riders, options);
    for (int i : params.riders) params.tmin_hat[i] = arrival_in(inst, sol.allocation, i) - params.t0[i];
  } catch (const InfeasibleError&) {
    params.tmin_fallback = true;
  } catch (const SizeError&) {
    params.tmin_fallback = true;
  }
  if (params.tmin_fallback) {
    for (int i : params.riders) {
      try {
        const auto sol =
            solve_optimal(inst, profile, Objective::kTotalNormalizedDelay, cache.restriction(), {i}, options);
        params.tmin_hat[i] = arrival_in(inst, sol.allocation, i) - params.t0[i];
      } catch (const Error&) {
        params.tmin_hat[i] = 0;
      }
    }
  }
  return params;
}

PaymentVector base_payments(const Instance& instance, const PaymentParams& params) {
  PaymentVector x(instance.num_riders(), Rational(0));
  std::vector<int> t0;
  std::vector<int> tmin;
  for (int i : params.riders) {
    t0.push_back(params.t0[i]);
    tmin.push_back(params.tmin_hat[i]);
  }
  const auto split = base_payment(t0, tmin, params.c_fub);
  for (std::size_t s = 0; s < params.riders.size(); ++s) x[params.riders[s]] = split[s];
  return x;
}

int normalized_delay(const Instance& instance, const Allocation& alloc, int rider) {
  if (uses_taxi(instance, alloc, static_cast<std::size_t>(rider))) return 0;
  return arrival_in(instance, alloc, rider) - instance.shortest_time(static_cast<std::size_t>(rider));
}

MyersonResult myerson_sweep_oracle(const AllocationRule& rule, const Instance& instance, const TypeProfile& profile,
                                   int rider, int grid_resolution) {
  if (rider < 0 || static_cast<std::size_t>(rider) >= profile.size()) throw ContractError("unknown rider");
  const Rational own = profile[rider];
  std::vector<Rational> candidates;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (static_cast<int>(j) != rider && profile[j] <= own && profile[j] > Rational(0)) candidates.push_back(profile[j]);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  auto delay_at = [&](const Rational& g) {
    auto p = profile;
    p[rider] = g;
    return normalized_delay(instance, rule(p), rider);
  };

  MyersonResult out;
  auto note_violation = [&](const Rational& lo, const Rational& hi) {
    if (out.monotone) out.violation = std::make_pair(lo, hi);
    out.monotone = false;
  };
  // probe[k] lies strictly between candidates[k-1] and candidates[k]; the last probe is the report itself.
  std::vector<Rational> probes;
  for (std::size_t k = 0; k <= candidates.size(); ++k) {
    const Rational lo = k == 0 ? Rational(0) : candidates[k - 1];
    if (k == candidates.size()) {
      probes.push_back(own);
    } else {
      probes.push_back((lo + candidates[k]) / Rational(2));
    }
  }
  std::vector<int> delays;
  for (const auto& p : probes) delays.push_back(delay_at(p));
  for (std::size_t k = candidates.size(); k-- > 0;) {
    const int step = delays[k] - delays[k + 1];
    if (step < 0) note_violation(probes[k], probes[k + 1]);
    if (step == 0) continue;
    out.trace.jumps.push_back(candidates[k]);
    out.trace.increments.push_back(step);
    out.trace.delta_x += candidates[k] * Rational(step);
  }
  out.increment = out.trace.delta_x;

  if (grid_resolution > 0 && own > Rational(0)) {
    // The delay must be constant between consecutive jump points.
    auto segment_of = [&](const Rational& g) {
      std::size_t k = 0;
      while (k < candidates.size() && candidates[k] <= g) ++k;
      return k;
    };
    std::optional<Rational> prev;
    int prev_delay = 0;
    for (int s = 0; s <= grid_resolution; ++s) {
      const Rational g = own * Rational(s, grid_resolution);
      const int d = delay_at(g);
      const auto seg = segment_of(g);
      const bool at_jump = seg > 0 && candidates[seg - 1] == g;
      if (!at_jump && seg < delays.size() && d != delays[seg]) note_violation(g, probes[seg]);
      if (prev && d > prev_delay) note_violation(*prev, g);
      prev = g;
      prev_delay = d;
    }
  }
  return out;
}

}  // namespace rsmech
