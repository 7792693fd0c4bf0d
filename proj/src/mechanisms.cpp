#include "rsmech/mechanisms.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "rsmech/errors.hpp"

namespace rsmech {

namespace {

std::vector<int> all_riders(const Instance& instance) {
  std::vector<int> all(instance.num_riders());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

std::vector<int> without(const std::vector<int>& riders, int rider) {
  std::vector<int> out;
  for (int j : riders) {
    if (j != rider) out.push_back(j);
  }
  return out;
}

std::vector<int> reinsert(std::vector<int> order, int rider, std::size_t position) {
  order.erase(std::find(order.begin(), order.end(), rider));
  order.insert(order.begin() + static_cast<std::ptrdiff_t>(std::min(position, order.size())), rider);
  return order;
}

MechanismOutcome blank_outcome(const Instance& instance, MechanismKind kind) {
  MechanismOutcome out;
  out.mechanism = to_string(kind);
  out.payments.assign(instance.num_riders(), Rational(0));
  out.base.assign(instance.num_riders(), Rational(0));
  out.traces.assign(instance.num_riders(), JumpPaymentTrace{});
  return out;
}

}  // namespace

std::string to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kVcg: return "vcg";
    case MechanismKind::kBvcg: return "bvcg";
    case MechanismKind::kHungarian: return "hungarian";
    case MechanismKind::kNaiveGreedy: return "naive-greedy";
    case MechanismKind::kGarsN: return "gars-n";
    case MechanismKind::kGarsNir: return "gars-nir";
    case MechanismKind::kSgarsNir: return "sgars-nir";
  }
  return "unknown";
}

std::optional<MechanismKind> parse_mechanism(const std::string& name) {
  for (auto kind : all_mechanisms()) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::vector<MechanismKind> all_mechanisms() {
  return {MechanismKind::kVcg,    MechanismKind::kBvcg,    MechanismKind::kHungarian, MechanismKind::kNaiveGreedy,
          MechanismKind::kGarsN,  MechanismKind::kGarsNir, MechanismKind::kSgarsNir};
}

MechanismCache::MechanismCache(const Instance& instance, SolverOptions options)
    : instance_(&instance), options_(options) {}

GreedyCache& MechanismCache::greedy(Restriction restriction) {
  // With one vehicle both restrictions describe the same feasible set.
  if (instance_->num_vehicles() <= 1) restriction = Restriction::kSingleVehicle;
  auto& slot = restriction == Restriction::kAllowSwitching ? switching_ : single_;
  if (!slot) slot = std::make_unique<GreedyCache>(*instance_, restriction, options_);
  return *slot;
}

const OptimalSolution& MechanismCache::optimal(const TypeProfile& profile, Objective objective,
                                               const std::vector<int>& riders) {
  std::vector<Rational> reports;
  for (int j : riders) reports.push_back(profile[j]);
  auto& bucket = exact_[{static_cast<int>(objective), reports}];
  if (auto it = bucket.find(riders); it != bucket.end()) return it->second;
  auto sol = solve_optimal(*instance_, profile, objective, Restriction::kAllowSwitching, riders, options_);
  return bucket.emplace(riders, std::move(sol)).first->second;
}

// ---------------------------------------------------------------------------

MechanismOutcome gars_n(const Instance& instance, const TypeProfile& profile, const PaymentParams& params,
                        Restriction restriction, MechanismCache& cache) {
  validate_profile(instance, profile);
  auto out = blank_outcome(instance, MechanismKind::kGarsN);
  GreedyCache& greedy = cache.greedy(restriction);
  const auto order = sorted_order(profile, params.riders);
  const GreedyPrefix prefix = greedy.run(order);
  out.order = order;
  out.allocation = to_allocation(instance, prefix);
  out.step_infeasible = step_infeasible_riders(prefix);
  out.base = base_payments(instance, params);
  out.params = params;

  for (std::size_t p = 0; p < order.size(); ++p) {
    const int i = order[p];
    int t = normalized_delay(instance, prefix, i);
    auto& trace = out.traces[i];
    for (std::size_t q = p + 1; q < order.size(); ++q) {
      const Rational z = profile[order[q]];
      const int moved = normalized_delay(instance, greedy.run(reinsert(order, i, q)), i);
      // Equal reports form a single jump point; z = 0 carries no payment.
      if (moved != t && z > Rational(0)) {
        if (!trace.jumps.empty() && trace.jumps.back() == z) {
          trace.increments.back() += moved - t;
        } else {
          trace.jumps.push_back(z);
          trace.increments.push_back(moved - t);
        }
        trace.delta_x += Rational(moved - t) * z;
        if (trace.increments.back() == 0) {
          trace.jumps.pop_back();
          trace.increments.pop_back();
        }
      }
      t = moved;
    }
    out.payments[i] = prefix.taxi[i] ? Rational(0) : trace.delta_x + out.base[i];
  }
  out.costs = cost_report(instance, out.allocation, profile);
  return out;
}

MechanismOutcome gars_n(const Instance& instance, const TypeProfile& profile, const GarsOptions& options,
                        MechanismCache& cache) {
  const auto& seed_profile = options.param_profile ? *options.param_profile : profile;
  const auto params = compute_payment_params(cache.greedy(options.restriction), seed_profile, all_riders(instance),
                                             options.safety_coefficient, cache.options());
  return gars_n(instance, profile, params, options.restriction, cache);
}

MechanismOutcome gars_nir(const Instance& instance, const TypeProfile& profile, const GarsOptions& options,
                          MechanismCache& cache) {
  validate_profile(instance, profile);
  const auto& seed_profile = options.param_profile ? *options.param_profile : profile;
  GreedyCache& greedy = cache.greedy(options.restriction);
  std::vector<int> survivors = all_riders(instance);
  std::vector<int> excluded;
  PaymentParams params;
  bool filtered = false;
  while (true) {
    params = compute_payment_params(greedy, seed_profile, survivors, options.safety_coefficient, cache.options());
    if (filtered && options.single_pass) break;
    const auto x0 = base_payments(instance, params);
    std::vector<int> violators;
    for (int i : survivors) {
      // Ordered like the c_Fub sweep so a frozen seed profile freezes the survivors too.
      auto last = sorted_order(seed_profile, without(survivors, i));
      last.push_back(i);
      const auto& pre = greedy.run(last);
      if (pre.taxi[i]) {
        violators.push_back(i);
        continue;
      }
      const auto t0 = instance.shortest_time(static_cast<std::size_t>(i));
      const Rational lhs = instance.gamma_max * Rational(normalized_delay(instance, pre, i));
      const Rational rhs = (instance.alpha + instance.beta) * Rational(t0) - x0[i];
      if (lhs > rhs) violators.push_back(i);
    }
    filtered = true;
    if (violators.empty()) break;
    for (int i : violators) {
      survivors = without(survivors, i);
      excluded.push_back(i);
    }
  }
  auto out = gars_n(instance, profile, params, options.restriction, cache);
  std::sort(excluded.begin(), excluded.end());
  out.excluded = excluded;
  out.mechanism = options.restriction == Restriction::kSingleVehicle ? "sgars-nir" : "gars-nir";
  return out;
}

MechanismOutcome sgars_nir(const Instance& instance, const TypeProfile& profile, GarsOptions options,
                           MechanismCache& cache) {
  options.restriction = Restriction::kSingleVehicle;
  return gars_nir(instance, profile, options, cache);
}

// ---------------------------------------------------------------------------

namespace {

MechanismOutcome vcg_family(const Instance& instance, const TypeProfile& profile, MechanismCache& cache,
                            Objective objective, MechanismKind kind) {
  validate_profile(instance, profile);
  auto out = blank_outcome(instance, kind);
  const auto all = all_riders(instance);
  const auto& sol = cache.optimal(profile, objective, all);
  out.allocation = sol.allocation;
  out.costs = cost_report(instance, out.allocation, profile);
  for (int i : all) {
    const auto idx = static_cast<std::size_t>(i);
    if (out.costs.riders[idx].mode == TravelMode::kTaxi) continue;
    const Rational with_i = objective == Objective::kSocialCostI ? out.costs.imaginary_social_cost_without(idx)
                                                                 : out.costs.social_cost_without(idx);
    out.payments[idx] = with_i - cache.optimal(profile, objective, without(all, i)).value;
  }
  return out;
}

}  // namespace

MechanismOutcome vcg(const Instance& instance, const TypeProfile& profile, MechanismCache& cache) {
  return vcg_family(instance, profile, cache, Objective::kSocialCostF, MechanismKind::kVcg);
}

MechanismOutcome bvcg(const Instance& instance, const TypeProfile& profile, MechanismCache& cache) {
  if (!instance.autonomous) throw ContractError("bvcg requires autonomous vehicles");
  return vcg_family(instance, profile, cache, Objective::kSocialCostI, MechanismKind::kBvcg);
}

// ---------------------------------------------------------------------------

std::optional<Rational> solo_trip_cost(const Instance& instance, const Rational& gamma, int rider, int vehicle) {
  const auto& r = instance.riders[rider];
  const auto pickup = instance.network.distance(instance.vehicles[vehicle].location, r.origin);
  const auto trip = instance.network.distance(r.origin, r.destination);
  if (!pickup || !trip || *pickup + *trip > instance.horizon) return std::nullopt;
  if (!instance.autonomous && *pickup > 0) return std::nullopt;
  return (gamma + instance.beta) * Rational(*pickup + *trip);
}

namespace {

/// Rectangular assignment, rows <= cols, integer costs. Returns the column of each row.
std::vector<int> hungarian(const std::vector<std::vector<std::int64_t>>& a) {
  const int n = static_cast<int>(a.size());
  const int m = n == 0 ? 0 : static_cast<int>(a[0].size());
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(m + 1, 0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      std::int64_t delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) col[p[j] - 1] = j - 1;
  }
  return col;
}

}  // namespace

MatchingResult hungarian_matching(const Instance& instance, const TypeProfile& profile,
                                  const std::vector<int>& riders) {
  const int n = static_cast<int>(riders.size());
  const int K = static_cast<int>(instance.num_vehicles());
  MatchingResult out;
  out.match.assign(instance.num_riders(), -1);
  if (n == 0) return out;
  std::vector<std::vector<std::optional<Rational>>> cost(n, std::vector<std::optional<Rational>>(K + n));
  std::vector<Rational> finite;
  for (int r = 0; r < n; ++r) {
    const int i = riders[r];
    for (int k = 0; k < K; ++k) {
      cost[r][k] = solo_trip_cost(instance, profile[i], i, k);
      if (cost[r][k]) finite.push_back(*cost[r][k]);
    }
    cost[r][K + r] = instance.outside_cost(static_cast<std::size_t>(i), profile[i]);
    finite.push_back(*cost[r][K + r]);
  }
  std::int64_t scale = 1;
  Rational bound(0);
  for (const auto& c : finite) {
    scale = std::lcm(scale, c.denominator());
    bound += c;
  }
  const std::int64_t big = (bound.numerator() * (scale / bound.denominator()) + 1) * 4 + 1;
  std::vector<std::vector<std::int64_t>> a(n, std::vector<std::int64_t>(K + n, big));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < K + n; ++c) {
      if (cost[r][c]) a[r][c] = cost[r][c]->numerator() * (scale / cost[r][c]->denominator());
    }
  }
  const auto col = hungarian(a);
  for (int r = 0; r < n; ++r) {
    const int c = col[r];
    out.cost += *cost[r][c];
    out.match[riders[r]] = c < K ? c : -1;
  }
  return out;
}

MechanismOutcome hungarian_mechanism(const Instance& instance, const TypeProfile& profile) {
  validate_profile(instance, profile);
  auto out = blank_outcome(instance, MechanismKind::kHungarian);
  const auto all = all_riders(instance);
  const auto matching = hungarian_matching(instance, profile, all);
  Allocation alloc = all_taxi_allocation(instance);
  const int T = instance.horizon;
  for (int i : all) {
    const int k = matching.match[i];
    if (k < 0) continue;
    const auto& r = instance.riders[i];
    const Vertex start = instance.vehicles[k].location;
    auto to_pickup = shortest_path(instance.network, start, r.origin);
    const auto trip = shortest_path(instance.network, r.origin, r.destination);
    Timeline vehicle(to_pickup.begin(), to_pickup.end());
    vehicle.insert(vehicle.end(), trip.begin() + 1, trip.end());
    const int pickup = static_cast<int>(to_pickup.size()) - 1;
    Timeline rider(static_cast<std::size_t>(pickup), r.origin);
    rider.insert(rider.end(), trip.begin(), trip.end());
    vehicle.resize(static_cast<std::size_t>(T) + 1, vehicle.back());
    rider.resize(static_cast<std::size_t>(T) + 1, rider.back());
    for (int t = pickup; t < pickup + static_cast<int>(trip.size()) - 1; ++t) {
      alloc.assignment.set(t, static_cast<std::size_t>(i), static_cast<std::size_t>(k));
    }
    alloc.rider_routes[i] = from_timeline(rider);
    alloc.vehicle_routes[k] = from_timeline(vehicle);
  }
  out.allocation = std::move(alloc);
  out.costs = cost_report(instance, out.allocation, profile);
  for (int i : all) {
    if (matching.match[i] < 0) continue;
    const auto idx = static_cast<std::size_t>(i);
    const Rational others_with = matching.cost - out.costs.riders[idx].cost;
    out.payments[idx] = others_with - hungarian_matching(instance, profile, without(all, i)).cost;
  }
  return out;
}

// ---------------------------------------------------------------------------

NaiveGreedyResult naive_greedy(const Instance& instance, const TypeProfile& profile, Restriction restriction,
                               const SolverOptions& options) {
  validate_profile(instance, profile);
  NaiveGreedyResult out;
  GreedyPrefix prefix = empty_prefix(instance);
  std::vector<int> remaining = all_riders(instance);
  while (!remaining.empty()) {
    std::optional<Extension> best;
    Rational best_marginal;
    int best_rider = -1;
    for (int i : remaining) {
      try {
        auto ext = best_extension(instance, prefix, i, profile[i], restriction, options);
        const Rational marginal =
            ext.rider_cost - instance.outside_cost(static_cast<std::size_t>(i), profile[i]) + ext.added_fuel;
        if (!best || marginal < best_marginal) {
          best_marginal = marginal;
          best_rider = i;
          best = std::move(ext);
        }
      } catch (const StepInfeasibleError&) {
      }
    }
    if (!best) {
      for (int i : remaining) {
        prefix = with_taxi(instance, std::move(prefix), i);
        out.taxi.push_back(i);
      }
      break;
    }
    prefix = std::move(best->prefix);
    out.order.push_back(best_rider);
    out.marginals.push_back(best_marginal);
    remaining = without(remaining, best_rider);
  }
  out.allocation = to_allocation(instance, prefix);
  return out;
}

MechanismOutcome run_mechanism(MechanismKind kind, const Instance& instance, const TypeProfile& profile,
                               MechanismCache& cache, const RunOptions& options) {
  switch (kind) {
    case MechanismKind::kVcg: return vcg(instance, profile, cache);
    case MechanismKind::kBvcg: return bvcg(instance, profile, cache);
    case MechanismKind::kHungarian: return hungarian_mechanism(instance, profile);
    case MechanismKind::kGarsN: return gars_n(instance, profile, options.gars, cache);
    case MechanismKind::kGarsNir: return gars_nir(instance, profile, options.gars, cache);
    case MechanismKind::kSgarsNir: return sgars_nir(instance, profile, options.gars, cache);
    case MechanismKind::kNaiveGreedy: {
      auto out = blank_outcome(instance, kind);
      auto result = naive_greedy(instance, profile, options.gars.restriction, cache.options());
      out.allocation = std::move(result.allocation);
      out.order = result.order;
      out.step_infeasible = result.taxi;
      out.costs = cost_report(instance, out.allocation, profile);
      return out;
    }
  }
  throw ContractError("unknown mechanism");
}

}  // namespace rsmech
