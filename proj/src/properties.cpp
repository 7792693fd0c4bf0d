#include "rsmech/properties.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "rsmech/errors.hpp"

namespace rsmech {

namespace {

PropertyReport make_report(const std::string& name, const Instance& instance) {
  PropertyReport r;
  r.property = name;
  r.instance_digest = instance_digest(instance);
  return r;
}

void fail(PropertyReport& report, Witness witness) {
  if (!report.passed) return;
  report.passed = false;
  report.witness = std::move(witness);
}

TypeProfile with_report(TypeProfile profile, int rider, const Rational& gamma) {
  profile[rider] = gamma;
  return profile;
}

}  // namespace

std::string instance_digest(const Instance& instance) {
  std::ostringstream text;
  for (const auto& n : instance.network.names()) text << n << ',';
  text << '|';
  for (const auto& e : instance.network.edges()) text << e.from << '>' << e.to << ',';
  text << '|';
  for (const auto& r : instance.riders) text << r.id << ':' << r.origin << '>' << r.destination << '@' << to_string(r.gamma) << ',';
  text << '|';
  for (const auto& v : instance.vehicles) text << v.id << ':' << v.location << ',';
  text << '|' << instance.horizon << ',' << instance.capacity << ',' << to_string(instance.alpha) << ','
       << to_string(instance.beta) << ',' << to_string(instance.gamma_max) << ',' << instance.autonomous;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

MechanismFn bind_mechanism(MechanismKind kind, const Instance& instance, MechanismCache& cache,
                           const TypeProfile& truth, RunOptions options) {
  if (kind == MechanismKind::kGarsN || kind == MechanismKind::kGarsNir || kind == MechanismKind::kSgarsNir) {
    options.gars.param_profile = truth;
  }
  return [kind, &instance, &cache, options](const TypeProfile& reports) {
    return run_mechanism(kind, instance, reports, cache, options);
  };
}

std::vector<Rational> deviation_grid(const Instance& instance, const TypeProfile& profile, int rider) {
  std::vector<Rational> points{Rational(0), instance.gamma_max};
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (static_cast<int>(j) != rider) points.push_back(profile[j]);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return refined_grid(points, 2);
}

std::vector<Rational> refined_grid(const std::vector<Rational>& grid, int factor) {
  auto points = grid;
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<Rational> out;
  for (std::size_t s = 0; s < points.size(); ++s) {
    out.push_back(points[s]);
    if (s + 1 == points.size()) break;
    for (int f = 1; f < factor; ++f) {
      out.push_back(points[s] + (points[s + 1] - points[s]) * Rational(f, factor));
    }
  }
  return out;
}

int travel_time(const Instance& instance, const Allocation& alloc, int rider) {
  const auto i = static_cast<std::size_t>(rider);
  if (uses_taxi(instance, alloc, i)) return instance.shortest_time(i);
  const auto line = to_timeline(alloc.rider_routes[i], instance.horizon);
  return static_cast<int>(std::find(line.begin(), line.end(), instance.riders[i].destination) - line.begin());
}

PropertyReport check_monotonicity(const MechanismFn& mechanism, const Instance& instance, const TypeProfile& profile,
                                  int rider, const std::vector<Rational>& grid) {
  auto report = make_report("monotonicity", instance);
  auto points = grid;
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<int> times;
  for (const auto& g : points) times.push_back(travel_time(instance, mechanism(with_report(profile, rider, g)).allocation, rider));
  report.cases = points.size();
  for (std::size_t a = 0; a < points.size() && report.passed; ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      if (times[b] <= times[a]) continue;
      fail(report, Witness{rider, profile,
                           {with_report(profile, rider, points[a]), with_report(profile, rider, points[b])},
                           {points[a], points[b], Rational(times[a]), Rational(times[b])},
                           "travel time rose with the report: gamma_a, gamma_b, T_a, T_b"});
      break;
    }
  }
  return report;
}

PropertyReport check_monotonicity(const MechanismFn& mechanism, const Instance& instance,
                                  const TypeProfile& profile) {
  auto report = make_report("monotonicity", instance);
  for (std::size_t i = 0; i < instance.num_riders(); ++i) {
    const int r = static_cast<int>(i);
    auto one = check_monotonicity(mechanism, instance, profile, r, deviation_grid(instance, profile, r));
    report.cases += one.cases;
    if (!one.passed) fail(report, *one.witness);
  }
  return report;
}

PropertyReport check_dsic(const MechanismFn& mechanism, const Instance& instance, const TypeProfile& truth,
                          const std::vector<Rational>& grid) {
  auto report = make_report("dsic", instance);
  const auto truthful = mechanism(truth);
  const auto truthful_costs = cost_report(instance, truthful.allocation, truth);
  for (std::size_t i = 0; i < instance.num_riders(); ++i) {
    const int r = static_cast<int>(i);
    const Rational honest = -truthful_costs.riders[i].cost - truthful.payments[i];
    const auto points = grid.empty() ? deviation_grid(instance, truth, r) : grid;
    for (const auto& g : points) {
      if (g == truth[i]) continue;
      const auto lie = with_report(truth, r, g);
      const auto outcome = mechanism(lie);
      const auto costs = cost_report(instance, outcome.allocation, truth);
      const Rational u = -costs.riders[i].cost - outcome.payments[i];
      ++report.cases;
      if (u > honest) {
        fail(report, Witness{r, truth, {truth, lie}, {honest, u}, "misreport raised utility: honest, deviating"});
      }
    }
  }
  return report;
}

PropertyReport check_ir(const MechanismOutcome& outcome, const Instance& instance, const TypeProfile& truth) {
  auto report = make_report("ir", instance);
  const auto costs = cost_report(instance, outcome.allocation, truth);
  for (std::size_t i = 0; i < instance.num_riders(); ++i) {
    ++report.cases;
    const Rational u = -costs.riders[i].cost - outcome.payments[i];
    const Rational outside = -costs.riders[i].outside_cost;
    if (costs.riders[i].mode == TravelMode::kTaxi && outcome.payments[i] != Rational(0)) {
      fail(report, Witness{static_cast<int>(i), truth, {}, {outcome.payments[i]}, "taxi rider charged"});
    }
    if (u < outside) {
      fail(report, Witness{static_cast<int>(i), truth, {}, {u, outside}, "utility below the taxi utility: u, -c0"});
    }
  }
  return report;
}

PropertyReport check_bb(const MechanismOutcome& outcome, const Instance& instance) {
  auto report = make_report("bb", instance);
  report.cases = 1;
  const Rational collected = std::accumulate(outcome.payments.begin(), outcome.payments.end(), Rational(0));
  if (collected < outcome.costs.fuel) {
    fail(report, Witness{-1, {}, {}, {collected, outcome.costs.fuel}, "payments below fuel cost: sum x, c_F"});
  }
  return report;
}

PropertyReport check_gadc(GreedyCache& cache, const TypeProfile& profile, int rider, bool taxi_permitted) {
  const Instance& inst = cache.instance();
  auto report = make_report(taxi_permitted ? "gadc-taxi" : "gadc", inst);
  std::vector<int> others;
  for (std::size_t j = 0; j < inst.num_riders(); ++j) {
    if (static_cast<int>(j) != rider) others.push_back(static_cast<int>(j));
  }
  others = sorted_order(profile, others);
  const int t0 = inst.shortest_time(static_cast<std::size_t>(rider));

  struct Choice {
    Rational report;
    bool taxi = false;
    int time = 0;
  };
  std::vector<Choice> choices;
  for (const auto& g : deviation_grid(inst, profile, rider)) {
    std::size_t position = 0;
    for (int j : others) {
      if (profile[j] > g || (profile[j] == g && j < rider)) ++position;
    }
    std::vector<int> order(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(position));
    order.push_back(rider);
    const auto& prefix = cache.run(order);
    Choice c{g, prefix.taxi[rider], prefix.taxi[rider] ? t0 : prefix.arrival(inst, static_cast<std::size_t>(rider))};
    if (c.taxi && !taxi_permitted) continue;
    if (taxi_permitted && !c.taxi && inst.outside_cost(static_cast<std::size_t>(rider), g) < g * Rational(c.time)) {
      c.taxi = true;
      c.time = t0;
    }
    choices.push_back(c);
  }
  // Objective of a choice evaluated at type g, ties broken by travel time as the step does.
  auto objective = [&](const Choice& c, const Rational& g) {
    const Rational cost = c.taxi ? inst.outside_cost(static_cast<std::size_t>(rider), g) : g * Rational(c.time);
    return std::make_pair(cost, c.time);
  };
  for (const auto& a : choices) {
    for (const auto& b : choices) {
      for (const auto& g : {a.report, b.report}) {
        ++report.cases;
        if (objective(a, g) <= objective(b, g) && a.time > b.time) {
          fail(report, Witness{rider, profile,
                               {with_report(profile, rider, a.report), with_report(profile, rider, b.report)},
                               {objective(a, g).first, objective(b, g).first, Rational(a.time), Rational(b.time)},
                               "lower objective with less work: J_a, J_b, T_a, T_b"});
        }
      }
    }
  }
  return report;
}

PropertyReport check_cost_sandwich(const Instance& instance, const Allocation& allocation) {
  auto report = make_report("cost-sandwich", instance);
  report.cases = 1;
  const auto costs = cost_report(instance, allocation, TypeProfile(instance.num_riders(), Rational(0)));
  const Rational n(static_cast<std::int64_t>(instance.num_riders()));
  if (costs.fuel > costs.imaginary || costs.imaginary > n * costs.fuel) {
    fail(report, Witness{-1, {}, {}, {costs.fuel, costs.imaginary, n * costs.fuel}, "c_F <= c_I <= N c_F broken"});
  }
  return report;
}

PropertyReport check_absence(const Instance& instance, const TypeProfile& profile, int rider, MechanismCache& cache) {
  if (!instance.autonomous) throw ContractError("the absence check requires autonomous vehicles");
  auto report = make_report("absence", instance);
  report.cases = 1;
  std::vector<int> all(instance.num_riders());
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> rest;
  for (int j : all) {
    if (j != rider) rest.push_back(j);
  }
  const auto& full = cache.optimal(profile, Objective::kSocialCostI, all);
  const auto costs = cost_report(instance, full.allocation, profile);
  const auto i = static_cast<std::size_t>(rider);
  const Rational lhs = costs.imaginary_social_cost_without(i) - costs.riders[i].touched_fuel;
  const Rational rhs = cache.optimal(profile, Objective::kSocialCostI, rest).value;
  if (lhs < rhs) {
    fail(report, Witness{rider, profile, {profile}, {lhs, rhs}, "C_I(-i,pi) - c_I^i < C_I(-i,pi_-i)"});
  }
  return report;
}

}  // namespace rsmech
