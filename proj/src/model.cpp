#include "rsmech/model.hpp"

#include <algorithm>

#include "rsmech/errors.hpp"

namespace rsmech {

int Instance::shortest_time(std::size_t rider) const {
  const auto& r = riders.at(rider);
  return shortest_travel_time(network, r.origin, r.destination);
}

Rational Instance::outside_cost(std::size_t rider, const Rational& gamma) const {
  return (alpha + beta + gamma) * Rational(shortest_time(rider));
}

TypeProfile Instance::true_profile() const {
  TypeProfile profile;
  profile.reserve(riders.size());
  for (const auto& r : riders) profile.push_back(r.gamma);
  return profile;
}

void validate_instance(const Instance& instance) {
  if (instance.horizon < 1) throw ContractError("horizon T must be at least 1");
  if (instance.capacity < 1) throw ContractError("capacity w must be at least 1");
  if (instance.alpha < Rational(0) || instance.beta < Rational(0)) throw ContractError("alpha and beta must be non-negative");
  if (instance.gamma_max < Rational(0)) throw ContractError("gamma_max must be non-negative");
  for (const auto& r : instance.riders) {
    if (!instance.network.contains(r.origin) || !instance.network.contains(r.destination)) {
      throw ContractError("rider " + std::to_string(r.id) + " references an unknown vertex");
    }
    if (r.gamma < Rational(0) || r.gamma > instance.gamma_max) {
      throw ContractError("rider " + std::to_string(r.id) + " type outside [0, gamma_max]");
    }
    const auto d = instance.network.distance(r.origin, r.destination);
    if (!d || *d > instance.horizon) {
      throw ContractError("rider " + std::to_string(r.id) + " cannot reach its destination within T");
    }
  }
  for (const auto& v : instance.vehicles) {
    if (!instance.network.contains(v.location)) {
      throw ContractError("vehicle " + std::to_string(v.id) + " references an unknown vertex");
    }
  }
}

void validate_profile(const Instance& instance, const TypeProfile& profile) {
  if (profile.size() != instance.num_riders()) throw ShapeError("type profile length differs from rider count");
  for (const auto& g : profile) {
    if (g < Rational(0) || g > instance.gamma_max) throw ContractError("reported type outside [0, gamma_max]");
  }
}

int Assignment::vehicle_of(int t, std::size_t rider) const {
  for (std::size_t k = 0; k < vehicles_; ++k) {
    if (get(t, rider, k)) return static_cast<int>(k);
  }
  return -1;
}

int Assignment::load(int t, std::size_t vehicle) const {
  int n = 0;
  for (std::size_t i = 0; i < riders_; ++i) n += get(t, i, vehicle) ? 1 : 0;
  return n;
}

bool Assignment::any(std::size_t rider) const {
  for (std::size_t t = 0; t < steps_; ++t) {
    for (std::size_t k = 0; k < vehicles_; ++k) {
      if (get(static_cast<int>(t), rider, k)) return true;
    }
  }
  return false;
}

Allocation all_taxi_allocation(const Instance& instance) {
  Allocation alloc;
  for (const auto& r : instance.riders) {
    const auto path = shortest_path(instance.network, r.origin, r.destination);
    Route route;
    for (std::size_t s = 0; s < path.size(); ++s) {
      route.path.push_back(path[s]);
      route.times.push_back(static_cast<int>(s));
    }
    alloc.rider_routes.push_back(route);
  }
  for (const auto& v : instance.vehicles) alloc.vehicle_routes.push_back(Route{{v.location}, {0}});
  alloc.assignment = Assignment(instance.horizon, instance.num_riders(), instance.num_vehicles());
  return alloc;
}

bool FeasibilityReport::has(FeasibilityViolation kind) const {
  return std::any_of(issues.begin(), issues.end(), [kind](const FeasibilityIssue& i) { return i.kind == kind; });
}

namespace {

void check_shape(const Instance& instance, const Allocation& alloc) {
  const auto& b = alloc.assignment;
  if (alloc.rider_routes.size() != instance.num_riders() || alloc.vehicle_routes.size() != instance.num_vehicles()) {
    throw ShapeError("route counts differ from the instance");
  }
  if (b.steps() != static_cast<std::size_t>(instance.horizon) + 1 || b.riders() != instance.num_riders() ||
      b.vehicles() != instance.num_vehicles()) {
    throw ShapeError("assignment tensor dimensions differ from the instance");
  }
}

bool moves(const Timeline& line, int t) {
  return static_cast<std::size_t>(t) + 1 < line.size() && line[t] != line[t + 1];
}

Edge edge_of(const Timeline& line, int t) {
  if (static_cast<std::size_t>(t) + 1 >= line.size()) return {line[t], line[t]};
  return {line[t], line[t + 1]};
}

}  // namespace

FeasibilityReport check_feasible(const Instance& instance, const Allocation& alloc) {
  check_shape(instance, alloc);
  FeasibilityReport report;
  auto add = [&](FeasibilityViolation kind, int rider, int vehicle, int t, std::string detail) {
    report.issues.push_back({kind, rider, vehicle, t, std::move(detail)});
  };
  const int T = instance.horizon;
  const auto N = instance.num_riders();
  const auto K = instance.num_vehicles();
  const auto& B = alloc.assignment;

  std::vector<Timeline> rider_lines(N);
  std::vector<Timeline> vehicle_lines(K);
  bool routes_ok = true;
  for (std::size_t i = 0; i < N; ++i) {
    if (!validate_route(instance.network, alloc.rider_routes[i], T).ok()) {
      add(FeasibilityViolation::kRouteInvalid, static_cast<int>(i), -1, -1, "rider route invalid");
      routes_ok = false;
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (!validate_route(instance.network, alloc.vehicle_routes[k], T).ok()) {
      add(FeasibilityViolation::kRouteInvalid, -1, static_cast<int>(k), -1, "vehicle route invalid");
      routes_ok = false;
    }
  }
  if (!routes_ok) return report;
  for (std::size_t i = 0; i < N; ++i) rider_lines[i] = to_timeline(alloc.rider_routes[i], T);
  for (std::size_t k = 0; k < K; ++k) vehicle_lines[k] = to_timeline(alloc.vehicle_routes[k], T);

  for (std::size_t i = 0; i < N; ++i) {
    const auto& spec = instance.riders[i];
    const auto& line = rider_lines[i];
    const int ri = static_cast<int>(i);
    if (line.front() != spec.origin) add(FeasibilityViolation::kOriginMismatch, ri, -1, 0, "route does not start at the origin");
    if (line.back() != spec.destination) {
      add(FeasibilityViolation::kDestinationMismatch, ri, -1, T, "route does not end at the destination");
    }
    const auto first = std::find(line.begin(), line.end(), spec.destination);
    for (auto it = first; it != line.end(); ++it) {
      if (*it != spec.destination) {
        add(FeasibilityViolation::kLeftDestination, ri, -1, static_cast<int>(it - line.begin()),
            "route leaves the destination after arriving");
        break;
      }
    }
    bool taxi = false;
    for (int t = 0; t < T; ++t) {
      if (moves(line, t) && B.vehicle_of(t, i) < 0) taxi = true;
    }
    if (taxi && B.any(i)) {
      add(FeasibilityViolation::kTaxiExclusivity, ri, -1, -1, "taxi travel combined with ridesharing");
    }
    for (int t = 0; t <= T; ++t) {
      for (std::size_t k = 0; k < K; ++k) {
        if (B.get(t, i, k) && !(edge_of(vehicle_lines[k], t) == edge_of(line, t))) {
          add(FeasibilityViolation::kAssignmentEdgeMismatch, ri, static_cast<int>(k), t,
              "assigned rider and vehicle traverse different edges");
        }
      }
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    const int rk = static_cast<int>(k);
    if (vehicle_lines[k].front() != instance.vehicles[k].location) {
      add(FeasibilityViolation::kVehicleStartMismatch, -1, rk, 0, "vehicle does not start at its location");
    }
    for (int t = 0; t <= T; ++t) {
      const int load = B.load(t, k);
      if (load > instance.capacity) add(FeasibilityViolation::kCapacity, -1, rk, t, "capacity exceeded");
      if (!instance.autonomous && moves(vehicle_lines[k], t) && load == 0) {
        add(FeasibilityViolation::kEmptyMovingVehicle, -1, rk, t, "non-autonomous vehicle moves without riders");
      }
    }
  }
  return report;
}

bool uses_taxi(const Instance& instance, const Allocation& alloc, std::size_t rider) {
  const auto line = to_timeline(alloc.rider_routes.at(rider), instance.horizon);
  for (int t = 0; t < instance.horizon; ++t) {
    if (moves(line, t) && alloc.assignment.vehicle_of(t, rider) < 0) return true;
  }
  return false;
}

CostReport cost_report(const Instance& instance, const Allocation& alloc, const TypeProfile& profile) {
  if (profile.size() != instance.num_riders()) throw ShapeError("type profile length differs from rider count");
  if (!check_feasible(instance, alloc).ok()) throw ContractError("cost_report requires a feasible allocation");
  const int T = instance.horizon;
  const auto N = instance.num_riders();
  const auto K = instance.num_vehicles();
  CostReport report;
  report.vehicle_travel.assign(K, 0);
  for (std::size_t k = 0; k < K; ++k) {
    const auto line = to_timeline(alloc.vehicle_routes[k], T);
    for (int t = 0; t < T; ++t) report.vehicle_travel[k] += moves(line, t) ? 1 : 0;
    report.fuel += instance.beta * Rational(report.vehicle_travel[k]);
  }
  Rational rider_costs{0};
  for (std::size_t i = 0; i < N; ++i) {
    RiderCost rc;
    rc.shortest = instance.shortest_time(i);
    rc.outside_cost = instance.outside_cost(i, profile[i]);
    if (uses_taxi(instance, alloc, i)) {
      rc.mode = TravelMode::kTaxi;
      rc.arrival = rc.shortest;
      rc.cost = rc.outside_cost;
    } else {
      rc.mode = TravelMode::kRideshare;
      const auto line = to_timeline(alloc.rider_routes[i], T);
      rc.arrival = static_cast<int>(std::find(line.begin(), line.end(), instance.riders[i].destination) - line.begin());
      rc.cost = profile[i] * Rational(rc.arrival);
      for (std::size_t k = 0; k < K; ++k) {
        for (int t = 0; t <= T; ++t) {
          if (alloc.assignment.get(t, i, k)) {
            rc.vehicles_used.push_back(static_cast<int>(k));
            rc.touched_fuel += instance.beta * Rational(report.vehicle_travel[k]);
            break;
          }
        }
      }
    }
    rc.normalized = rc.arrival - rc.shortest;
    rider_costs += rc.cost;
    report.imaginary += rc.touched_fuel;
    report.riders.push_back(std::move(rc));
  }
  report.social_cost = rider_costs + report.fuel;
  report.imaginary_social_cost = report.social_cost + report.imaginary;
  return report;
}

std::vector<Rational> utility(const CostReport& report, const PaymentVector& payments) {
  if (payments.size() != report.riders.size()) throw ShapeError("payment vector length differs from rider count");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < payments.size(); ++i) {
    if (report.riders[i].mode == TravelMode::kTaxi && payments[i] != Rational(0)) {
      throw ContractError("taxi rider " + std::to_string(i + 1) + " must not pay the mechanism");
    }
    out.push_back(-report.riders[i].cost - payments[i]);
  }
  return out;
}

std::vector<Rational> utility(const Instance& instance, const Allocation& alloc, const TypeProfile& profile,
                              const PaymentVector& payments) {
  return utility(cost_report(instance, alloc, profile), payments);
}

int work_value(const Instance& instance, const Allocation& alloc, std::size_t rider) {
  TypeProfile zeros(instance.num_riders(), Rational(0));
  return -cost_report(instance, alloc, zeros).riders.at(rider).arrival;
}

}  // namespace rsmech
