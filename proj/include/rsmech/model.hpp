#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rsmech/rational.hpp"
#include "rsmech/road_network.hpp"

namespace rsmech {

struct RiderSpec {
  int id = 0;  // external id, 1-based
  Vertex origin = 0;
  Vertex destination = 0;
  Rational gamma{0};  // true type
};

struct VehicleSpec {
  int id = 0;
  Vertex location = 0;
};

/// Reported (or true) value of time per rider, indexed like Instance::riders.
using TypeProfile = std::vector<Rational>;
using PaymentVector = std::vector<Rational>;

struct Instance {
  RoadNetwork network;
  std::vector<RiderSpec> riders;
  std::vector<VehicleSpec> vehicles;
  int horizon = 1;
  int capacity = 1;
  Rational alpha{0};
  Rational beta{1};
  Rational gamma_max{0};
  bool autonomous = true;

  std::size_t num_riders() const { return riders.size(); }
  std::size_t num_vehicles() const { return vehicles.size(); }
  /// T_i^0. Valid instances guarantee a path.
  int shortest_time(std::size_t rider) const;
  /// c_i^0 = (alpha + beta + gamma) T_i^0.
  Rational outside_cost(std::size_t rider, const Rational& gamma) const;
  /// Types stored with the riders.
  TypeProfile true_profile() const;
};

/// Throws ContractError when an Instance invariant fails.
void validate_instance(const Instance& instance);
/// Throws ContractError unless the profile has one entry in [0, gamma_max] per rider.
void validate_profile(const Instance& instance, const TypeProfile& profile);

/// Binary tensor B[t, i, k] over t in 0..T.
class Assignment {
 public:
  Assignment() = default;
  Assignment(int horizon, std::size_t riders, std::size_t vehicles)
      : steps_(static_cast<std::size_t>(horizon) + 1), riders_(riders), vehicles_(vehicles),
        bits_(steps_ * riders * vehicles, 0) {}

  std::size_t steps() const { return steps_; }
  std::size_t riders() const { return riders_; }
  std::size_t vehicles() const { return vehicles_; }

  bool get(int t, std::size_t rider, std::size_t vehicle) const { return bits_[index(t, rider, vehicle)] != 0; }
  void set(int t, std::size_t rider, std::size_t vehicle, bool value = true) {
    bits_[index(t, rider, vehicle)] = value ? 1 : 0;
  }
  /// Vehicle assigned to the rider at t, or -1. Lowest index if several.
  int vehicle_of(int t, std::size_t rider) const;
  int load(int t, std::size_t vehicle) const;
  bool any(std::size_t rider) const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::size_t index(int t, std::size_t rider, std::size_t vehicle) const {
    return (static_cast<std::size_t>(t) * riders_ + rider) * vehicles_ + vehicle;
  }

  std::size_t steps_ = 0;
  std::size_t riders_ = 0;
  std::size_t vehicles_ = 0;
  std::vector<unsigned char> bits_;
};

struct Allocation {
  std::vector<Route> rider_routes;
  std::vector<Route> vehicle_routes;
  Assignment assignment;

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Every rider on its shortest path by taxi, vehicles parked.
Allocation all_taxi_allocation(const Instance& instance);

enum class FeasibilityViolation {
  kRouteInvalid,
  kOriginMismatch,
  kDestinationMismatch,
  kLeftDestination,
  kVehicleStartMismatch,
  kAssignmentEdgeMismatch,
  kTaxiExclusivity,
  kCapacity,
  kEmptyMovingVehicle,
};

struct FeasibilityIssue {
  FeasibilityViolation kind;
  int rider = -1;    // index, -1 when not rider-specific
  int vehicle = -1;  // index, -1 when not vehicle-specific
  int t = -1;
  std::string detail;
};

struct FeasibilityReport {
  std::vector<FeasibilityIssue> issues;
  bool ok() const { return issues.empty(); }
  bool has(FeasibilityViolation kind) const;
};

/// Membership test for the feasible set. Throws ShapeError on dimension mismatch.
FeasibilityReport check_feasible(const Instance& instance, const Allocation& alloc);

enum class TravelMode { kTaxi, kRideshare };

struct RiderCost {
  int arrival = 0;     // T_i
  int shortest = 0;    // T_i^0
  int normalized = 0;  // T_i - T_i^0
  TravelMode mode = TravelMode::kTaxi;
  Rational cost{0};          // c_i
  Rational outside_cost{0};  // c_i^0
  Rational touched_fuel{0};  // c_F^i, fuel of every vehicle the rider used
  std::vector<int> vehicles_used;
};

struct CostReport {
  std::vector<RiderCost> riders;
  std::vector<int> vehicle_travel;  // T_k^c
  Rational fuel{0};                 // c_F
  Rational social_cost{0};          // C_F
  Rational imaginary{0};            // c_I
  Rational imaginary_social_cost{0};  // C_I

  /// C_F(-i, pi): social cost without rider i's own cost term.
  Rational social_cost_without(std::size_t rider) const { return social_cost - riders[rider].cost; }
  /// C_I(-i, pi).
  Rational imaginary_social_cost_without(std::size_t rider) const {
    return imaginary_social_cost - riders[rider].cost;
  }
};

/// Throws ContractError for infeasible allocations.
CostReport cost_report(const Instance& instance, const Allocation& alloc, const TypeProfile& profile);

/// u_i = -c_i - x_i. Throws ContractError when a taxi rider is charged.
std::vector<Rational> utility(const Instance& instance, const Allocation& alloc, const TypeProfile& profile,
                              const PaymentVector& payments);
std::vector<Rational> utility(const CostReport& report, const PaymentVector& payments);

/// V_i = -T_i.
int work_value(const Instance& instance, const Allocation& alloc, std::size_t rider);

/// True when some moving step of the rider carries no vehicle assignment.
bool uses_taxi(const Instance& instance, const Allocation& alloc, std::size_t rider);

}  // namespace rsmech
