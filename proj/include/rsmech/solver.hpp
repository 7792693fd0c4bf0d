#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rsmech/model.hpp"

namespace rsmech {

enum class Objective {
  kSocialCostF,           // minimize C_F
  kSocialCostI,           // minimize C_I
  kTotalNormalizedDelay,  // minimize sum of T_i - T_i^0, nobody takes a taxi
};

enum class Restriction {
  kAllowSwitching,  // riders may change vehicles at shared vertices
  kSingleVehicle,   // one vehicle for the whole trip
};

struct SolverOptions {
  /// Maximum number of memoized search states per solve.
  std::size_t state_budget = 4'000'000;
};

struct OptimalSolution {
  Allocation allocation;
  /// Objective value. Excluded riders contribute nothing.
  Rational value{0};
  /// Fuel of the returned allocation, used as a tie-break for the delay objective.
  int vehicle_travel = 0;
};

/// Exact optimum over the feasible set restricted to `riders` (indices).
/// Riders outside the subset are absent: they keep their taxi route in the
/// returned allocation but carry no cost in `value`.
///
/// Throws SizeError when the state budget is exceeded and InfeasibleError
/// when no allocation exists (only possible for the delay objective or for
/// non-autonomous fleets).
OptimalSolution solve_optimal(const Instance& instance, const TypeProfile& profile, Objective objective,
                              Restriction restriction, const std::vector<int>& riders,
                              const SolverOptions& options = {});

/// All riders.
OptimalSolution solve_optimal(const Instance& instance, const TypeProfile& profile, Objective objective,
                              Restriction restriction = Restriction::kAllowSwitching,
                              const SolverOptions& options = {});

/// Riders allocated so far by a greedy pass, in timeline form.
///
/// Prior riders' routes and assignment rows are frozen; vehicle routes are
/// re-planned at every step wherever no prior rider is aboard.
struct GreedyPrefix {
  std::vector<int> order;                // allocated riders, in allocation order
  std::vector<bool> allocated;           // per rider
  std::vector<bool> taxi;                // per rider, set when routed to a taxi
  std::vector<Timeline> rider_lines;     // per rider, empty until allocated
  std::vector<std::vector<int>> rides;   // per rider and step t < T: vehicle or -1
  std::vector<Timeline> vehicle_lines;   // per vehicle

  /// T_i of an allocated rideshare rider.
  int arrival(const Instance& instance, std::size_t rider) const;
  int vehicle_travel() const;
};

GreedyPrefix empty_prefix(const Instance& instance);

/// Unallocated riders ride a taxi along their shortest path.
Allocation to_allocation(const Instance& instance, const GreedyPrefix& prefix);

/// Marks the rider as a taxi rider without touching vehicles.
GreedyPrefix with_taxi(const Instance& instance, GreedyPrefix prefix, int rider);

/// One greedy step with the no-taxi constraint: extends the prefix with the
/// route for `rider` that minimizes its arrival time, breaking ties by total
/// fuel. The rider's cost is gamma * T_i for any gamma, so the step does not
/// depend on the reported type.
///
/// Throws StepInfeasibleError when no vehicle-served route reaches the
/// destination within T, SizeError when the joint search over more
/// than six vehicles would be needed under kAllowSwitching.
GreedyPrefix solve_greedy_step(const Instance& instance, const GreedyPrefix& prefix, int rider,
                               Restriction restriction, const SolverOptions& options = {});

/// Result of the cost-weighted extension used by marginal-cost greedy.
struct Extension {
  GreedyPrefix prefix;
  Rational rider_cost{0};  // gamma * T_i
  Rational added_fuel{0};  // increase of c_F over the input prefix
};

/// Extends the prefix with the rider's route minimizing gamma * T_i + c_F.
/// Throws StepInfeasibleError when no vehicle-served route exists.
Extension best_extension(const Instance& instance, const GreedyPrefix& prefix, int rider, const Rational& gamma,
                         Restriction restriction, const SolverOptions& options = {});

/// Ridesharing instance encoding a travelling-salesman tour from `depot`:
/// one rider per vertex heading to the depot, one vehicle of capacity N at
/// the depot, prohibitive taxi cost, zero value of time, beta = 1, T = |E|.
Instance reduce_tsp(const RoadNetwork& tsp_network, Vertex depot);

}  // namespace rsmech
