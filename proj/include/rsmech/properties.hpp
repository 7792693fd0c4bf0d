#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rsmech/mechanisms.hpp"

namespace rsmech {

struct Witness {
  int rider = -1;
  TypeProfile truth;
  /// Profiles whose outcomes show the violation (one or two).
  std::vector<TypeProfile> reports;
  /// Compared quantities, in the order named by detail.
  std::vector<Rational> values;
  std::string detail;
};

struct PropertyReport {
  std::string property;
  std::string instance_digest;
  bool passed = true;
  std::optional<Witness> witness;
  std::size_t cases = 0;
};

/// Stable 64-bit hex digest of an instance.
std::string instance_digest(const Instance& instance);

/// Reported profile to outcome.
using MechanismFn = std::function<MechanismOutcome(const TypeProfile&)>;

/// Binds a mechanism to an instance. Greedy mechanisms seed their c_Fub
/// sweep with `truth` so that the bound stays fixed across deviations.
MechanismFn bind_mechanism(MechanismKind kind, const Instance& instance, MechanismCache& cache,
                           const TypeProfile& truth, RunOptions options = {});

/// {0, gamma_max}, the other riders' reports and the midpoints between consecutive values.
std::vector<Rational> deviation_grid(const Instance& instance, const TypeProfile& profile, int rider);
/// Same points refined by `factor` equal subdivisions of each gap.
std::vector<Rational> refined_grid(const std::vector<Rational>& grid, int factor);

/// Travel time T_i of a rider in an allocation (T_i^0 for taxi riders).
int travel_time(const Instance& instance, const Allocation& alloc, int rider);

PropertyReport check_monotonicity(const MechanismFn& mechanism, const Instance& instance, const TypeProfile& profile,
                                  int rider, const std::vector<Rational>& grid);
/// Monotonicity for every rider over its default grid.
PropertyReport check_monotonicity(const MechanismFn& mechanism, const Instance& instance,
                                  const TypeProfile& profile);

/// Empty grid: each rider's default deviation grid.
PropertyReport check_dsic(const MechanismFn& mechanism, const Instance& instance, const TypeProfile& truth,
                          const std::vector<Rational>& grid = {});
PropertyReport check_ir(const MechanismOutcome& outcome, const Instance& instance, const TypeProfile& truth);
PropertyReport check_bb(const MechanismOutcome& outcome, const Instance& instance);

/// Consistency of the greedy step's objective with the allocated work over
/// every insertion position of the rider. With taxi_permitted the step may
/// pick the rider's taxi whenever that is cheaper at the report.
PropertyReport check_gadc(GreedyCache& cache, const TypeProfile& profile, int rider, bool taxi_permitted = false);

PropertyReport check_cost_sandwich(const Instance& instance, const Allocation& allocation);

/// Throws ContractError for non-autonomous instances.
PropertyReport check_absence(const Instance& instance, const TypeProfile& profile, int rider, MechanismCache& cache);

}  // namespace rsmech
