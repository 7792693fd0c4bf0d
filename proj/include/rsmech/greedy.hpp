#pragma once

#include <map>
#include <vector>

#include "rsmech/solver.hpp"

namespace rsmech {

/// Riders sorted by report, descending, ties by index ascending.
std::vector<int> sorted_order(const TypeProfile& profile, const std::vector<int>& riders);
std::vector<int> sorted_order(const TypeProfile& profile);

/// Greedy allocations keyed by order. A greedy step never looks at reports,
/// so a payment sweep, a deviation sweep and the IR filter can all share
/// the folds of a common prefix.
class GreedyCache {
 public:
  GreedyCache(const Instance& instance, Restriction restriction, SolverOptions options = {});

  /// Folds solve_greedy_step over the order. Step-infeasible riders become taxi riders.
  const GreedyPrefix& run(const std::vector<int>& order);

  const Instance& instance() const { return *instance_; }
  Restriction restriction() const { return restriction_; }
  std::size_t steps_solved() const { return steps_; }

 private:
  const Instance* instance_;
  Restriction restriction_;
  SolverOptions options_;
  std::map<std::vector<int>, GreedyPrefix> memo_;
  std::size_t steps_ = 0;
};

/// Uncached fold.
GreedyPrefix greedy_alloc(const Instance& instance, const std::vector<int>& order, Restriction restriction,
                          const SolverOptions& options = {});

/// T_i - T_i^0 in a prefix; 0 for taxi riders and riders not in the prefix.
int normalized_delay(const Instance& instance, const GreedyPrefix& prefix, int rider);

/// Riders the fold routed to a taxi because their step was infeasible.
std::vector<int> step_infeasible_riders(const GreedyPrefix& prefix);

}  // namespace rsmech
