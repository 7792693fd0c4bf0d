#include "rsmech/greedy.hpp"

#include <algorithm>
#include <numeric>

#include "rsmech/errors.hpp"

namespace rsmech {

std::vector<int> sorted_order(const TypeProfile& profile, const std::vector<int>& riders) {
  auto order = riders;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (profile[a] != profile[b]) return profile[a] > profile[b];
    return a < b;
  });
  return order;
}

std::vector<int> sorted_order(const TypeProfile& profile) {
  std::vector<int> all(profile.size());
  std::iota(all.begin(), all.end(), 0);
  return sorted_order(profile, all);
}

GreedyCache::GreedyCache(const Instance& instance, Restriction restriction, SolverOptions options)
    : instance_(&instance), restriction_(restriction), options_(options) {
  memo_.emplace(std::vector<int>{}, empty_prefix(instance));
}

const GreedyPrefix& GreedyCache::run(const std::vector<int>& order) {
  if (auto it = memo_.find(order); it != memo_.end()) return it->second;
  std::size_t known = order.size();
  std::vector<int> key;
  const GreedyPrefix* base = nullptr;
  while (true) {
    --known;
    key.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(known));
    if (auto it = memo_.find(key); it != memo_.end()) {
      base = &it->second;
      break;
    }
  }
  GreedyPrefix current = *base;
  for (std::size_t s = known; s < order.size(); ++s) {
    const int rider = order[s];
    ++steps_;
    try {
      current = solve_greedy_step(*instance_, current, rider, restriction_, options_);
    } catch (const StepInfeasibleError&) {
      current = with_taxi(*instance_, std::move(current), rider);
    }
    key.push_back(rider);
    memo_.emplace(key, current);
  }
  return memo_.at(order);
}

GreedyPrefix greedy_alloc(const Instance& instance, const std::vector<int>& order, Restriction restriction,
                          const SolverOptions& options) {
  GreedyCache cache(instance, restriction, options);
  return cache.run(order);
}

int normalized_delay(const Instance& instance, const GreedyPrefix& prefix, int rider) {
  const auto i = static_cast<std::size_t>(rider);
  if (!prefix.allocated[i] || prefix.taxi[i]) return 0;
  return prefix.arrival(instance, i) - instance.shortest_time(i);
}

std::vector<int> step_infeasible_riders(const GreedyPrefix& prefix) {
  std::vector<int> out;
  for (int i : prefix.order) {
    if (prefix.taxi[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

}  // namespace rsmech
