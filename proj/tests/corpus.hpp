#pragma once

// Seeded tiny instances shared by the property tests and the acceptance suite.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "rsmech/experiments.hpp"
#include "rsmech/greedy.hpp"
#include "rsmech/rng.hpp"

namespace rsmech::testing {

struct CorpusLimits {
  int max_riders = 4;
  int max_vehicles = 2;
  int max_horizon = 5;
  int max_vertices = 5;
};

/// Shape drawn from the seed, then the usual generator. Types are spread
/// unevenly so that ties and distinct values both occur.
inline Instance corpus_instance(std::uint64_t seed, const CorpusLimits& limits = {}) {
  Rng rng(derive_seed(seed, 0x636f72));
  ExperimentConfig c;
  c.riders = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(limits.max_riders)));
  c.vehicles = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(limits.max_vehicles)));
  c.horizon = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(limits.max_horizon - 2)));
  c.vertices = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(limits.max_vertices - 2)));
  c.capacity = 1 + static_cast<int>(rng.below(2));
  c.max_degree = 2 + static_cast<int>(rng.below(2));
  c.alpha = Rational(static_cast<std::int64_t>(rng.below(6)));
  c.beta = Rational(1 + static_cast<std::int64_t>(rng.below(2)));
  c.gamma_max = Rational(1 + static_cast<std::int64_t>(rng.below(3)));
  auto instance = gen_instance(c, seed);
  for (auto& r : instance.riders) {
    r.gamma = instance.gamma_max * Rational(static_cast<std::int64_t>(rng.below(5)), 4);
  }
  return instance;
}

inline std::vector<Instance> corpus(std::size_t count, std::uint64_t first_seed = 1000, const CorpusLimits& limits = {}) {
  std::vector<Instance> out;
  for (std::size_t s = 0; s < count; ++s) out.push_back(corpus_instance(first_seed + s, limits));
  return out;
}

/// Every allocation order leaves every rider a vehicle-served route, so the
/// greedy never falls back to a taxi whatever the reports.
inline bool no_taxi_solvable(GreedyCache& greedy) {
  std::vector<int> order;
  for (std::size_t i = 0; i < greedy.instance().num_riders(); ++i) order.push_back(static_cast<int>(i));
  do {
    if (!step_infeasible_riders(greedy.run(order)).empty()) return false;
  } while (std::next_permutation(order.begin(), order.end()));
  return true;
}

/// The first `count` corpus instances from `first_seed` on that pass no_taxi_solvable.
inline std::vector<Instance> no_taxi_corpus(std::size_t count, std::uint64_t first_seed = 1000,
                                            const CorpusLimits& limits = {}) {
  std::vector<Instance> out;
  for (std::uint64_t s = first_seed; out.size() < count; ++s) {
    auto instance = corpus_instance(s, limits);
    GreedyCache greedy(instance, Restriction::kAllowSwitching);
    if (no_taxi_solvable(greedy)) out.push_back(std::move(instance));
  }
  return out;
}

}  // namespace rsmech::testing
