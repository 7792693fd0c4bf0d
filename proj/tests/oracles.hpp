#pragma once

// Brute-force references. Nothing here calls the solver, the greedy code or
// the matching code it is compared against.

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "rsmech/model.hpp"

namespace rsmech::testing {

constexpr int kNoPath = std::numeric_limits<int>::max() / 4;

inline std::vector<std::vector<int>> floyd_warshall(const RoadNetwork& net) {
  const auto n = net.size();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kNoPath));
  for (std::size_t v = 0; v < n; ++v) d[v][v] = 0;
  for (const auto& e : net.edges()) d[e.from][e.to] = std::min(d[e.from][e.to], 1);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) d[a][b] = std::min(d[a][b], d[a][m] + d[m][b]);
    }
  }
  return d;
}

/// Calls `visit` with every allocation in which riders board vehicles only on
/// moving steps, taxi riders follow one shortest path, and capacity holds.
/// Feasibility beyond that is left to the caller.
inline void enumerate_allocations(const Instance& inst, const std::function<void(const Allocation&)>& visit) {
  const int T = inst.horizon;
  const auto N = inst.num_riders();
  const auto K = inst.num_vehicles();
  const auto dist = floyd_warshall(inst.network);
  std::vector<std::vector<Vertex>> vehicle_lines(K);
  std::vector<std::vector<Vertex>> rider_lines(N);
  std::vector<std::vector<int>> rides(N);  // per rider, per step: vehicle or -1
  std::vector<bool> taxi(N, false);

  // Taxi route: walk along any neighbour that is one step closer, lowest index first.
  auto taxi_line = [&](std::size_t i) {
    std::vector<Vertex> line{inst.riders[i].origin};
    Vertex cur = inst.riders[i].origin;
    const Vertex dest = inst.riders[i].destination;
    for (int t = 0; t < T; ++t) {
      if (cur != dest) {
        for (Vertex v = 0; v < static_cast<Vertex>(inst.network.size()); ++v) {
          if (v != cur && inst.network.has_edge(cur, v) && dist[v][dest] == dist[cur][dest] - 1) {
            cur = v;
            break;
          }
        }
      }
      line.push_back(cur);
    }
    return line;
  };

  auto emit = [&] {
    Allocation alloc;
    alloc.assignment = Assignment(T, N, K);
    for (std::size_t i = 0; i < N; ++i) {
      alloc.rider_routes.push_back(from_timeline(rider_lines[i]));
      for (int t = 0; t < T; ++t) {
        if (rides[i][t] >= 0) alloc.assignment.set(t, i, static_cast<std::size_t>(rides[i][t]));
      }
    }
    for (std::size_t k = 0; k < K; ++k) alloc.vehicle_routes.push_back(from_timeline(vehicle_lines[k]));
    visit(alloc);
  };

  // Riders one at a time; each step stay or ride a co-located moving vehicle.
  std::function<void(std::size_t, int)> rider_step = [&](std::size_t i, int t) {
    if (i == N) {
      emit();
      return;
    }
    if (t == 0) {
      // Taxi branch first, then rideshare.
      taxi[i] = true;
      rider_lines[i] = taxi_line(i);
      rides[i].assign(T, -1);
      rider_step(i + 1, 0);
      taxi[i] = false;
      rider_lines[i] = {inst.riders[i].origin};
      rides[i].assign(T, -1);
    }
    const Vertex dest = inst.riders[i].destination;
    if (t == T) {
      if (rider_lines[i].back() == dest) rider_step(i + 1, 0);
      return;
    }
    const Vertex here = rider_lines[i].back();
    if (dist[here][dest] > T - t) return;
    rider_lines[i].push_back(here);
    rides[i][t] = -1;
    rider_step(i, t + 1);
    rider_lines[i].pop_back();
    if (here == dest) return;  // never leave after arriving
    for (std::size_t k = 0; k < K; ++k) {
      const auto& vl = vehicle_lines[k];
      if (vl[t] != here || vl[t + 1] == here) continue;
      int load = 0;
      for (std::size_t j = 0; j < i; ++j) load += rides[j][t] == static_cast<int>(k) ? 1 : 0;
      if (load >= inst.capacity) continue;
      rider_lines[i].push_back(vl[t + 1]);
      rides[i][t] = static_cast<int>(k);
      rider_step(i, t + 1);
      rides[i][t] = -1;
      rider_lines[i].pop_back();
    }
  };

  std::function<void(std::size_t, int)> vehicle_step = [&](std::size_t k, int t) {
    if (k == K) {
      for (std::size_t i = 0; i < N; ++i) {
        rider_lines[i] = {inst.riders[i].origin};
        rides[i].assign(T, -1);
      }
      rider_step(0, 0);
      return;
    }
    auto& line = vehicle_lines[k];
    if (t == 0) line = {inst.vehicles[k].location};
    if (t == T) {
      vehicle_step(k + 1, 0);
      return;
    }
    const Vertex here = line.back();
    for (Vertex v = 0; v < static_cast<Vertex>(inst.network.size()); ++v) {
      if (!inst.network.has_edge(here, v)) continue;  // includes the stay
      line.push_back(v);
      vehicle_step(k, t + 1);
      line.pop_back();
    }
  };
  vehicle_step(0, 0);
}

/// Number of distinct vehicles a rider boards.
inline int vehicles_boarded(const Allocation& alloc, std::size_t rider) {
  const auto& b = alloc.assignment;
  int count = 0;
  for (std::size_t k = 0; k < b.vehicles(); ++k) {
    for (std::size_t t = 0; t < b.steps(); ++t) {
      if (b.get(static_cast<int>(t), rider, k)) {
        ++count;
        break;
      }
    }
  }
  return count;
}

/// Shortest closed walk from `depot` through every vertex, by permutation.
inline int brute_force_tsp(const RoadNetwork& net, Vertex depot) {
  const auto dist = floyd_warshall(net);
  std::vector<Vertex> rest;
  for (Vertex v = 0; v < static_cast<Vertex>(net.size()); ++v) {
    if (v != depot) rest.push_back(v);
  }
  int best = kNoPath;
  do {
    int len = 0;
    Vertex cur = depot;
    for (Vertex v : rest) {
      len += dist[cur][v];
      cur = v;
    }
    len += dist[cur][depot];
    best = std::min(best, len);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

/// Minimum matching cost by trying every injective rider-to-vehicle map,
/// with each rider's own taxi as the fallback column.
inline Rational brute_force_matching(const Instance& inst, const TypeProfile& profile) {
  const auto dist = floyd_warshall(inst.network);
  const auto N = inst.num_riders();
  const auto K = inst.num_vehicles();
  std::vector<bool> used(K, false);
  std::optional<Rational> best;
  std::function<void(std::size_t, Rational)> rec = [&](std::size_t i, Rational acc) {
    if (i == N) {
      if (!best || acc < *best) best = acc;
      return;
    }
    const auto& r = inst.riders[i];
    const int t0 = dist[r.origin][r.destination];
    rec(i + 1, acc + (inst.alpha + inst.beta + profile[i]) * Rational(t0));
    for (std::size_t k = 0; k < K; ++k) {
      if (used[k]) continue;
      const int d1 = dist[inst.vehicles[k].location][r.origin];
      if (d1 >= kNoPath || d1 + t0 > inst.horizon) continue;
      if (!inst.autonomous && d1 != 0) continue;
      used[k] = true;
      rec(i + 1, acc + (profile[i] + inst.beta) * Rational(d1 + t0));
      used[k] = false;
    }
  };
  rec(0, Rational(0));
  return *best;
}

}  // namespace rsmech::testing
