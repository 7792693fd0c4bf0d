#include "rsmech/road_network.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "rsmech/errors.hpp"
#include "rsmech/rng.hpp"

namespace rsmech {

RoadNetwork::RoadNetwork(std::vector<std::string> names, const std::vector<Edge>& edges)
    : names_(std::move(names)), successors_(names_.size()) {
  const auto n = names_.size();
  {
    auto sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ContractError("duplicate vertex name");
    }
  }
  for (const auto& e : edges) {
    if (!contains(e.from) || !contains(e.to)) throw ContractError("edge references an unknown vertex");
    if (e.is_loop()) throw ContractError("loops are implicit and must not be listed");
    auto& succ = successors_[static_cast<std::size_t>(e.from)];
    if (std::find(succ.begin(), succ.end(), e.to) != succ.end()) {
      throw ContractError("duplicate edge " + names_[e.from] + "->" + names_[e.to]);
    }
    succ.push_back(e.to);
    edges_.push_back(e);
  }
  for (auto& succ : successors_) std::sort(succ.begin(), succ.end());

  dist_.assign(n * n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<Vertex> queue{static_cast<Vertex>(s)};
    dist_[s * n + s] = 0;
    while (!queue.empty()) {
      const Vertex u = queue.front();
      queue.pop_front();
      for (Vertex v : successors_[static_cast<std::size_t>(u)]) {
        auto& d = dist_[s * n + static_cast<std::size_t>(v)];
        if (d < 0) {
          d = dist_[s * n + static_cast<std::size_t>(u)] + 1;
          queue.push_back(v);
        }
      }
    }
  }
}

std::optional<Vertex> RoadNetwork::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<Vertex>(i);
  }
  return std::nullopt;
}

Vertex RoadNetwork::at(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw ContractError("unknown vertex '" + std::string(name) + "'");
}

bool RoadNetwork::has_edge(Vertex from, Vertex to) const {
  if (!contains(from) || !contains(to)) return false;
  if (from == to) return true;
  const auto succ = successors(from);
  return std::binary_search(succ.begin(), succ.end(), to);
}

std::optional<int> RoadNetwork::distance(Vertex from, Vertex to) const {
  if (!contains(from) || !contains(to)) return std::nullopt;
  const int d = dist_[static_cast<std::size_t>(from) * size() + static_cast<std::size_t>(to)];
  if (d < 0) return std::nullopt;
  return d;
}

bool RoadNetwork::strongly_connected() const {
  return std::none_of(dist_.begin(), dist_.end(), [](int d) { return d < 0; });
}

int shortest_travel_time(const RoadNetwork& net, Vertex o, Vertex d) {
  if (!net.contains(o) || !net.contains(d)) throw ContractError("vertex outside the network");
  if (auto dist = net.distance(o, d)) return *dist;
  throw NoPathError("no path from " + net.name(o) + " to " + net.name(d));
}

std::vector<Vertex> shortest_path(const RoadNetwork& net, Vertex o, Vertex d) {
  int remaining = shortest_travel_time(net, o, d);
  std::vector<Vertex> path{o};
  Vertex cur = o;
  while (remaining > 0) {
    for (Vertex next : net.successors(cur)) {
      const auto rest = net.distance(next, d);
      if (rest && *rest == remaining - 1) {
        cur = next;
        break;
      }
    }
    path.push_back(cur);
    --remaining;
  }
  return path;
}

namespace {

void check_step(int t, int horizon) {
  if (t < 0 || t > horizon) {
    throw RangeError("time step " + std::to_string(t) + " outside [0," + std::to_string(horizon) + "]");
  }
}

Vertex loc_unchecked(const Route& route, int t) {
  if (route.path.empty()) throw ContractError("empty route");
  std::size_t s = 0;
  for (std::size_t i = 0; i < route.path.size() && i < route.times.size(); ++i) {
    if (route.times[i] <= t) s = i;
  }
  return route.path[s];
}

}  // namespace

Vertex loc_at(const Route& route, int t, int horizon) {
  check_step(t, horizon);
  return loc_unchecked(route, t);
}

Edge edge_at(const Route& route, int t, int horizon) {
  check_step(t, horizon);
  const Vertex here = loc_unchecked(route, t);
  if (t == horizon) return {here, here};
  return {here, loc_unchecked(route, t + 1)};
}

Timeline to_timeline(const Route& route, int horizon) {
  Timeline line(static_cast<std::size_t>(horizon) + 1);
  for (int t = 0; t <= horizon; ++t) line[static_cast<std::size_t>(t)] = loc_unchecked(route, t);
  return line;
}

Route from_timeline(const Timeline& timeline) {
  Route route;
  if (timeline.empty()) return route;
  route.path.push_back(timeline.front());
  route.times.push_back(0);
  for (std::size_t t = 0; t + 1 < timeline.size(); ++t) {
    if (timeline[t] == timeline[t + 1]) continue;
    if (route.times.back() != static_cast<int>(t)) {
      route.path.push_back(timeline[t]);
      route.times.push_back(static_cast<int>(t));
    }
    route.path.push_back(timeline[t + 1]);
    route.times.push_back(static_cast<int>(t) + 1);
  }
  return route;
}

Route canonicalize(const Route& route, int horizon) {
  return from_timeline(to_timeline(route, horizon));
}

bool RouteValidation::has(RouteViolation kind) const {
  return std::any_of(issues.begin(), issues.end(), [kind](const RouteIssue& i) { return i.kind == kind; });
}

RouteValidation validate_route(const RoadNetwork& net, const Route& route, int horizon) {
  RouteValidation out;
  auto add = [&](RouteViolation kind, std::size_t index, std::string detail) {
    out.issues.push_back({kind, index, std::move(detail)});
  };
  if (route.path.empty()) {
    add(RouteViolation::kEmpty, 0, "route has no entries");
    return out;
  }
  if (route.path.size() != route.times.size()) {
    add(RouteViolation::kLengthMismatch, 0, "path and times differ in length");
    return out;
  }
  if (route.times.front() != 0) add(RouteViolation::kStartTime, 0, "first departure is not at t=0");
  for (std::size_t s = 0; s < route.path.size(); ++s) {
    if (!net.contains(route.path[s])) add(RouteViolation::kUnknownVertex, s, "vertex not in the network");
  }
  if (!out.ok()) return out;
  for (std::size_t s = 0; s + 1 < route.path.size(); ++s) {
    const Vertex a = route.path[s];
    const Vertex b = route.path[s + 1];
    const int dt = route.times[s + 1] - route.times[s];
    if (dt < 0) add(RouteViolation::kTimeDecreasing, s + 1, "departure times decrease");
    if (!net.has_edge(a, b)) {
      add(RouteViolation::kMissingEdge, s, "no edge " + net.name(a) + "->" + net.name(b));
    } else if (a != b && dt != 1) {
      add(RouteViolation::kTimeIncrement, s + 1, "time increment differs from the edge length");
    }
  }
  if (route.times.back() > horizon) add(RouteViolation::kBeyondHorizon, route.times.size() - 1, "last departure after T");
  return out;
}

namespace {

std::vector<std::string> default_names(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) {
    names.push_back(n <= 26 ? std::string(1, static_cast<char>('A' + i)) : "v" + std::to_string(i));
  }
  return names;
}

}  // namespace

RoadNetwork random_network(int n_vertices, int max_degree, std::uint64_t seed, RandomNetworkOptions options) {
  if (n_vertices < 2) throw ConstructionError("random_network needs at least two vertices");
  if (max_degree < 1) throw ConstructionError("random_network needs max_degree >= 1");
  if (options.symmetric && n_vertices > 2 && max_degree < 2) {
    throw ConstructionError("a symmetric spanning cycle needs max_degree >= 2");
  }
  Rng rng(seed);
  std::vector<Vertex> order(static_cast<std::size_t>(n_vertices));
  for (int i = 0; i < n_vertices; ++i) order[static_cast<std::size_t>(i)] = i;
  rng.shuffle(order);

  const auto n = static_cast<std::size_t>(n_vertices);
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  std::vector<int> degree(n, 0);
  std::vector<Edge> edges;
  auto add_edge = [&](Vertex a, Vertex b) {
    if (a == b || adj[a][b]) return;
    adj[a][b] = true;
    ++degree[a];
    edges.push_back({a, b});
  };

  for (std::size_t i = 0; i < n; ++i) {
    const Vertex a = order[i];
    const Vertex b = order[(i + 1) % n];
    add_edge(a, b);
    if (options.symmetric) add_edge(b, a);
  }

  std::vector<Edge> candidates;
  for (Vertex a = 0; a < n_vertices; ++a) {
    for (Vertex b = 0; b < n_vertices; ++b) {
      if (a == b) continue;
      if (options.symmetric && b < a) continue;
      candidates.push_back({a, b});
    }
  }
  rng.shuffle(candidates);
  for (const auto& c : candidates) {
    const bool coin = rng.below(2) == 1;
    if (!coin || adj[c.from][c.to]) continue;
    if (degree[c.from] >= max_degree) continue;
    if (options.symmetric && (adj[c.to][c.from] || degree[c.to] >= max_degree)) continue;
    add_edge(c.from, c.to);
    if (options.symmetric) add_edge(c.to, c.from);
  }
  return RoadNetwork(default_names(n_vertices), edges);
}

}  // namespace rsmech
