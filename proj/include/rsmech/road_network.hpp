#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rsmech {

using Vertex = int;

struct Edge {
  Vertex from = 0;
  Vertex to = 0;

  bool is_loop() const { return from == to; }
  int length() const { return from == to ? 0 : 1; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed road graph. Non-loop edges have unit length; every vertex carries
/// an implicit zero-length loop that models a stationary rider or vehicle.
class RoadNetwork {
 public:
  RoadNetwork() = default;

  /// Throws ContractError on duplicate names, duplicate edges, explicit loops
  /// or edges that reference unknown vertices.
  RoadNetwork(std::vector<std::string> names, const std::vector<Edge>& edges);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Vertex v) const { return names_.at(static_cast<std::size_t>(v)); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Vertex> find(std::string_view name) const;
  /// Like find, but throws ContractError for unknown names.
  Vertex at(std::string_view name) const;

  bool contains(Vertex v) const { return v >= 0 && static_cast<std::size_t>(v) < names_.size(); }
  bool has_edge(Vertex from, Vertex to) const;
  /// Out-neighbours excluding the loop, ascending.
  std::span<const Vertex> successors(Vertex v) const { return successors_.at(static_cast<std::size_t>(v)); }
  /// Non-loop edges in insertion order.
  const std::vector<Edge>& edges() const { return edges_; }

  /// Hop distance, or nullopt when unreachable.
  std::optional<int> distance(Vertex from, Vertex to) const;
  /// Any vertex pair whose distance is defined.
  bool strongly_connected() const;

 private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> successors_;
  std::vector<int> dist_;  // row-major, -1 when unreachable
};

/// Minimal number of unit edges on a path from o to d. Throws NoPathError.
int shortest_travel_time(const RoadNetwork& net, Vertex o, Vertex d);

/// Deterministic shortest path (smallest successor id at every hop).
std::vector<Vertex> shortest_path(const RoadNetwork& net, Vertex o, Vertex d);

/// Timed vertex sequence. Entry s departs path[s] at times[s]; the holder keeps
/// the last vertex once the sequence ends.
struct Route {
  std::vector<Vertex> path;
  std::vector<int> times;

  friend bool operator==(const Route&, const Route&) = default;
};

/// Position at every step 0..horizon. Index t is the vertex occupied at t.
using Timeline = std::vector<Vertex>;

Vertex loc_at(const Route& route, int t, int horizon);
Edge edge_at(const Route& route, int t, int horizon);

/// Expands a route into one position per step.
Timeline to_timeline(const Route& route, int horizon);
/// Builds the canonical route of a timeline: one entry at the start, and for
/// every move a departure entry (only if the holder waited first) followed by
/// the arrival entry. Trailing waits are implicit.
Route from_timeline(const Timeline& timeline);
/// Collapses duplicate (vertex, time) entries and redundant waits.
Route canonicalize(const Route& route, int horizon);

enum class RouteViolation {
  kEmpty,
  kLengthMismatch,
  kStartTime,
  kUnknownVertex,
  kTimeDecreasing,
  kMissingEdge,
  kTimeIncrement,
  kBeyondHorizon,
};

struct RouteIssue {
  RouteViolation kind;
  std::size_t index;  // entry index the issue refers to
  std::string detail;
};

struct RouteValidation {
  std::vector<RouteIssue> issues;
  bool ok() const { return issues.empty(); }
  bool has(RouteViolation kind) const;
};

RouteValidation validate_route(const RoadNetwork& net, const Route& route, int horizon);

struct RandomNetworkOptions {
  bool symmetric = true;  // every edge is added in both directions
};

/// Strongly connected random network: a random spanning cycle, then random
/// extra edges while the out-degree cap allows. Vertices are named A, B, ...
/// up to 26 vertices and v0, v1, ... beyond.
RoadNetwork random_network(int n_vertices, int max_degree, std::uint64_t seed,
                           RandomNetworkOptions options = {});

}  // namespace rsmech
