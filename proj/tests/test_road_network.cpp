#include "doctest.h"

#include "oracles.hpp"
#include "rsmech/errors.hpp"
#include "rsmech/road_network.hpp"

using namespace rsmech;

namespace {

RoadNetwork chain3() { return RoadNetwork({"A", "B", "C"}, {{0, 1}, {1, 2}}); }

Route route(std::vector<Vertex> path, std::vector<int> times) { return Route{std::move(path), std::move(times)}; }

}  // namespace

TEST_CASE("edge and location lookups along a route") {
  const auto r = route({0, 1, 2}, {0, 1, 2});
  CHECK(edge_at(r, 1, 5) == Edge{1, 2});
  CHECK(loc_at(r, 1, 5) == 1);
  CHECK(loc_at(r, 0, 5) == 0);
  CHECK(edge_at(route({0, 0}, {0, 1}), 0, 5) == Edge{0, 0});
  CHECK(edge_at(route({0, 1}, {0, 1}), 3, 5) == Edge{1, 1});
  // Waiting at the origin until t=3.
  CHECK(loc_at(route({0, 0, 1}, {0, 3, 4}), 2, 5) == 0);
  CHECK_THROWS_AS(loc_at(r, 6, 5), RangeError);
  CHECK_THROWS_AS(edge_at(r, -1, 5), RangeError);
}

TEST_CASE("shortest travel time") {
  const auto net = chain3();
  CHECK(shortest_travel_time(net, 1, 1) == 0);
  CHECK(shortest_travel_time(RoadNetwork({"A", "B"}, {{0, 1}}), 0, 1) == 1);
  CHECK(shortest_travel_time(net, 0, 2) == 2);
  CHECK_THROWS_AS(shortest_travel_time(net, 2, 0), NoPathError);
  CHECK_THROWS_AS(shortest_travel_time(net, 0, 7), ContractError);
}

TEST_CASE("route validation") {
  const auto net = RoadNetwork({"A", "B", "C"}, {{0, 1}, {1, 0}});
  CHECK(validate_route(net, route({0, 1}, {0, 1}), 2).ok());
  CHECK(validate_route(net, route({0, 2}, {0, 1}), 2).has(RouteViolation::kMissingEdge));
  CHECK(validate_route(net, route({0, 1}, {0, 2}), 2).has(RouteViolation::kTimeIncrement));
  CHECK(validate_route(net, route({0, 1}, {0, 1, 2}), 2).has(RouteViolation::kLengthMismatch));
  CHECK(validate_route(net, route({0, 1}, {1, 2}), 2).has(RouteViolation::kStartTime));
  CHECK(validate_route(net, route({0, 1}, {0, 1}), 0).has(RouteViolation::kBeyondHorizon));
  CHECK(validate_route(net, route({}, {}), 2).has(RouteViolation::kEmpty));
}

TEST_CASE("timeline round trip is canonical") {
  const auto r = route({0, 0, 1, 0}, {0, 2, 3, 4});
  const auto line = to_timeline(r, 6);
  CHECK(line == Timeline{0, 0, 0, 1, 0, 0, 0});
  CHECK(to_timeline(from_timeline(line), 6) == line);
  CHECK(canonicalize(route({0, 0, 0, 1}, {0, 1, 2, 3}), 5) == route({0, 0, 1}, {0, 2, 3}));
}

TEST_CASE("network construction rejects malformed input") {
  CHECK_THROWS_AS(RoadNetwork({"A", "A"}, {}), ContractError);
  CHECK_THROWS_AS(RoadNetwork({"A", "B"}, {{0, 0}}), ContractError);
  CHECK_THROWS_AS(RoadNetwork({"A", "B"}, {{0, 1}, {0, 1}}), ContractError);
  CHECK_THROWS_AS(RoadNetwork({"A", "B"}, {{0, 2}}), ContractError);
}

TEST_CASE("random networks: degree cap, strong connectivity, determinism") {
  CHECK(random_network(4, 4, 1).edges() == random_network(4, 4, 1).edges());
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    for (bool symmetric : {true, false}) {
      const auto net = random_network(10, 4, seed, {symmetric});
      for (Vertex v = 0; v < 10; ++v) CHECK(net.successors(v).size() <= 4);
      const auto d = testing::floyd_warshall(net);
      for (Vertex a = 0; a < 10; ++a) {
        for (Vertex b = 0; b < 10; ++b) {
          REQUIRE(d[a][b] < testing::kNoPath);
          CHECK(net.distance(a, b) == d[a][b]);
        }
      }
      CHECK(net.strongly_connected());
      if (symmetric) {
        for (const auto& e : net.edges()) CHECK(net.has_edge(e.to, e.from));
      }
    }
  }
  CHECK_THROWS_AS(random_network(1, 4, 1), ConstructionError);
  CHECK_THROWS_AS(random_network(5, 1, 1), ConstructionError);
}

TEST_CASE("shortest paths are valid and minimal") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto net = random_network(7, 3, seed, {false});
    const auto d = testing::floyd_warshall(net);
    for (Vertex a = 0; a < 7; ++a) {
      for (Vertex b = 0; b < 7; ++b) {
        const auto path = shortest_path(net, a, b);
        CHECK(static_cast<int>(path.size()) == d[a][b] + 1);
        CHECK(path.front() == a);
        CHECK(path.back() == b);
        for (std::size_t s = 0; s + 1 < path.size(); ++s) CHECK(net.has_edge(path[s], path[s + 1]));
      }
    }
  }
}
