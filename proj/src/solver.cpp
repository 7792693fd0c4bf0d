#include "rsmech/solver.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "rsmech/errors.hpp"

namespace rsmech {

namespace {

using Key = unsigned __int128;

struct KeyHash {
  std::size_t operator()(Key k) const noexcept {
    auto lo = static_cast<std::uint64_t>(k);
    auto hi = static_cast<std::uint64_t>(k >> 64);
    std::uint64_t h = lo * 0x9E3779B97F4A7C15ULL ^ (hi + 0x632BE59BD9B4E019ULL + (lo << 6) + (lo >> 2));
    h ^= h >> 29;
    return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ULL);
  }
};

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

/// Lexicographic search cost. Values are integers in units of 1/scale.
struct Cost {
  std::int64_t main = kInf;
  std::int64_t aux1 = 0;
  std::int64_t aux2 = 0;

  bool feasible() const { return main < kInf; }
  friend bool operator<(const Cost& a, const Cost& b) {
    if (a.main != b.main) return a.main < b.main;
    if (a.aux1 != b.aux1) return a.aux1 < b.aux1;
    return a.aux2 < b.aux2;
  }
  Cost operator+(const Cost& o) const { return {main + o.main, aux1 + o.aux1, aux2 + o.aux2}; }
};

std::int64_t lcm_of_denominators(const std::vector<Rational>& values) {
  std::int64_t l = 1;
  for (const auto& v : values) l = std::lcm(l, v.denominator());
  return l;
}

std::int64_t scaled(const Rational& value, std::int64_t scale) {
  return value.numerator() * (scale / value.denominator());
}

int bits_for(std::uint64_t distinct_values) {
  if (distinct_values <= 1) return 0;
  return std::bit_width(distinct_values - 1);
}

class BitWriter {
 public:
  void put(std::uint64_t value, int bits) {
    if (bits == 0) return;
    key_ |= static_cast<Key>(value) << used_;
    used_ += bits;
  }
  Key key() const { return key_; }

 private:
  Key key_ = 0;
  int used_ = 0;
};

int travel(const Timeline& line) {
  int n = 0;
  for (std::size_t t = 0; t + 1 < line.size(); ++t) n += line[t] != line[t + 1] ? 1 : 0;
  return n;
}

// ---------------------------------------------------------------------------
// Joint search over every rider and vehicle in the time-expanded graph.

constexpr int kMaxJointVehicles = 4;
constexpr int kMaxJointRiders = 8;
constexpr int kUnreachable = 1 << 20;

struct JointState {
  int t = 0;
  std::array<Vertex, kMaxJointVehicles> vehicle{};
  std::array<Vertex, kMaxJointRiders> rider{};  // == absent code when not taking part
  std::array<int, kMaxJointRiders> bound{};     // 0 = none, k+1 = vehicle k
};

class JointSearch {
 public:
  JointSearch(const Instance& instance, const TypeProfile& profile, Objective objective, Restriction restriction,
              std::vector<int> riders, const SolverOptions& options)
      : inst_(instance), objective_(objective), restriction_(restriction), riders_(std::move(riders)),
        options_(options) {
    K_ = static_cast<int>(inst_.num_vehicles());
    n_ = static_cast<int>(riders_.size());
    T_ = inst_.horizon;
    V_ = static_cast<int>(inst_.network.size());
    if (K_ > kMaxJointVehicles || n_ > kMaxJointRiders) {
      throw SizeError("exact search supports at most 4 vehicles and 8 riders");
    }
    absent_ = V_;
    std::vector<Rational> denoms{inst_.beta};
    for (int j : riders_) {
      denoms.push_back(profile[j]);
      denoms.push_back(inst_.outside_cost(j, profile[j]));
    }
    scale_ = objective_ == Objective::kTotalNormalizedDelay ? 1 : lcm_of_denominators(denoms);
    beta_ = scaled(inst_.beta, scale_);
    for (int j : riders_) {
      gamma_.push_back(objective_ == Objective::kTotalNormalizedDelay ? 1 : scaled(profile[j], scale_));
      outside_.push_back(scaled(inst_.outside_cost(j, profile[j]), scale_));
      dest_.push_back(inst_.riders[j].destination);
    }
    bits_t_ = bits_for(static_cast<std::uint64_t>(T_) + 1);
    bits_v_ = bits_for(static_cast<std::uint64_t>(V_) + 1);
    bits_bound_ = restriction_ == Restriction::kSingleVehicle ? bits_for(static_cast<std::uint64_t>(K_) + 1) : 0;
    imaginary_ = objective_ == Objective::kSocialCostI;
    // Vehicle sets fix the restriction for the imaginary objective.
    if (imaginary_) bits_bound_ = 0;
    allowed_.fill(~0u);
    coef_.fill(1);
    for (int j : riders_) {
      t0_.push_back(inst_.shortest_time(static_cast<std::size_t>(j)));
      std::array<int, kMaxJointVehicles> pickup{};
      pickup.fill(kUnreachable);
      for (int k = 0; k < K_; ++k) {
        if (auto d = inst_.network.distance(inst_.vehicles[k].location, inst_.riders[j].origin)) pickup[k] = *d;
      }
      pickup_.push_back(pickup);
    }
    const int total = bits_t_ + (K_ + n_) * bits_v_ + n_ * bits_bound_;
    if (total > 128) throw SizeError("search state does not fit the packed key");
    if (K_ * 8 + n_ * 4 > 64 || V_ > 255) throw SizeError("search decisions do not fit the packed choice");
  }

  OptimalSolution run() {
    if (imaginary_) return run_imaginary();
    const bool allow_taxi = objective_ != Objective::kTotalNormalizedDelay;
    const unsigned masks = allow_taxi ? (1u << n_) : 1u;
    // Subsets in order of a lower bound, so the loop can stop early.
    std::vector<std::pair<std::int64_t, unsigned>> order;
    for (unsigned m = 0; m < masks; ++m) order.emplace_back(taxi_bound(m), m);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    Cost best;
    unsigned best_mask = 0;
    for (const auto& [bound, m] : order) {
      if (best.feasible() && bound >= best.main) break;
      Cost c{0, 0, 0};
      for (int j = 0; j < n_; ++j) {
        if (m & (1u << j)) c.main += outside_[j];
      }
      const Cost rest = solve(start(m));
      if (!rest.feasible()) continue;
      c = c + rest;
      if (c < best) {
        best = c;
        best_mask = m;
      }
    }
    if (!best.feasible()) throw InfeasibleError("no feasible allocation within the horizon");
    return reconstruct(best, best_mask);
  }

  std::int64_t taxi_bound(unsigned taxi) const {
    if (objective_ == Objective::kTotalNormalizedDelay) return 0;
    std::int64_t bound = 0;
    int fuel = 0;
    for (int j = 0; j < n_; ++j) {
      if (taxi & (1u << j)) {
        bound += outside_[j];
        continue;
      }
      if (t0_[j] == 0) continue;
      const int reach = *std::min_element(pickup_[j].begin(), pickup_[j].begin() + K_);
      bound += gamma_[j] * (reach + t0_[j]);
      fuel = std::max(fuel, reach + t0_[j]);
    }
    return bound + beta_ * fuel;
  }

 private:
  struct Node {
    Cost cost;
    std::uint64_t choice = 0;
  };

  using VehicleSets = std::array<unsigned, kMaxJointRiders>;

  unsigned apply_sets(const VehicleSets& sets) {
    unsigned taxi = 0;
    coef_.fill(1);
    for (int j = 0; j < n_; ++j) {
      allowed_[j] = sets[j];
      if (sets[j] == 0) taxi |= 1u << j;
      for (int k = 0; k < K_; ++k) coef_[k] += (sets[j] >> k) & 1u;
    }
    memo_.clear();
    return taxi;
  }

  // c_I charges every vehicle's fuel once more per rider that touched it.
  // Guessing each rider's vehicle set up front turns that into a per-move
  // weight. Boarding a subset of the guessed set only overcharges, so the
  // minimum over all guesses is exact.
  OptimalSolution run_imaginary() {
    std::vector<unsigned> options;
    if (restriction_ == Restriction::kSingleVehicle) {
      options.push_back(0);
      for (int k = 0; k < K_; ++k) options.push_back(1u << k);
    } else {
      for (unsigned m = 0; m < (1u << K_); ++m) options.push_back(m);
    }
    struct Guess {
      VehicleSets sets{};
      std::int64_t bound = 0;
    };
    std::vector<Guess> guesses;
    VehicleSets sets{};
    auto rec = [&](auto&& self, int j) -> void {
      if (j == n_) {
        Guess g{sets, 0};
        std::array<std::int64_t, kMaxJointVehicles> coef{};
        std::array<int, kMaxJointVehicles> moves{};
        coef.fill(1);
        for (int r = 0; r < n_; ++r) {
          if (sets[r] == 0) {
            g.bound += outside_[r];
            continue;
          }
          // Some vehicle of the set has to reach the origin first.
          int reach = kUnreachable;
          for (int k = 0; k < K_; ++k) {
            if (!((sets[r] >> k) & 1u)) continue;
            coef[k] += 1;
            reach = std::min(reach, pickup_[r][k]);
          }
          if (reach + t0_[r] > T_) return;
          g.bound += gamma_[r] * (reach + t0_[r]);
          if (std::popcount(sets[r]) == 1) {
            const int k = std::countr_zero(sets[r]);
            moves[k] = std::max(moves[k], pickup_[r][k] + t0_[r]);
          }
        }
        for (int k = 0; k < K_; ++k) g.bound += beta_ * coef[k] * moves[k];
        guesses.push_back(g);
        return;
      }
      for (unsigned m : options) {
        sets[j] = m;
        self(self, j + 1);
      }
    };
    rec(rec, 0);
    std::stable_sort(guesses.begin(), guesses.end(),
                     [](const Guess& a, const Guess& b) { return a.bound < b.bound; });
    Cost best;
    std::size_t best_index = guesses.size();
    for (std::size_t g = 0; g < guesses.size(); ++g) {
      if (best.feasible() && guesses[g].bound >= best.main) break;
      const unsigned taxi = apply_sets(guesses[g].sets);
      Cost c{0, 0, 0};
      for (int j = 0; j < n_; ++j) {
        if (taxi & (1u << j)) c.main += outside_[j];
      }
      const Cost rest = solve(start(taxi));
      if (!rest.feasible()) continue;
      c = c + rest;
      if (c < best) {
        best = c;
        best_index = g;
      }
    }
    if (!best.feasible()) throw InfeasibleError("no feasible allocation within the horizon");
    const unsigned taxi = apply_sets(guesses[best_index].sets);
    solve(start(taxi));
    return reconstruct(best, taxi);
  }

  JointState start(unsigned taxi_mask) const {
    JointState s;
    for (int k = 0; k < K_; ++k) s.vehicle[k] = inst_.vehicles[k].location;
    for (int j = 0; j < n_; ++j) {
      s.rider[j] = (taxi_mask & (1u << j)) ? absent_ : inst_.riders[riders_[j]].origin;
    }
    return s;
  }

  Key encode(const JointState& s) const {
    BitWriter w;
    w.put(static_cast<std::uint64_t>(s.t), bits_t_);
    for (int k = 0; k < K_; ++k) w.put(static_cast<std::uint64_t>(s.vehicle[k]), bits_v_);
    for (int j = 0; j < n_; ++j) {
      w.put(static_cast<std::uint64_t>(s.rider[j]), bits_v_);
      w.put(static_cast<std::uint64_t>(s.bound[j]), bits_bound_);
    }
    return w.key();
  }

  bool active(const JointState& s, int j) const { return s.rider[j] != absent_ && s.rider[j] != dest_[j]; }

  /// Applies a decision; returns false when pruned.
  bool apply(const JointState& s, const std::array<Vertex, kMaxJointVehicles>& vnext,
             const std::array<int, kMaxJointRiders>& ride, JointState& next, Cost& step) const {
    next = s;
    next.t = s.t + 1;
    step = Cost{0, 0, 0};
    for (int j = 0; j < n_; ++j) {
      if (active(s, j)) {
        step.main += gamma_[j];
        step.aux1 += 1;
      }
    }
    for (int j = 0; j < n_; ++j) {
      if (ride[j] < 0) continue;
      const int k = ride[j];
      next.rider[j] = vnext[k];
      if (restriction_ == Restriction::kSingleVehicle && !imaginary_) next.bound[j] = k + 1;
    }
    for (int k = 0; k < K_; ++k) {
      if (vnext[k] == s.vehicle[k]) continue;
      step.aux2 += 1;
      if (objective_ == Objective::kTotalNormalizedDelay) continue;
      step.main += beta_ * coef_[k];
    }
    for (int k = 0; k < K_; ++k) next.vehicle[k] = vnext[k];
    const int left = T_ - next.t;
    for (int j = 0; j < n_; ++j) {
      if (!active(next, j)) continue;
      const auto d = inst_.network.distance(next.rider[j], dest_[j]);
      if (!d || *d > left) return false;
    }
    return true;
  }

  static std::uint64_t pack_choice(int K, int n, const std::array<Vertex, kMaxJointVehicles>& vnext,
                                   const std::array<int, kMaxJointRiders>& ride) {
    std::uint64_t c = 0;
    int shift = 0;
    for (int k = 0; k < K; ++k, shift += 8) c |= static_cast<std::uint64_t>(vnext[k]) << shift;
    for (int j = 0; j < n; ++j, shift += 4) c |= static_cast<std::uint64_t>(ride[j] + 1) << shift;
    return c;
  }

  void unpack_choice(std::uint64_t c, std::array<Vertex, kMaxJointVehicles>& vnext,
                     std::array<int, kMaxJointRiders>& ride) const {
    int shift = 0;
    for (int k = 0; k < K_; ++k, shift += 8) vnext[k] = static_cast<Vertex>((c >> shift) & 0xFF);
    for (int j = 0; j < n_; ++j, shift += 4) ride[j] = static_cast<int>((c >> shift) & 0xF) - 1;
  }

  Cost solve(const JointState& s) {
    if (s.t == T_) {
      for (int j = 0; j < n_; ++j) {
        if (active(s, j)) return Cost{};
      }
      return Cost{0, 0, 0};
    }
    const Key key = encode(s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.cost;
    if (memo_.size() >= options_.state_budget) throw SizeError("exact search exceeded the state budget");

    Node node;
    std::array<Vertex, kMaxJointVehicles> vnext{};
    std::array<int, kMaxJointRiders> ride{};
    std::array<int, kMaxJointVehicles> load{};
    JointState next;
    Cost step;

    // Riders choose among staying and boarding a co-located moving vehicle.
    auto riders_rec = [&](auto&& self, int j) -> void {
      if (j == n_) {
        if (!inst_.autonomous) {
          for (int k = 0; k < K_; ++k) {
            if (vnext[k] != s.vehicle[k] && load[k] == 0) return;
          }
        }
        if (!apply(s, vnext, ride, next, step)) return;
        const Cost rest = solve(next);
        if (!rest.feasible()) return;
        const Cost total = step + rest;
        if (total < node.cost) {
          node.cost = total;
          node.choice = pack_choice(K_, n_, vnext, ride);
        }
        return;
      }
      ride[j] = -1;
      self(self, j + 1);
      if (!active(s, j)) return;
      for (int k = 0; k < K_; ++k) {
        if (s.vehicle[k] != s.rider[j] || vnext[k] == s.vehicle[k]) continue;
        if (load[k] >= inst_.capacity) continue;
        if (s.bound[j] != 0 && s.bound[j] != k + 1) continue;
        if (!((allowed_[j] >> k) & 1u)) continue;
        ride[j] = k;
        ++load[k];
        self(self, j + 1);
        --load[k];
        ride[j] = -1;
      }
    };
    auto vehicles_rec = [&](auto&& self, int k) -> void {
      if (k == K_) {
        riders_rec(riders_rec, 0);
        return;
      }
      const Vertex here = s.vehicle[k];
      vnext[k] = here;
      self(self, k + 1);
      for (Vertex v : inst_.network.successors(here)) {
        vnext[k] = v;
        self(self, k + 1);
      }
      vnext[k] = here;
    };
    vehicles_rec(vehicles_rec, 0);
    memo_[key] = node;
    return node.cost;
  }

  OptimalSolution reconstruct(const Cost& best, unsigned taxi_mask) {
    const auto N = inst_.num_riders();
    Allocation alloc = all_taxi_allocation(inst_);
    std::vector<Timeline> rider_lines(N);
    std::vector<Timeline> vehicle_lines(static_cast<std::size_t>(K_));
    JointState s = start(taxi_mask);
    for (int j = 0; j < n_; ++j) {
      if (s.rider[j] != absent_) rider_lines[riders_[j]].push_back(s.rider[j]);
    }
    for (int k = 0; k < K_; ++k) vehicle_lines[k].push_back(s.vehicle[k]);
    while (s.t < T_) {
      const auto it = memo_.find(encode(s));
      if (it == memo_.end()) throw std::logic_error("missing search node during reconstruction");
      std::array<Vertex, kMaxJointVehicles> vnext{};
      std::array<int, kMaxJointRiders> ride{};
      unpack_choice(it->second.choice, vnext, ride);
      for (int j = 0; j < n_; ++j) {
        if (ride[j] >= 0) alloc.assignment.set(s.t, static_cast<std::size_t>(riders_[j]), static_cast<std::size_t>(ride[j]));
      }
      JointState next;
      Cost step;
      apply(s, vnext, ride, next, step);
      s = next;
      for (int j = 0; j < n_; ++j) {
        if (s.rider[j] != absent_) rider_lines[riders_[j]].push_back(s.rider[j]);
      }
      for (int k = 0; k < K_; ++k) vehicle_lines[k].push_back(s.vehicle[k]);
    }
    for (int j = 0; j < n_; ++j) {
      const auto& line = rider_lines[riders_[j]];
      if (!line.empty()) alloc.rider_routes[riders_[j]] = from_timeline(line);
    }
    int fuel = 0;
    for (int k = 0; k < K_; ++k) {
      alloc.vehicle_routes[k] = from_timeline(vehicle_lines[k]);
      fuel += travel(vehicle_lines[k]);
    }
    OptimalSolution out;
    out.allocation = std::move(alloc);
    out.vehicle_travel = fuel;
    if (objective_ == Objective::kTotalNormalizedDelay) {
      std::int64_t base = 0;
      for (int j : riders_) base += inst_.shortest_time(static_cast<std::size_t>(j));
      out.value = Rational(best.main - base);
    } else {
      out.value = Rational(best.main, scale_);
    }
    return out;
  }

  const Instance& inst_;
  Objective objective_;
  Restriction restriction_;
  std::vector<int> riders_;
  SolverOptions options_;
  int K_ = 0;
  int n_ = 0;
  int T_ = 0;
  int V_ = 0;
  Vertex absent_ = 0;
  std::int64_t scale_ = 1;
  std::int64_t beta_ = 0;
  std::vector<std::int64_t> gamma_;
  std::vector<std::int64_t> outside_;
  std::vector<Vertex> dest_;
  int bits_t_ = 0;
  int bits_v_ = 0;
  int bits_bound_ = 0;
  bool imaginary_ = false;
  std::vector<int> t0_;
  std::vector<std::array<int, kMaxJointVehicles>> pickup_;  // vehicle start to rider origin
  // Imaginary objective: vehicles rider j may board, and the fuel multiplier
  // 1 + (riders whose set contains k) charged per move of vehicle k.
  std::array<unsigned, kMaxJointRiders> allowed_{};
  std::array<std::int64_t, kMaxJointVehicles> coef_{};
  std::unordered_map<Key, Node, KeyHash> memo_;
};

// ---------------------------------------------------------------------------
// Single-rider extension of a greedy prefix.

constexpr int kMaxStepVehicles = 6;

struct StepWeights {
  std::int64_t time = 1;  // per step before arrival
  std::int64_t fuel = 0;  // per vehicle move
  std::int64_t scale = 1;
};

struct StepResult {
  Cost cost;
  Timeline rider_line;
  std::vector<int> rides;
  std::vector<Timeline> vehicle_lines;  // for the searched vehicles, same order
};

class StepSearch {
 public:
  StepSearch(const Instance& instance, const GreedyPrefix& prefix, int rider, std::vector<int> vehicles,
             StepWeights weights, const SolverOptions& options)
      : inst_(instance), rider_(rider), vehicles_(std::move(vehicles)), weights_(weights), options_(options) {
    T_ = inst_.horizon;
    A_ = static_cast<int>(vehicles_.size());
    if (A_ > kMaxStepVehicles || inst_.network.size() > 255) {
      throw SizeError("vehicle-switching search supports at most six vehicles");
    }
    dest_ = inst_.riders[rider_].destination;
    const auto steps = static_cast<std::size_t>(T_);
    pin_.assign(static_cast<std::size_t>(A_), std::vector<Edge>(steps, Edge{-1, -1}));
    load_.assign(static_cast<std::size_t>(A_), std::vector<int>(steps, 0));
    for (int a = 0; a < A_; ++a) {
      const int k = vehicles_[a];
      for (std::size_t j = 0; j < prefix.rides.size(); ++j) {
        if (!prefix.allocated[j] || prefix.taxi[j]) continue;
        for (int t = 0; t < T_; ++t) {
          if (prefix.rides[j][t] != k) continue;
          pin_[a][t] = Edge{prefix.rider_lines[j][t], prefix.rider_lines[j][t + 1]};
          ++load_[a][t];
        }
      }
    }
    // reach_[a][t][v]: vehicle a can sit at v at t and still honour every later pin.
    const auto V = inst_.network.size();
    reach_.assign(static_cast<std::size_t>(A_), std::vector<std::vector<bool>>(steps + 1, std::vector<bool>(V, false)));
    for (int a = 0; a < A_; ++a) {
      std::fill(reach_[a][steps].begin(), reach_[a][steps].end(), true);
      for (int t = T_ - 1; t >= 0; --t) {
        for (std::size_t v = 0; v < V; ++v) {
          const Edge pin = pin_[a][t];
          if (pin.from >= 0) {
            reach_[a][t][v] = pin.from == static_cast<Vertex>(v) && reach_[a][t + 1][pin.to];
            continue;
          }
          bool ok = reach_[a][t + 1][v];
          for (Vertex w : inst_.network.successors(static_cast<Vertex>(v))) ok = ok || reach_[a][t + 1][w];
          reach_[a][t][v] = ok;
        }
      }
    }
    start_rider_ = inst_.riders[rider_].origin;
    for (int a = 0; a < A_; ++a) start_vehicle_[a] = prefix.vehicle_lines[vehicles_[a]][0];
  }

  std::optional<StepResult> run() {
    for (int a = 0; a < A_; ++a) {
      if (!reach_[a][0][start_vehicle_[a]]) return std::nullopt;
    }
    const Cost best = solve(0, start_rider_, start_vehicle_);
    if (!best.feasible()) return std::nullopt;
    StepResult out;
    out.cost = best;
    out.rides.assign(static_cast<std::size_t>(T_), -1);
    out.vehicle_lines.assign(static_cast<std::size_t>(A_), Timeline{});
    Vertex r = start_rider_;
    auto veh = start_vehicle_;
    out.rider_line.push_back(r);
    for (int a = 0; a < A_; ++a) out.vehicle_lines[a].push_back(veh[a]);
    for (int t = 0; t < T_; ++t) {
      const auto& node = memo_.at(encode(t, r, veh));
      std::array<Vertex, kMaxStepVehicles> vnext{};
      for (int a = 0; a < A_; ++a) vnext[a] = static_cast<Vertex>((node.choice >> (8 * a)) & 0xFF);
      const int ride = static_cast<int>(node.choice >> 56) - 1;
      if (ride >= 0) {
        out.rides[t] = vehicles_[ride];
        r = vnext[ride];
      }
      veh = vnext;
      out.rider_line.push_back(r);
      for (int a = 0; a < A_; ++a) out.vehicle_lines[a].push_back(veh[a]);
    }
    return out;
  }

 private:
  struct Node {
    Cost cost;
    std::uint64_t choice = 0;
  };

  std::uint64_t encode(int t, Vertex r, const std::array<Vertex, kMaxStepVehicles>& veh) const {
    std::uint64_t key = static_cast<std::uint64_t>(t) | static_cast<std::uint64_t>(r) << 8;
    for (int a = 0; a < A_; ++a) key |= static_cast<std::uint64_t>(veh[a]) << (16 + 8 * a);
    return key;
  }

  Cost solve(int t, Vertex r, const std::array<Vertex, kMaxStepVehicles>& veh) {
    if (t == T_) return r == dest_ ? Cost{0, 0, 0} : Cost{};
    const auto key = encode(t, r, veh);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.cost;
    if (memo_.size() >= options_.state_budget) throw SizeError("greedy step exceeded the state budget");

    Node node;
    const bool travelling = r != dest_;
    std::array<Vertex, kMaxStepVehicles> vnext{};
    auto consider = [&](int ride) {
      if (!inst_.autonomous) {
        for (int a = 0; a < A_; ++a) {
          if (vnext[a] != veh[a] && pin_[a][t].from < 0 && ride != a) return;
        }
      }
      const Vertex rn = ride >= 0 ? vnext[ride] : r;
      if (rn != dest_) {
        const auto d = inst_.network.distance(rn, dest_);
        if (!d || *d > T_ - t - 1) return;
      }
      Cost step{0, 0, 0};
      int moved = 0;
      for (int a = 0; a < A_; ++a) moved += vnext[a] != veh[a] ? 1 : 0;
      step.main = (travelling ? weights_.time : 0) + weights_.fuel * moved;
      step.aux1 = travelling ? 1 : 0;
      step.aux2 = moved;
      const Cost rest = solve(t + 1, rn, vnext);
      if (!rest.feasible()) return;
      const Cost total = step + rest;
      if (total < node.cost) {
        node.cost = total;
        std::uint64_t c = static_cast<std::uint64_t>(ride + 1) << 56;
        for (int a = 0; a < A_; ++a) c |= static_cast<std::uint64_t>(vnext[a]) << (8 * a);
        node.choice = c;
      }
    };
    auto vehicles_rec = [&](auto&& self, int a) -> void {
      if (a == A_) {
        consider(-1);
        if (!travelling) return;
        for (int b = 0; b < A_; ++b) {
          if (veh[b] != r || vnext[b] == veh[b]) continue;
          if (load_[b][t] + 1 > inst_.capacity) continue;
          consider(b);
        }
        return;
      }
      const Edge pin = pin_[a][t];
      if (pin.from >= 0) {
        if (pin.from != veh[a] || !reach_[a][t + 1][pin.to]) return;
        vnext[a] = pin.to;
        self(self, a + 1);
        return;
      }
      const Vertex here = veh[a];
      if (reach_[a][t + 1][here]) {
        vnext[a] = here;
        self(self, a + 1);
      }
      for (Vertex v : inst_.network.successors(here)) {
        if (!reach_[a][t + 1][v]) continue;
        vnext[a] = v;
        self(self, a + 1);
      }
    };
    vehicles_rec(vehicles_rec, 0);
    memo_[key] = node;
    return node.cost;
  }

  const Instance& inst_;
  int rider_;
  std::vector<int> vehicles_;
  StepWeights weights_;
  SolverOptions options_;
  int T_ = 0;
  int A_ = 0;
  Vertex dest_ = 0;
  Vertex start_rider_ = 0;
  std::array<Vertex, kMaxStepVehicles> start_vehicle_{};
  std::vector<std::vector<Edge>> pin_;
  std::vector<std::vector<int>> load_;
  std::vector<std::vector<std::vector<bool>>> reach_;
  std::unordered_map<std::uint64_t, Node> memo_;
};

struct StepOutcome {
  GreedyPrefix prefix;
  Cost cost;
};

std::optional<StepOutcome> extend(const Instance& instance, const GreedyPrefix& prefix, int rider,
                                  Restriction restriction, StepWeights weights, const SolverOptions& options) {
  if (rider < 0 || static_cast<std::size_t>(rider) >= instance.num_riders()) throw ContractError("unknown rider");
  if (prefix.allocated[rider]) throw ContractError("rider already allocated");
  const int K = static_cast<int>(instance.num_vehicles());
  std::vector<std::vector<int>> groups;
  if (restriction == Restriction::kAllowSwitching) {
    std::vector<int> all(static_cast<std::size_t>(K));
    std::iota(all.begin(), all.end(), 0);
    groups.push_back(std::move(all));
  } else {
    for (int k = 0; k < K; ++k) groups.push_back({k});
  }
  const int total_travel = prefix.vehicle_travel();
  std::optional<StepOutcome> best;
  for (const auto& group : groups) {
    StepSearch search(instance, prefix, rider, group, weights, options);
    auto result = search.run();
    if (!result) continue;
    int others = total_travel;
    for (int k : group) others -= travel(prefix.vehicle_lines[k]);
    Cost cost = result->cost;
    cost.main += weights.fuel * others;
    cost.aux2 += others;
    if (best && !(cost < best->cost)) continue;
    GreedyPrefix next = prefix;
    next.order.push_back(rider);
    next.allocated[rider] = true;
    next.taxi[rider] = false;
    next.rider_lines[rider] = result->rider_line;
    next.rides[rider] = result->rides;
    for (std::size_t a = 0; a < group.size(); ++a) next.vehicle_lines[group[a]] = result->vehicle_lines[a];
    best = StepOutcome{std::move(next), cost};
  }
  return best;
}

}  // namespace

OptimalSolution solve_optimal(const Instance& instance, const TypeProfile& profile, Objective objective,
                              Restriction restriction, const std::vector<int>& riders, const SolverOptions& options) {
  if (profile.size() != instance.num_riders()) throw ShapeError("type profile length differs from rider count");
  auto subset = riders;
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  for (int j : subset) {
    if (j < 0 || static_cast<std::size_t>(j) >= instance.num_riders()) throw ContractError("rider subset out of range");
  }
  JointSearch search(instance, profile, objective, restriction, subset, options);
  return search.run();
}

OptimalSolution solve_optimal(const Instance& instance, const TypeProfile& profile, Objective objective,
                              Restriction restriction, const SolverOptions& options) {
  std::vector<int> all(instance.num_riders());
  std::iota(all.begin(), all.end(), 0);
  return solve_optimal(instance, profile, objective, restriction, all, options);
}

int GreedyPrefix::arrival(const Instance& instance, std::size_t rider) const {
  const auto& line = rider_lines.at(rider);
  if (line.empty() || taxi[rider]) return instance.shortest_time(rider);
  const Vertex d = instance.riders[rider].destination;
  return static_cast<int>(std::find(line.begin(), line.end(), d) - line.begin());
}

int GreedyPrefix::vehicle_travel() const {
  int n = 0;
  for (const auto& line : vehicle_lines) n += travel(line);
  return n;
}

GreedyPrefix empty_prefix(const Instance& instance) {
  GreedyPrefix p;
  const auto N = instance.num_riders();
  p.allocated.assign(N, false);
  p.taxi.assign(N, false);
  p.rider_lines.assign(N, Timeline{});
  p.rides.assign(N, std::vector<int>(static_cast<std::size_t>(instance.horizon), -1));
  for (const auto& v : instance.vehicles) {
    p.vehicle_lines.push_back(Timeline(static_cast<std::size_t>(instance.horizon) + 1, v.location));
  }
  return p;
}

GreedyPrefix with_taxi(const Instance& instance, GreedyPrefix prefix, int rider) {
  (void)instance;
  prefix.order.push_back(rider);
  prefix.allocated[rider] = true;
  prefix.taxi[rider] = true;
  return prefix;
}

Allocation to_allocation(const Instance& instance, const GreedyPrefix& prefix) {
  Allocation alloc = all_taxi_allocation(instance);
  for (std::size_t i = 0; i < instance.num_riders(); ++i) {
    if (!prefix.allocated[i] || prefix.taxi[i]) continue;
    alloc.rider_routes[i] = from_timeline(prefix.rider_lines[i]);
    for (int t = 0; t < instance.horizon; ++t) {
      const int k = prefix.rides[i][t];
      if (k >= 0) alloc.assignment.set(t, i, static_cast<std::size_t>(k));
    }
  }
  for (std::size_t k = 0; k < instance.num_vehicles(); ++k) {
    alloc.vehicle_routes[k] = from_timeline(prefix.vehicle_lines[k]);
  }
  return alloc;
}

GreedyPrefix solve_greedy_step(const Instance& instance, const GreedyPrefix& prefix, int rider,
                               Restriction restriction, const SolverOptions& options) {
  auto out = extend(instance, prefix, rider, restriction, StepWeights{1, 0, 1}, options);
  if (!out) {
    throw StepInfeasibleError(rider, "rider " + std::to_string(rider + 1) + " has no shared route within T");
  }
  return std::move(out->prefix);
}

Extension best_extension(const Instance& instance, const GreedyPrefix& prefix, int rider, const Rational& gamma,
                         Restriction restriction, const SolverOptions& options) {
  const std::int64_t scale = std::lcm(gamma.denominator(), instance.beta.denominator());
  const StepWeights weights{scaled(gamma, scale), scaled(instance.beta, scale), scale};
  auto out = extend(instance, prefix, rider, restriction, weights, options);
  if (!out) {
    throw StepInfeasibleError(rider, "rider " + std::to_string(rider + 1) + " has no shared route within T");
  }
  Extension ext;
  const int before = prefix.vehicle_travel();
  ext.rider_cost = gamma * Rational(out->prefix.arrival(instance, static_cast<std::size_t>(rider)));
  ext.added_fuel = instance.beta * Rational(out->prefix.vehicle_travel() - before);
  ext.prefix = std::move(out->prefix);
  return ext;
}

Instance reduce_tsp(const RoadNetwork& tsp_network, Vertex depot) {
  if (!tsp_network.contains(depot)) throw ContractError("depot outside the network");
  if (!tsp_network.strongly_connected()) throw ContractError("TSP reduction needs a strongly connected network");
  Instance inst;
  inst.network = tsp_network;
  const int n = static_cast<int>(tsp_network.size());
  const int edges = static_cast<int>(tsp_network.edges().size());
  for (int v = 0; v < n; ++v) inst.riders.push_back(RiderSpec{v + 1, v, depot, Rational(0)});
  inst.vehicles.push_back(VehicleSpec{1, depot});
  inst.capacity = n;
  inst.alpha = Rational(edges + 1);
  inst.beta = Rational(1);
  inst.gamma_max = Rational(0);
  inst.horizon = std::max(edges, 1);
  inst.autonomous = true;
  return inst;
}

}  // namespace rsmech
