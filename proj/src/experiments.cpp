#include "rsmech/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "rsmech/errors.hpp"
#include "rsmech/rng.hpp"

namespace rsmech {

namespace {

constexpr int kMaxAttempts = 200;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

bool trips_fit(const Instance& inst) {
  for (const auto& r : inst.riders) {
    const auto d = inst.network.distance(r.origin, r.destination);
    if (!d || *d > inst.horizon) return false;
  }
  return true;
}

void fill_common(Instance& inst, const ExperimentConfig& config) {
  inst.horizon = config.horizon;
  inst.capacity = config.capacity;
  inst.alpha = config.alpha;
  inst.beta = config.beta;
  inst.gamma_max = config.gamma_max;
  inst.autonomous = config.autonomous;
}

Rational linear_type(const ExperimentConfig& config, int index) {
  return config.gamma_max * Rational(index + 1, config.riders);
}

std::string format_number(const std::optional<double>& v) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

std::optional<double> ratio(const Rational& num, const Rational& den) {
  if (den == Rational(0)) return std::nullopt;
  return to_double(num / den);
}

std::optional<double> metric_value(const MetricsRow& row, const std::string& metric) {
  if (metric == "social_cost_ratio") return row.social_cost_ratio;
  if (metric == "taxi_cost_ratio") return row.taxi_cost_ratio;
  if (metric == "max_ir_cost") return row.max_ir_cost;
  if (metric == "bb_coverage") return row.bb_coverage;
  if (metric == "share_rate") return row.share_rate;
  if (metric == "riders_per_vehicle") return row.riders_per_vehicle;
  if (metric == "runtime_ms") return row.runtime_ms;
  throw ContractError("unknown metric '" + metric + "'");
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{"social_cost_ratio", "taxi_cost_ratio", "max_ir_cost",
                                              "bb_coverage",       "share_rate",      "riders_per_vehicle"};
  return names;
}

}  // namespace

ZoneDemand read_zone_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "origin_zone,destination_zone,count") {
    throw ContractError("zone file must start with origin_zone,destination_zone,count");
  }
  std::vector<std::tuple<std::string, std::string, std::int64_t>> rows;
  std::vector<std::string> names;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::stringstream fields(line);
    std::string o, d, c;
    if (!std::getline(fields, o, ',') || !std::getline(fields, d, ',') || !std::getline(fields, c)) {
      throw ContractError("zone file line " + std::to_string(lineno) + ": expected three fields");
    }
    o = trim(o);
    d = trim(d);
    c = trim(c);
    std::int64_t count = 0;
    try {
      std::size_t used = 0;
      count = std::stoll(c, &used);
      if (used != c.size()) throw std::invalid_argument(c);
    } catch (const std::exception&) {
      throw ContractError("zone file line " + std::to_string(lineno) + ": bad count '" + c + "'");
    }
    if (count < 0) throw ContractError("zone file line " + std::to_string(lineno) + ": negative count");
    rows.emplace_back(o, d, count);
    names.push_back(o);
    names.push_back(d);
  }
  const bool numeric = std::all_of(names.begin(), names.end(), all_digits);
  std::sort(names.begin(), names.end(), [numeric](const std::string& a, const std::string& b) {
    if (numeric && a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  names.erase(std::unique(names.begin(), names.end()), names.end());
  ZoneDemand demand;
  demand.zones = names;
  demand.counts.assign(names.size(), std::vector<std::int64_t>(names.size(), 0));
  auto index = [&](const std::string& z) {
    return static_cast<std::size_t>(std::find(names.begin(), names.end(), z) - names.begin());
  };
  for (const auto& [o, d, c] : rows) demand.counts[index(o)][index(d)] += c;
  return demand;
}

void validate_config(const ExperimentConfig& config) {
  if (config.riders < 1) throw ContractError("config: riders must be at least 1");
  if (config.vehicles < 0) throw ContractError("config: vehicles must be non-negative");
  if (config.horizon < 1) throw ContractError("config: horizon must be at least 1");
  if (config.capacity < 1) throw ContractError("config: capacity must be at least 1");
  if (config.demand == DemandSource::kSynthetic && config.vertices < 2) {
    throw ContractError("config: vertices must be at least 2");
  }
  if (config.alpha < Rational(0) || config.beta < Rational(0)) throw ContractError("config: alpha and beta must be non-negative");
  if (config.gamma_max < Rational(0)) throw ContractError("config: gamma_max must be non-negative");
  if (config.safety_coefficient < Rational(1)) throw ContractError("config: safety_coefficient must be at least 1");
  if (config.seeds < 1) throw ContractError("config: seeds must be at least 1");
  if (config.demand == DemandSource::kZones && !config.zones) throw ContractError("config: zone demand missing");
}

Instance gen_instance(const ExperimentConfig& config, std::uint64_t seed) {
  validate_config(config);
  Rng rng(derive_seed(seed, 0x67656e));
  const int V = config.vertices;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Instance inst;
    fill_common(inst, config);
    inst.network = random_network(V, config.max_degree, rng.next(), RandomNetworkOptions{config.symmetric});
    for (int i = 0; i < config.riders; ++i) {
      const auto o = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(V)));
      auto d = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(V - 1)));
      if (d >= o) ++d;
      inst.riders.push_back(RiderSpec{i + 1, o, d, linear_type(config, i)});
    }
    for (int k = 0; k < config.vehicles; ++k) {
      inst.vehicles.push_back(VehicleSpec{k + 1, static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(V)))});
    }
    if (!trips_fit(inst)) continue;
    validate_instance(inst);
    return inst;
  }
  throw ConstructionError("no instance with every trip inside the horizon after " + std::to_string(kMaxAttempts) +
                          " attempts");
}

Instance zone_instance(const ZoneDemand& demand, const ExperimentConfig& config, std::uint64_t seed) {
  const auto Z = demand.zones.size();
  if (Z < 2) throw ContractError("zone demand needs at least two zones");
  if (demand.counts.size() != Z) throw ContractError("zone matrix size differs from the zone count");
  std::int64_t total = 0;
  for (const auto& row : demand.counts) {
    if (row.size() != Z) throw ContractError("zone matrix is not square");
    for (auto c : row) {
      if (c < 0) throw ContractError("zone matrix has a negative count");
      total += c;
    }
  }
  if (total == 0) throw ContractError("zone matrix has no trips");
  Rng rng(derive_seed(seed, 0x7a6f6e));
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Instance inst;
    fill_common(inst, config);
    const auto shape =
        random_network(static_cast<int>(Z), config.max_degree, rng.next(), RandomNetworkOptions{config.symmetric});
    inst.network = RoadNetwork(demand.zones, shape.edges());
    for (int i = 0; i < config.riders; ++i) {
      auto draw = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total)));
      std::size_t o = 0, d = 0;
      for (o = 0; o < Z; ++o) {
        bool found = false;
        for (d = 0; d < Z; ++d) {
          if (draw < demand.counts[o][d]) {
            found = true;
            break;
          }
          draw -= demand.counts[o][d];
        }
        if (found) break;
      }
      inst.riders.push_back(RiderSpec{i + 1, static_cast<Vertex>(o), static_cast<Vertex>(d), linear_type(config, i)});
    }
    for (int k = 0; k < config.vehicles; ++k) {
      inst.vehicles.push_back(VehicleSpec{k + 1, static_cast<Vertex>(rng.below(Z))});
    }
    if (!trips_fit(inst)) continue;
    validate_instance(inst);
    return inst;
  }
  throw ConstructionError("no zone instance with every trip inside the horizon");
}

Instance experiment_instance(const ExperimentConfig& config, std::uint64_t seed) {
  if (config.demand == DemandSource::kZones) {
    validate_config(config);
    return zone_instance(*config.zones, config, seed);
  }
  return gen_instance(config, seed);
}

MetricsRow metrics(const MechanismOutcome& outcome, const Instance& instance, const TypeProfile& truth,
                   const std::optional<Baseline>& optimal) {
  MetricsRow row;
  row.mechanism = outcome.mechanism;
  const auto costs = cost_report(instance, outcome.allocation, truth);
  if (optimal && optimal->kind == BaselineKind::kOptimal) row.social_cost_ratio = ratio(costs.social_cost, optimal->social_cost);
  Rational taxi(0);
  for (const auto& r : costs.riders) taxi += r.outside_cost;
  row.taxi_cost_ratio = ratio(costs.social_cost, taxi);
  for (std::size_t i = 0; i < instance.num_riders(); ++i) {
    const Rational u = -costs.riders[i].cost - outcome.payments[i];
    const auto ir = ratio(-u, costs.riders[i].outside_cost);
    row.ir_cost.push_back(ir);
    if (ir && (!row.max_ir_cost || *ir > *row.max_ir_cost)) row.max_ir_cost = ir;
  }
  Rational collected(0);
  for (const auto& x : outcome.payments) collected += x;
  row.bb_coverage = ratio(collected, costs.fuel);
  int vehicle_time = 0;
  for (int v : costs.vehicle_travel) vehicle_time += v;
  int rider_time = 0;
  for (const auto& r : costs.riders) rider_time += r.arrival;
  row.share_rate = ratio(Rational(vehicle_time), Rational(rider_time));
  std::int64_t occupied = 0;
  std::int64_t load = 0;
  for (std::size_t k = 0; k < instance.num_vehicles(); ++k) {
    const auto line = to_timeline(outcome.allocation.vehicle_routes[k], instance.horizon);
    for (int t = 0; t < instance.horizon; ++t) {
      if (line[t] == line[t + 1]) continue;
      const int l = outcome.allocation.assignment.load(t, k);
      if (l == 0) continue;
      ++occupied;
      load += l;
    }
  }
  // A taxi trip is a vehicle carrying one passenger.
  for (const auto& r : costs.riders) {
    if (r.mode != TravelMode::kTaxi) continue;
    occupied += r.shortest;
    load += r.shortest;
  }
  row.riders_per_vehicle = ratio(Rational(load), Rational(occupied));
  return row;
}

std::vector<MetricSummary> summarize(const std::vector<MetricsRow>& rows, const std::vector<MechanismKind>& order) {
  std::vector<MetricSummary> out;
  auto metrics_list = metric_names();
  metrics_list.push_back("runtime_ms");
  for (auto kind : order) {
    const auto name = to_string(kind);
    for (const auto& metric : metrics_list) {
      std::vector<double> values;
      for (const auto& row : rows) {
        if (row.mechanism != name || !row.error.empty()) continue;
        if (auto v = metric_value(row, metric)) values.push_back(*v);
      }
      MetricSummary s{name, metric, values.size(), std::nullopt, std::nullopt};
      if (!values.empty()) {
        double sum = 0;
        for (double v : values) sum += v;
        const double mean = sum / static_cast<double>(values.size());
        s.mean = mean;
        if (values.size() >= 2) {
          double sq = 0;
          for (double v : values) sq += (v - mean) * (v - mean);
          const double sd = std::sqrt(sq / static_cast<double>(values.size() - 1));
          s.half_width = 1.96 * sd / std::sqrt(static_cast<double>(values.size()));
        }
      }
      out.push_back(s);
    }
  }
  return out;
}

ExperimentTable run_experiment(const ExperimentConfig& config, const ExperimentRunOptions& options) {
  validate_config(config);
  ExperimentTable table;
  for (int s = 0; s < config.seeds; ++s) {
    const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(s);
    Instance inst;
    try {
      inst = experiment_instance(config, seed);
    } catch (const Error& e) {
      for (auto kind : config.mechanisms) {
        MetricsRow row;
        row.seed = seed;
        row.mechanism = to_string(kind);
        row.error = std::string("instance: ") + e.what();
        table.rows.push_back(row);
      }
      continue;
    }
    const auto truth = inst.true_profile();
    MechanismCache cache(inst, SolverOptions{config.state_budget});
    std::optional<Baseline> optimal;
    try {
      const auto& sol = cache.optimal(truth, Objective::kSocialCostF, [&] {
        std::vector<int> all(inst.num_riders());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
        return all;
      }());
      optimal = Baseline{BaselineKind::kOptimal, sol.value};
    } catch (const SizeError&) {
    }
    RunOptions run;
    run.gars.restriction = config.restriction;
    run.gars.safety_coefficient = config.safety_coefficient;
    for (auto kind : config.mechanisms) {
      MetricsRow row;
      const auto start = std::chrono::steady_clock::now();
      try {
        const auto outcome = run_mechanism(kind, inst, truth, cache, run);
        row = metrics(outcome, inst, truth, optimal);
      } catch (const Error& e) {
        row.mechanism = to_string(kind);
        row.error = e.what();
      }
      row.mechanism = to_string(kind);
      row.seed = seed;
      if (options.timing) {
        row.runtime_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      }
      table.rows.push_back(row);
    }
  }
  table.summary = summarize(table.rows, config.mechanisms);
  return table;
}

void write_rows_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << "seed,mechanism,social_cost_ratio,max_ir_cost,bb_coverage,share_rate,riders_per_vehicle,runtime_ms,"
         "taxi_cost_ratio,error\n";
  for (const auto& r : rows) {
    std::string error = r.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    out << r.seed << ',' << r.mechanism << ',' << format_number(r.social_cost_ratio) << ','
        << format_number(r.max_ir_cost) << ',' << format_number(r.bb_coverage) << ',' << format_number(r.share_rate)
        << ',' << format_number(r.riders_per_vehicle) << ',' << format_number(r.runtime_ms) << ','
        << format_number(r.taxi_cost_ratio) << ',' << error << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<MetricSummary>& summary) {
  out << "mechanism,metric,count,mean,ci95_half_width\n";
  for (const auto& s : summary) {
    out << s.mechanism << ',' << s.metric << ',' << s.count << ',' << format_number(s.mean) << ','
        << format_number(s.half_width) << '\n';
  }
}

std::optional<double> mean_metric(const ExperimentTable& table, const std::string& mechanism,
                                  const std::string& metric) {
  for (const auto& s : table.summary) {
    if (s.mechanism == mechanism && s.metric == metric) return s.mean;
  }
  return std::nullopt;
}

}  // namespace rsmech
