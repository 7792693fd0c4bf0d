#include "rsmech/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rsmech/errors.hpp"

namespace rsmech {

namespace {

Rational parse_decimal(const std::string& text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) negative = text[pos++] == '-';
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool digits = false;
  bool point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.' && !point) {
      point = true;
      continue;
    }
    if (c < '0' || c > '9') throw ContractError("malformed number '" + text + "'");
    if (num > (INT64_MAX - 9) / 10 || (point && den > INT64_MAX / 10)) throw ContractError("number too large '" + text + "'");
    num = num * 10 + (c - '0');
    if (point) den *= 10;
    digits = true;
  }
  if (!digits) throw ContractError("malformed number '" + text + "'");
  return Rational(negative ? -num : num, den);
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_decimal(text);
  const Rational p = parse_decimal(text.substr(0, slash));
  const Rational q = parse_decimal(text.substr(slash + 1));
  if (q == Rational(0)) throw ContractError("zero denominator in '" + text + "'");
  return p / q;
}

const Json& field(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw ContractError(std::string("missing field '") + key + "'");
  return obj.at(key);
}

int int_field(const Json& obj, const char* key) {
  const auto& v = field(obj, key);
  if (!v.is_number_integer()) throw ContractError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

bool bool_field(const Json& obj, const char* key) {
  const auto& v = field(obj, key);
  if (!v.is_boolean()) throw ContractError(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

std::string string_of(const Json& v, const char* what) {
  if (!v.is_string()) throw ContractError(std::string(what) + " must be a string");
  return v.get<std::string>();
}

Json ids(const Instance& instance, const std::vector<int>& riders) {
  Json out = Json::array();
  for (int i : riders) out.push_back(instance.riders.at(static_cast<std::size_t>(i)).id);
  return out;
}

Json route_to_json(const RoadNetwork& net, const Route& route) {
  Json path = Json::array();
  for (Vertex v : route.path) path.push_back(net.name(v));
  return Json{{"path", path}, {"times", route.times}};
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json profile_to_json(const TypeProfile& profile) {
  Json out = Json::array();
  for (const auto& g : profile) out.push_back(rational_to_json(g));
  return out;
}

}  // namespace

Rational rational_from_json(const Json& value) {
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  if (value.is_string()) return parse_rational(value.get<std::string>());
  throw ContractError("rational values are integers or \"p/q\" strings");
}

Json rational_to_json(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

Json instance_to_json(const Instance& instance) {
  const auto& net = instance.network;
  Json edges = Json::array();
  for (const auto& e : net.edges()) edges.push_back(Json::array({net.name(e.from), net.name(e.to)}));
  Json riders = Json::array();
  for (const auto& r : instance.riders) {
    riders.push_back({{"id", r.id},
                      {"origin", net.name(r.origin)},
                      {"destination", net.name(r.destination)},
                      {"gamma", rational_to_json(r.gamma)}});
  }
  Json vehicles = Json::array();
  for (const auto& v : instance.vehicles) vehicles.push_back({{"id", v.id}, {"location", net.name(v.location)}});
  return Json{{"network", {{"vertices", net.names()}, {"edges", edges}}},
              {"horizon", instance.horizon},
              {"capacity", instance.capacity},
              {"alpha", rational_to_json(instance.alpha)},
              {"beta", rational_to_json(instance.beta)},
              {"gamma_max", rational_to_json(instance.gamma_max)},
              {"autonomous", instance.autonomous},
              {"riders", riders},
              {"vehicles", vehicles}};
}

Instance instance_from_json(const Json& json) {
  const auto& network = field(json, "network");
  std::vector<std::string> names;
  for (const auto& v : field(network, "vertices")) names.push_back(string_of(v, "vertex name"));
  // Edges need vertex lookups before the network exists.
  auto index_of = [&](const Json& v) -> Vertex {
    const auto name = string_of(v, "edge endpoint");
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return static_cast<Vertex>(i);
    }
    throw ContractError("edge references unknown vertex '" + name + "'");
  };
  std::vector<Edge> edges;
  for (const auto& e : field(network, "edges")) {
    if (!e.is_array() || e.size() != 2) throw ContractError("edges are [from, to] pairs");
    edges.push_back({index_of(e[0]), index_of(e[1])});
  }
  Instance instance;
  instance.network = RoadNetwork(names, edges);
  instance.horizon = int_field(json, "horizon");
  instance.capacity = int_field(json, "capacity");
  instance.alpha = rational_from_json(field(json, "alpha"));
  instance.beta = rational_from_json(field(json, "beta"));
  instance.gamma_max = rational_from_json(field(json, "gamma_max"));
  instance.autonomous = json.contains("autonomous") ? bool_field(json, "autonomous") : true;
  int next_id = 1;
  for (const auto& r : field(json, "riders")) {
    RiderSpec spec;
    spec.id = r.contains("id") ? int_field(r, "id") : next_id;
    next_id = spec.id + 1;
    spec.origin = instance.network.at(string_of(field(r, "origin"), "origin"));
    spec.destination = instance.network.at(string_of(field(r, "destination"), "destination"));
    spec.gamma = rational_from_json(field(r, "gamma"));
    instance.riders.push_back(spec);
  }
  next_id = 1;
  for (const auto& v : field(json, "vehicles")) {
    VehicleSpec spec;
    spec.id = v.contains("id") ? int_field(v, "id") : next_id;
    next_id = spec.id + 1;
    spec.location = instance.network.at(string_of(field(v, "location"), "location"));
    instance.vehicles.push_back(spec);
  }
  validate_instance(instance);
  return instance;
}

Json allocation_to_json(const Instance& instance, const Allocation& allocation) {
  const int T = instance.horizon;
  Json riders = Json::object();
  for (std::size_t i = 0; i < instance.num_riders(); ++i) {
    riders[std::to_string(instance.riders[i].id)] =
        route_to_json(instance.network, canonicalize(allocation.rider_routes[i], T));
  }
  Json vehicles = Json::object();
  for (std::size_t k = 0; k < instance.num_vehicles(); ++k) {
    vehicles[std::to_string(instance.vehicles[k].id)] =
        route_to_json(instance.network, canonicalize(allocation.vehicle_routes[k], T));
  }
  Json assignment = Json::array();
  for (int t = 0; t <= T; ++t) {
    for (std::size_t i = 0; i < instance.num_riders(); ++i) {
      for (std::size_t k = 0; k < instance.num_vehicles(); ++k) {
        if (allocation.assignment.get(t, i, k)) {
          assignment.push_back(Json::array({t, instance.riders[i].id, instance.vehicles[k].id}));
        }
      }
    }
  }
  return Json{{"rider_routes", riders}, {"vehicle_routes", vehicles}, {"assignment", assignment}};
}

Json metrics_to_json(const MetricsRow& row) {
  return Json{{"social_cost_ratio", optional_number(row.social_cost_ratio)},
              {"taxi_cost_ratio", optional_number(row.taxi_cost_ratio)},
              {"max_ir_cost", optional_number(row.max_ir_cost)},
              {"bb_coverage", optional_number(row.bb_coverage)},
              {"share_rate", optional_number(row.share_rate)},
              {"riders_per_vehicle", optional_number(row.riders_per_vehicle)}};
}

Json outcome_to_json(const Instance& instance, const MechanismOutcome& outcome, const TypeProfile& truth) {
  Json payments = Json::object();
  Json base = Json::object();
  for (std::size_t i = 0; i < instance.num_riders(); ++i) {
    const auto id = std::to_string(instance.riders[i].id);
    payments[id] = rational_to_json(outcome.payments.at(i));
    if (!outcome.base.empty()) base[id] = rational_to_json(outcome.base.at(i));
  }
  Json riders = Json::array();
  for (std::size_t i = 0; i < outcome.costs.riders.size(); ++i) {
    const auto& rc = outcome.costs.riders[i];
    riders.push_back({{"id", instance.riders[i].id},
                      {"mode", rc.mode == TravelMode::kTaxi ? "taxi" : "rideshare"},
                      {"arrival", rc.arrival},
                      {"shortest", rc.shortest},
                      {"cost", rational_to_json(rc.cost)}});
  }
  Json out{{"mechanism", outcome.mechanism},
           {"payments", payments},
           {"base", base},
           {"excluded", ids(instance, outcome.excluded)},
           {"step_infeasible", ids(instance, outcome.step_infeasible)},
           {"order", ids(instance, outcome.order)}};
  if (outcome.params) {
    out["c_fub"] = rational_to_json(outcome.params->c_fub);
    out["tmin_hat"] = outcome.params->tmin_hat;
  }
  if (!outcome.traces.empty()) {
    Json traces = Json::object();
    for (std::size_t i = 0; i < outcome.traces.size(); ++i) {
      const auto& tr = outcome.traces[i];
      Json jumps = Json::array();
      for (const auto& z : tr.jumps) jumps.push_back(rational_to_json(z));
      traces[std::to_string(instance.riders[i].id)] =
          Json{{"jumps", jumps}, {"increments", tr.increments}, {"delta_x", rational_to_json(tr.delta_x)}};
    }
    out["traces"] = traces;
  }
  out["costs"] = Json{{"social_cost", rational_to_json(outcome.costs.social_cost)},
                      {"fuel", rational_to_json(outcome.costs.fuel)},
                      {"imaginary_social_cost", rational_to_json(outcome.costs.imaginary_social_cost)},
                      {"riders", riders}};
  out["metrics"] = metrics_to_json(metrics(outcome, instance, truth, std::nullopt));
  out["allocation"] = allocation_to_json(instance, outcome.allocation);
  return out;
}

ExperimentConfig config_from_json(const Json& json, const std::filesystem::path& base_dir) {
  if (!json.is_object()) throw ContractError("config must be a JSON object");
  static const char* known[] = {"riders",   "vehicles",  "horizon",   "vertices",   "capacity",
                                "max_degree", "symmetric", "autonomous", "alpha",      "beta",
                                "gamma_max", "mechanisms", "restriction", "safety_coefficient",
                                "seeds",    "base_seed", "state_budget", "demand"};
  for (const auto& [key, value] : json.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw ContractError("unknown config field '" + key + "'");
    }
  }
  ExperimentConfig c;
  auto opt_int = [&](const char* key, int& target) {
    if (json.contains(key)) target = int_field(json, key);
  };
  opt_int("riders", c.riders);
  opt_int("vehicles", c.vehicles);
  opt_int("horizon", c.horizon);
  opt_int("vertices", c.vertices);
  opt_int("capacity", c.capacity);
  opt_int("max_degree", c.max_degree);
  opt_int("seeds", c.seeds);
  if (json.contains("symmetric")) c.symmetric = bool_field(json, "symmetric");
  if (json.contains("autonomous")) c.autonomous = bool_field(json, "autonomous");
  if (json.contains("alpha")) c.alpha = rational_from_json(json.at("alpha"));
  if (json.contains("beta")) c.beta = rational_from_json(json.at("beta"));
  c.gamma_max = rational_from_json(field(json, "gamma_max"));
  if (json.contains("safety_coefficient")) c.safety_coefficient = rational_from_json(json.at("safety_coefficient"));
  if (json.contains("base_seed")) {
    const auto& v = json.at("base_seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ContractError("base_seed must be a non-negative integer");
    }
    c.base_seed = v.get<std::uint64_t>();
  }
  if (json.contains("state_budget")) {
    const auto& v = json.at("state_budget");
    if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) throw ContractError("state_budget must be positive");
    c.state_budget = v.get<std::size_t>();
  }
  if (json.contains("mechanisms")) {
    c.mechanisms.clear();
    for (const auto& m : json.at("mechanisms")) {
      const auto name = string_of(m, "mechanism name");
      const auto kind = parse_mechanism(name);
      if (!kind) throw ContractError("unknown mechanism '" + name + "'");
      c.mechanisms.push_back(*kind);
    }
  }
  if (json.contains("restriction")) {
    const auto r = string_of(json.at("restriction"), "restriction");
    if (r == "switching") {
      c.restriction = Restriction::kAllowSwitching;
    } else if (r == "single") {
      c.restriction = Restriction::kSingleVehicle;
    } else {
      throw ContractError("restriction must be 'switching' or 'single'");
    }
  }
  if (json.contains("demand")) {
    const auto& d = json.at("demand");
    const auto source = string_of(field(d, "source"), "demand source");
    if (source == "synthetic") {
      c.demand = DemandSource::kSynthetic;
    } else if (source == "zones") {
      c.demand = DemandSource::kZones;
      std::filesystem::path file = string_of(field(d, "file"), "zone file");
      if (file.is_relative()) file = base_dir / file;
      std::ifstream in(file);
      if (!in) throw ContractError("cannot open zone file " + file.string());
      c.zones = read_zone_csv(in);
    } else {
      throw ContractError("demand source must be 'synthetic' or 'zones'");
    }
  }
  validate_config(c);
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json mechanisms = Json::array();
  for (auto m : c.mechanisms) mechanisms.push_back(to_string(m));
  return Json{{"riders", c.riders},
              {"vehicles", c.vehicles},
              {"horizon", c.horizon},
              {"vertices", c.vertices},
              {"capacity", c.capacity},
              {"max_degree", c.max_degree},
              {"symmetric", c.symmetric},
              {"autonomous", c.autonomous},
              {"alpha", rational_to_json(c.alpha)},
              {"beta", rational_to_json(c.beta)},
              {"gamma_max", rational_to_json(c.gamma_max)},
              {"mechanisms", mechanisms},
              {"restriction", c.restriction == Restriction::kAllowSwitching ? "switching" : "single"},
              {"safety_coefficient", rational_to_json(c.safety_coefficient)},
              {"seeds", c.seeds},
              {"base_seed", c.base_seed},
              {"state_budget", c.state_budget}};
}

Json report_to_json(const PropertyReport& report) {
  Json out{{"property", report.property},
           {"instance_digest", report.instance_digest},
           {"passed", report.passed},
           {"cases", report.cases}};
  if (report.witness) {
    const auto& w = *report.witness;
    Json reports = Json::array();
    for (const auto& p : w.reports) reports.push_back(profile_to_json(p));
    Json values = Json::array();
    for (const auto& v : w.values) values.push_back(rational_to_json(v));
    out["witness"] = Json{{"rider", w.rider < 0 ? -1 : w.rider + 1},
                          {"truth", profile_to_json(w.truth)},
                          {"reports", reports},
                          {"values", values},
                          {"detail", w.detail}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ContractError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

}  // namespace rsmech
