// rsmech command-line front end.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rsmech/errors.hpp"
#include "rsmech/experiments.hpp"
#include "rsmech/fixtures.hpp"
#include "rsmech/io.hpp"
#include "rsmech/properties.hpp"

using namespace rsmech;

namespace {

// Writes to `path`, or stdout when it is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractError("cannot write " + path);
  out << text;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

ExperimentConfig load_config(const std::string& path) {
  const std::filesystem::path p(path);
  return config_from_json(read_json_file(p), p.parent_path());
}

TypeProfile parse_profile(const Instance& instance, const std::string& text) {
  if (text.empty()) return instance.true_profile();
  TypeProfile profile;
  for (const auto& item : split(text)) profile.push_back(rational_from_json(Json(item)));
  validate_profile(instance, profile);
  return profile;
}

Restriction parse_restriction(const std::string& name) {
  if (name == "switching") return Restriction::kAllowSwitching;
  if (name == "single") return Restriction::kSingleVehicle;
  throw ContractError("restriction must be 'switching' or 'single'");
}

MechanismKind mechanism_named(const std::string& name) {
  if (auto kind = parse_mechanism(name)) return *kind;
  throw ContractError("unknown mechanism '" + name + "'");
}

struct GenArgs {
  std::string config;
  std::uint64_t seed = 1;
  std::string out;
};

struct RunArgs {
  std::string instance;
  std::string mechanism = "gars-nir";
  std::string reports;
  std::string restriction = "switching";
  std::string safety = "1";
  bool single_pass = false;
  std::string out;
};

struct SweepArgs {
  std::string config;
  std::optional<int> seeds;
  std::optional<std::uint64_t> base_seed;
  std::string out;
  std::string summary;
  bool timing = false;
};

struct CheckArgs {
  std::string instance;
  std::string properties = "dsic,ir,bb,monotonicity";
  std::string mechanisms = "gars-nir";
  std::string reports;
  std::string out;
};

struct FixtureArgs {
  std::string name;
  std::string out;
  std::string out_dir;
};

void cmd_gen(const GenArgs& a) {
  const auto config = load_config(a.config);
  emit(a.out, dump(instance_to_json(experiment_instance(config, a.seed))));
}

void cmd_run(const RunArgs& a) {
  const auto instance = instance_from_json(read_json_file(a.instance));
  const auto profile = parse_profile(instance, a.reports);
  RunOptions options;
  options.gars.restriction = parse_restriction(a.restriction);
  options.gars.safety_coefficient = rational_from_json(Json(a.safety));
  options.gars.single_pass = a.single_pass;
  MechanismCache cache(instance);
  const auto outcome = run_mechanism(mechanism_named(a.mechanism), instance, profile, cache, options);
  emit(a.out, dump(outcome_to_json(instance, outcome, profile)));
}

void cmd_sweep(const SweepArgs& a) {
  auto config = load_config(a.config);
  if (a.seeds) config.seeds = *a.seeds;
  if (a.base_seed) config.base_seed = *a.base_seed;
  validate_config(config);
  ExperimentRunOptions options;
  options.timing = a.timing;
  const auto table = run_experiment(config, options);
  std::ostringstream rows;
  write_rows_csv(rows, table.rows);
  emit(a.out, rows.str());
  if (!a.summary.empty()) {
    std::ostringstream summary;
    write_summary_csv(summary, table.summary);
    emit(a.summary, summary.str());
  }
}

void cmd_check(const CheckArgs& a) {
  const auto instance = instance_from_json(read_json_file(a.instance));
  const auto truth = parse_profile(instance, a.reports);
  const auto properties = split(a.properties);
  for (const auto& p : properties) {
    if (p != "dsic" && p != "ir" && p != "bb" && p != "monotonicity") {
      throw ContractError("unknown property '" + p + "'");
    }
  }
  std::string lines;
  for (const auto& name : split(a.mechanisms)) {
    const auto kind = mechanism_named(name);
    MechanismCache cache(instance);
    const auto mechanism = bind_mechanism(kind, instance, cache, truth);
    const auto outcome = mechanism(truth);
    for (const auto& p : properties) {
      PropertyReport report;
      if (p == "dsic") report = check_dsic(mechanism, instance, truth);
      if (p == "ir") report = check_ir(outcome, instance, truth);
      if (p == "bb") report = check_bb(outcome, instance);
      if (p == "monotonicity") report = check_monotonicity(mechanism, instance, truth);
      Json line{{"mechanism", name}};
      line.update(report_to_json(report));
      lines += line.dump() + "\n";
    }
  }
  emit(a.out, lines);
}

void cmd_fixtures(const FixtureArgs& a) {
  std::vector<std::string> names = a.name.empty() ? fixture_names() : std::vector<std::string>{a.name};
  if (!a.out_dir.empty()) {
    std::filesystem::create_directories(a.out_dir);
    for (const auto& n : names) {
      emit((std::filesystem::path(a.out_dir) / (n + ".json")).string(), dump(instance_to_json(named_fixture(n))));
    }
    return;
  }
  Json all = Json::object();
  for (const auto& n : names) all[n] = instance_to_json(named_fixture(n));
  emit(a.out, dump(all));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ridesharing mechanisms: allocation, payments and property checks"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate one instance from a config");
  g->add_option("--config", gen.config, "Experiment config JSON")->required();
  g->add_option("--seed", gen.seed, "Instance seed");
  g->add_option("--out", gen.out, "Output file (stdout by default)");

  RunArgs run;
  auto* r = app.add_subcommand("run", "Run one mechanism on an instance");
  r->add_option("--instance", run.instance, "Instance JSON")->required();
  r->add_option("--mechanism", run.mechanism,
                "vcg, bvcg, hungarian, naive-greedy, gars-n, gars-nir or sgars-nir");
  r->add_option("--reports", run.reports, "Comma-separated reported types (true types by default)");
  r->add_option("--restriction", run.restriction, "switching or single");
  r->add_option("--safety-coefficient", run.safety, "Multiplier on the payment parameter");
  r->add_flag("--single-pass", run.single_pass, "Apply the IR filter once");
  r->add_option("--out", run.out, "Output file (stdout by default)");

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Run every configured mechanism over a range of seeds");
  s->add_option("--config", sweep.config, "Experiment config JSON")->required();
  s->add_option("--seeds", sweep.seeds, "Number of seeds (overrides the config)");
  s->add_option("--base-seed", sweep.base_seed, "First seed (overrides the config)");
  s->add_option("--out", sweep.out, "Per-run CSV (stdout by default)");
  s->add_option("--summary", sweep.summary, "Summary CSV with means and 95% half-widths");
  s->add_flag("--timing", sweep.timing, "Record wall-clock runtime per run");

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Property checks, one JSON line per report");
  c->add_option("--instance", check.instance, "Instance JSON")->required();
  c->add_option("--properties", check.properties, "Subset of dsic,ir,bb,monotonicity");
  c->add_option("--mechanism,--mechanisms", check.mechanisms, "Comma-separated mechanisms");
  c->add_option("--reports", check.reports, "Comma-separated true types (instance types by default)");
  c->add_option("--out", check.out, "Output file (stdout by default)");

  FixtureArgs fixtures;
  auto* f = app.add_subcommand("fixtures", "Emit the built-in fixtures as instance JSON");
  f->add_option("--name", fixtures.name, "One fixture only");
  f->add_option("--out", fixtures.out, "Output file (stdout by default)");
  f->add_option("--out-dir", fixtures.out_dir, "Write one file per fixture");

  CLI11_PARSE(app, argc, argv);
  try {
    if (g->parsed()) cmd_gen(gen);
    if (r->parsed()) cmd_run(run);
    if (s->parsed()) cmd_sweep(sweep);
    if (c->parsed()) cmd_check(check);
    if (f->parsed()) cmd_fixtures(fixtures);
  } catch (const rsmech::Error& e) {
    std::cerr << "rsmech: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
