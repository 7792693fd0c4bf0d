#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rsmech/mechanisms.hpp"

namespace rsmech {

/// Zones are network vertices; counts[o][d] trips from zone o to zone d.
struct ZoneDemand {
  std::vector<std::string> zones;
  std::vector<std::vector<std::int64_t>> counts;
};

/// Reads `origin_zone,destination_zone,count` rows. Throws ContractError on bad input.
ZoneDemand read_zone_csv(std::istream& in);

enum class DemandSource { kSynthetic, kZones };

struct ExperimentConfig {
  int riders = 3;
  int vehicles = 2;
  int horizon = 4;
  int vertices = 4;
  int capacity = 2;
  int max_degree = 4;
  bool symmetric = true;
  bool autonomous = true;
  Rational alpha{5};
  Rational beta{1};
  Rational gamma_max{0};  // required, no default claimed
  std::vector<MechanismKind> mechanisms{MechanismKind::kVcg, MechanismKind::kBvcg, MechanismKind::kHungarian,
                                        MechanismKind::kGarsNir};
  Restriction restriction = Restriction::kAllowSwitching;
  Rational safety_coefficient{1};
  int seeds = 32;
  std::uint64_t base_seed = 1;
  std::size_t state_budget = 4'000'000;
  DemandSource demand = DemandSource::kSynthetic;
  std::optional<ZoneDemand> zones;
};

/// Throws ContractError when a field is out of range.
void validate_config(const ExperimentConfig& config);

/// Random network, uniform endpoints and vehicle locations, gamma_i = gamma_max * i / N.
Instance gen_instance(const ExperimentConfig& config, std::uint64_t seed);

/// Riders drawn from the OD matrix at zone centres, vehicles at uniform zones.
Instance zone_instance(const ZoneDemand& demand, const ExperimentConfig& config, std::uint64_t seed);

/// Instance for one seed of a sweep, from whichever demand source the config names.
Instance experiment_instance(const ExperimentConfig& config, std::uint64_t seed);

enum class BaselineKind { kOptimal, kTaxi };

struct Baseline {
  BaselineKind kind = BaselineKind::kOptimal;
  Rational social_cost{0};
};

struct MetricsRow {
  std::uint64_t seed = 0;
  std::string mechanism;
  std::optional<double> social_cost_ratio;  // against the optimum, absent when it is unavailable
  std::optional<double> taxi_cost_ratio;    // against everyone taking a taxi
  std::vector<std::optional<double>> ir_cost;  // per rider, absent when c_i^0 = 0
  std::optional<double> max_ir_cost;
  std::optional<double> bb_coverage;        // absent when c_F = 0
  std::optional<double> share_rate;         // absent when nobody travels
  std::optional<double> riders_per_vehicle;  // absent when no occupied vehicle moves
  std::optional<double> runtime_ms;
  std::string error;
};

MetricsRow metrics(const MechanismOutcome& outcome, const Instance& instance, const TypeProfile& truth,
                   const std::optional<Baseline>& optimal);

struct MetricSummary {
  std::string mechanism;
  std::string metric;
  std::size_t count = 0;
  std::optional<double> mean;
  std::optional<double> half_width;  // 95% normal approximation, absent below two samples
};

struct ExperimentTable {
  std::vector<MetricsRow> rows;
  std::vector<MetricSummary> summary;
};

struct ExperimentRunOptions {
  bool timing = false;  // fill runtime_ms; off keeps output reproducible
};

ExperimentTable run_experiment(const ExperimentConfig& config, const ExperimentRunOptions& options = {});
std::vector<MetricSummary> summarize(const std::vector<MetricsRow>& rows, const std::vector<MechanismKind>& order);

void write_rows_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<MetricSummary>& summary);

/// Mean of a metric over the rows of one mechanism.
std::optional<double> mean_metric(const ExperimentTable& table, const std::string& mechanism, const std::string& metric);

}  // namespace rsmech
