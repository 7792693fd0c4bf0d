#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rsmech/payments.hpp"

namespace rsmech {

enum class MechanismKind { kVcg, kBvcg, kHungarian, kNaiveGreedy, kGarsN, kGarsNir, kSgarsNir };

std::string to_string(MechanismKind kind);
/// Accepts the CLI names: vcg, bvcg, hungarian, naive-greedy, gars-n, gars-nir, sgars-nir.
std::optional<MechanismKind> parse_mechanism(const std::string& name);
std::vector<MechanismKind> all_mechanisms();

struct MechanismOutcome {
  std::string mechanism;
  Allocation allocation;
  PaymentVector payments;
  PaymentVector base;
  std::vector<JumpPaymentTrace> traces;  // per rider, empty for non-greedy mechanisms
  std::vector<int> excluded;             // riders sent to a taxi by the IR filter
  std::vector<int> step_infeasible;      // riders sent to a taxi because no shared route fit in T
  std::vector<int> order;                // allocation order of greedy mechanisms
  std::optional<PaymentParams> params;
  CostReport costs;                      // under the reported profile
};

/// Memo shared by every run on one instance: greedy folds per restriction
/// and exact solves keyed by rider subset and the reports of that subset.
class MechanismCache {
 public:
  explicit MechanismCache(const Instance& instance, SolverOptions options = {});

  GreedyCache& greedy(Restriction restriction);
  const OptimalSolution& optimal(const TypeProfile& profile, Objective objective, const std::vector<int>& riders);
  const Instance& instance() const { return *instance_; }
  const SolverOptions& options() const { return options_; }

 private:
  const Instance* instance_;
  SolverOptions options_;
  std::unique_ptr<GreedyCache> switching_;
  std::unique_ptr<GreedyCache> single_;
  std::map<std::pair<int, std::vector<Rational>>, std::map<std::vector<int>, OptimalSolution>> exact_;
};

struct GarsOptions {
  Restriction restriction = Restriction::kAllowSwitching;
  Rational safety_coefficient{1};
  /// Apply the IR filter once instead of until no rider is excluded.
  bool single_pass = false;
  /// Profile that seeds the c_Fub sweep and orders the IR filter; the reports when unset.
  std::optional<TypeProfile> param_profile;
};

/// Greedy allocation over the sorted survivors and the position-sweep payments.
MechanismOutcome gars_n(const Instance& instance, const TypeProfile& profile, const PaymentParams& params,
                        Restriction restriction, MechanismCache& cache);
/// gars_n with parameters computed for all riders.
MechanismOutcome gars_n(const Instance& instance, const TypeProfile& profile, const GarsOptions& options,
                        MechanismCache& cache);

MechanismOutcome gars_nir(const Instance& instance, const TypeProfile& profile, const GarsOptions& options,
                          MechanismCache& cache);
MechanismOutcome sgars_nir(const Instance& instance, const TypeProfile& profile, GarsOptions options,
                           MechanismCache& cache);

MechanismOutcome vcg(const Instance& instance, const TypeProfile& profile, MechanismCache& cache);
/// Throws ContractError for non-autonomous instances.
MechanismOutcome bvcg(const Instance& instance, const TypeProfile& profile, MechanismCache& cache);

struct MatchingResult {
  /// Per rider: vehicle index, or -1 for the rider's own taxi.
  std::vector<int> match;
  Rational cost{0};
};

/// Minimum-cost assignment of riders to vehicles or their own taxi. Each
/// vehicle serves at most one rider.
MatchingResult hungarian_matching(const Instance& instance, const TypeProfile& profile,
                                  const std::vector<int>& riders);
/// Cost of rider i served alone by vehicle k, if the trip fits in T.
std::optional<Rational> solo_trip_cost(const Instance& instance, const Rational& gamma, int rider, int vehicle);

MechanismOutcome hungarian_mechanism(const Instance& instance, const TypeProfile& profile);

struct NaiveGreedyResult {
  Allocation allocation;
  std::vector<int> order;
  std::vector<Rational> marginals;  // marginal cost of each pick, in order
  std::vector<int> taxi;            // riders no vehicle could serve
};

NaiveGreedyResult naive_greedy(const Instance& instance, const TypeProfile& profile,
                               Restriction restriction = Restriction::kAllowSwitching,
                               const SolverOptions& options = {});

struct RunOptions {
  GarsOptions gars;
};

/// Uniform entry point. naive-greedy returns zero payments.
MechanismOutcome run_mechanism(MechanismKind kind, const Instance& instance, const TypeProfile& profile,
                               MechanismCache& cache, const RunOptions& options = {});

}  // namespace rsmech
