#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rsmech/greedy.hpp"

namespace rsmech {

struct PaymentParams {
  Rational c_fub{0};
  std::vector<int> t0;        // T_i^0 per rider
  std::vector<int> tmin_hat;  // normalized minimal travel time per rider
  Rational safety_coefficient{1};
  /// Profile whose order seeded the c_Fub sweep.
  TypeProfile profile;
  /// Riders taking part; the others get no base payment.
  std::vector<int> riders;
  /// Greedy runs in the sweep that routed somebody to a taxi.
  int runs_with_taxi = 0;
  /// Set when the joint delay solve failed and per-rider values were used.
  bool tmin_fallback = false;
};

struct JumpPaymentTrace {
  std::vector<Rational> jumps;  // z_j, descending
  std::vector<int> increments;  // change of the normalized delay at z_j
  Rational delta_x{0};
};

/// Maximum fuel of greedy allocations over every two-rider reinsertion of
/// the sorted order, times the coefficient.
Rational payment_param(GreedyCache& cache, const TypeProfile& profile, const std::vector<int>& riders,
                       const Rational& safety_coefficient = Rational(1), int* runs_with_taxi = nullptr);

/// Splits c_Fub proportionally to T0 - Tmin_hat shifted to a zero minimum.
std::vector<Rational> base_payment(const std::vector<int>& t0, const std::vector<int>& tmin_hat,
                                   const Rational& c_fub);

/// Everything the base payment needs for the rider subset.
PaymentParams compute_payment_params(GreedyCache& cache, const TypeProfile& profile, const std::vector<int>& riders,
                                     const Rational& safety_coefficient = Rational(1),
                                     const SolverOptions& options = {});

/// x^0 over all riders; riders outside params.riders get 0.
PaymentVector base_payments(const Instance& instance, const PaymentParams& params);

/// Allocation as a function of the whole reported profile.
using AllocationRule = std::function<Allocation(const TypeProfile&)>;

struct MyersonResult {
  Rational increment{0};
  JumpPaymentTrace trace;
  bool monotone = true;
  /// First pair of reports where the delay rose with the report.
  std::optional<std::pair<Rational, Rational>> violation;
};

/// Evaluates the payment integral of a rider by probing the rule just
/// below and above every other rider's report not above its own. With
/// grid_resolution > 0 a uniform grid over [0, gamma_i] is probed too and
/// any change of delay between probe points is reported as a violation.
MyersonResult myerson_sweep_oracle(const AllocationRule& rule, const Instance& instance, const TypeProfile& profile,
                                   int rider, int grid_resolution = 0);

/// T_i - T_i^0 of an allocation; 0 for taxi riders.
int normalized_delay(const Instance& instance, const Allocation& alloc, int rider);

}  // namespace rsmech
