#include "doctest.h"

#include <algorithm>

#include "corpus.hpp"
#include "oracles.hpp"
#include "rsmech/errors.hpp"
#include "rsmech/fixtures.hpp"
#include "rsmech/properties.hpp"

using namespace rsmech;

namespace {

int distinct_vehicles(const Allocation& alloc, std::size_t rider) {
  return testing::vehicles_boarded(alloc, rider);
}

}  // namespace

TEST_CASE("deviation grid covers the boundary and the other reports") {
  const auto inst = figure2_instance(5);
  const auto grid = deviation_grid(inst, inst.true_profile(), 0);
  CHECK(grid.front() == Rational(0));
  CHECK(grid.back() == inst.gamma_max);
  CHECK(std::find(grid.begin(), grid.end(), Rational(1)) != grid.end());
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  const auto fine = refined_grid(grid, 10);
  CHECK(fine.size() == (grid.size() - 1) * 10 + 1);
  for (const auto& g : grid) CHECK(std::find(fine.begin(), fine.end(), g) != fine.end());
}

TEST_CASE("vcg loses money on the shared trip") {
  const auto inst = prop1_instance();
  MechanismCache cache(inst);
  const auto out = vcg(inst, inst.true_profile(), cache);
  const auto report = check_bb(out, inst);
  CHECK_FALSE(report.passed);
  REQUIRE(report.witness.has_value());
  CHECK(report.witness->values == std::vector<Rational>{Rational(0), out.costs.fuel});
}

TEST_CASE("budget balance holds for bvcg and the all-taxi outcome") {
  const auto inst = prop1_instance();
  MechanismCache cache(inst);
  CHECK(check_bb(bvcg(inst, inst.true_profile(), cache), inst).passed);
  MechanismOutcome taxi;
  taxi.allocation = all_taxi_allocation(inst);
  taxi.payments.assign(inst.num_riders(), Rational(0));
  taxi.costs = cost_report(inst, taxi.allocation, inst.true_profile());
  CHECK(check_bb(taxi, inst).passed);
}

TEST_CASE("naive greedy is not monotone and the witness replays") {
  const auto inst = prop3_instance();
  MechanismCache cache(inst);
  const auto fn = bind_mechanism(MechanismKind::kNaiveGreedy, inst, cache, inst.true_profile());
  const auto report = check_monotonicity(fn, inst, inst.true_profile());
  CHECK_FALSE(report.passed);
  REQUIRE(report.witness.has_value());
  const auto& w = *report.witness;
  REQUIRE(w.reports.size() == 2);
  REQUIRE(w.values.size() == 4);
  CHECK(w.values[0] < w.values[1]);
  const int ta = travel_time(inst, fn(w.reports[0]).allocation, w.rider);
  const int tb = travel_time(inst, fn(w.reports[1]).allocation, w.rider);
  CHECK(Rational(ta) == w.values[2]);
  CHECK(Rational(tb) == w.values[3]);
  CHECK(tb > ta);
}

TEST_CASE("gars-n is monotone where no rider is forced into a taxi") {
  for (const auto& inst : testing::no_taxi_corpus(60)) {
    MechanismCache cache(inst);
    const auto fn = bind_mechanism(MechanismKind::kGarsN, inst, cache, inst.true_profile());
    const auto report = check_monotonicity(fn, inst, inst.true_profile());
    CAPTURE(report.instance_digest);
    CHECK(report.passed);
  }
}

TEST_CASE("gars-nir satisfies all four properties on the corpus") {
  for (const auto& inst : testing::corpus(40, 2000)) {
    MechanismCache cache(inst);
    const auto truth = inst.true_profile();
    const auto fn = bind_mechanism(MechanismKind::kGarsNir, inst, cache, truth);
    const auto out = fn(truth);
    CAPTURE(instance_digest(inst));
    CHECK(check_dsic(fn, inst, truth).passed);
    CHECK(check_ir(out, inst, truth).passed);
    CHECK(check_bb(out, inst).passed);
    CHECK(check_monotonicity(fn, inst, truth).passed);
  }
}

TEST_CASE("dsic witness replays") {
  // Without payments a greedy allocation rewards overstating.
  auto found = false;
  for (const auto& inst : testing::no_taxi_corpus(200, 3000)) {
    MechanismCache cache(inst);
    const auto truth = inst.true_profile();
    const auto gars = bind_mechanism(MechanismKind::kGarsN, inst, cache, truth);
    MechanismFn unpaid = [&](const TypeProfile& p) {
      auto out = gars(p);
      out.payments.assign(out.payments.size(), Rational(0));
      return out;
    };
    CHECK(check_dsic(gars, inst, truth).passed);
    const auto report = check_dsic(unpaid, inst, truth);
    if (report.passed) continue;
    const auto& w = *report.witness;
    REQUIRE(w.reports.size() == 2);
    const auto honest = utility(cost_report(inst, unpaid(w.reports[0]).allocation, truth), PaymentVector(truth.size()));
    const auto lying = utility(cost_report(inst, unpaid(w.reports[1]).allocation, truth), PaymentVector(truth.size()));
    CHECK(honest[w.rider] == w.values[0]);
    CHECK(lying[w.rider] == w.values[1]);
    CHECK(lying[w.rider] > honest[w.rider]);
    found = true;
    break;
  }
  CHECK(found);
}

TEST_CASE("refined grid agrees with the default grid") {
  for (const auto& inst : testing::corpus(50, 2500)) {
    MechanismCache cache(inst);
    const auto truth = inst.true_profile();
    const auto fn = bind_mechanism(MechanismKind::kGarsNir, inst, cache, truth);
    const auto coarse = check_dsic(fn, inst, truth);
    const auto fine = check_dsic(fn, inst, truth, refined_grid(deviation_grid(inst, truth, 0), 10));
    CHECK(coarse.passed == fine.passed);
    CHECK(fine.cases > coarse.cases);
    for (std::size_t i = 0; i < inst.num_riders(); ++i) {
      const auto grid = refined_grid(deviation_grid(inst, truth, static_cast<int>(i)), 10);
      CHECK(check_monotonicity(fn, inst, truth, static_cast<int>(i), grid).passed);
    }
  }
}

TEST_CASE("greedy steps are consistent with the allocated work") {
  for (const auto& inst : testing::corpus(40, 2600)) {
    GreedyCache greedy(inst, Restriction::kAllowSwitching);
    for (std::size_t i = 0; i < inst.num_riders(); ++i) {
      CHECK(check_gadc(greedy, inst.true_profile(), static_cast<int>(i)).passed);
    }
  }
  SUBCASE("single position") {
    auto inst = figure2_instance(5);
    inst.riders.pop_back();
    GreedyCache greedy(inst, Restriction::kAllowSwitching);
    CHECK(check_gadc(greedy, inst.true_profile(), 0).passed);
  }
}

TEST_CASE("a taxi-permitted greedy breaks consistency when taxis are cheap") {
  auto inst = figure2_instance(5);
  inst.alpha = Rational(1);
  GreedyCache greedy(inst, Restriction::kAllowSwitching);
  const auto report = check_gadc(greedy, inst.true_profile(), 0, true);
  CHECK_FALSE(report.passed);
  REQUIRE(report.witness.has_value());
  CHECK(check_gadc(greedy, inst.true_profile(), 0, false).passed);
}

TEST_CASE("imaginary fuel lies between the fuel and N times the fuel") {
  std::size_t checked = 0;
  std::size_t idle_breaks = 0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto inst = testing::corpus_instance(7000 + seed, {2, 2, 3, 3});
    testing::enumerate_allocations(inst, [&](const Allocation& alloc) {
      ++checked;
      const auto costs = cost_report(inst, alloc, inst.true_profile());
      bool idle_driver = false;
      for (std::size_t k = 0; k < inst.num_vehicles(); ++k) {
        bool used = false;
        for (const auto& r : costs.riders) {
          used = used || std::find(r.vehicles_used.begin(), r.vehicles_used.end(), static_cast<int>(k)) !=
                             r.vehicles_used.end();
        }
        idle_driver = idle_driver || (costs.vehicle_travel[k] > 0 && !used);
      }
      const auto report = check_cost_sandwich(inst, alloc);
      // A vehicle that drives without ever carrying anyone adds fuel no rider is charged for.
      if (!idle_driver) CHECK(report.passed);
      if (!report.passed) {
        CHECK(idle_driver);
        CHECK(costs.imaginary < costs.fuel);
        ++idle_breaks;
      }
    });
  }
  CHECK(checked > 100);
  CHECK(idle_breaks > 0);

  SUBCASE("lower bound tight for a lone rider") {
    auto inst = figure2_instance(5);
    inst.riders.pop_back();
    MechanismCache cache(inst);
    const auto out = gars_n(inst, inst.true_profile(), GarsOptions{}, cache);
    REQUIRE(out.costs.riders[0].mode == TravelMode::kRideshare);
    CHECK(out.costs.imaginary == out.costs.fuel);
  }
  SUBCASE("upper bound tight when everyone shares one vehicle") {
    const auto inst = prop1_instance();
    MechanismCache cache(inst);
    const auto out = vcg(inst, inst.true_profile(), cache);
    for (std::size_t i = 0; i < inst.num_riders(); ++i) REQUIRE(distinct_vehicles(out.allocation, i) == 1);
    CHECK(out.costs.imaginary == Rational(2) * out.costs.fuel);
  }
}

TEST_CASE("absence never lowers the others' imaginary cost") {
  for (const auto& inst : testing::corpus(25, 2700)) {
    MechanismCache cache(inst);
    for (std::size_t i = 0; i < inst.num_riders(); ++i) {
      CHECK(check_absence(inst, inst.true_profile(), static_cast<int>(i), cache).passed);
    }
  }
  auto human = prop1_instance();
  human.autonomous = false;
  MechanismCache cache(human);
  CHECK_THROWS_AS(check_absence(human, human.true_profile(), 0, cache), ContractError);
}
