#include "rsmech/fixtures.hpp"

#include "rsmech/errors.hpp"

namespace rsmech {

Instance figure2_instance(int horizon) {
  // A=0 B=1 C=2 D=3
  Instance inst;
  inst.network = RoadNetwork({"A", "B", "C", "D"}, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {3, 2}});
  inst.riders = {RiderSpec{1, 0, 1, Rational(2)}, RiderSpec{2, 1, 2, Rational(1)}};
  inst.vehicles = {VehicleSpec{1, 2}, VehicleSpec{2, 3}};
  inst.horizon = horizon;
  inst.capacity = 2;
  inst.alpha = Rational(10);
  inst.beta = Rational(1);
  inst.gamma_max = Rational(3);
  inst.autonomous = true;
  return inst;
}

Instance prop1_instance() {
  Instance inst;
  inst.network = RoadNetwork({"O", "D"}, {{0, 1}, {1, 0}});
  inst.riders = {RiderSpec{1, 0, 1, Rational(1)}, RiderSpec{2, 0, 1, Rational(2)}};
  inst.vehicles = {VehicleSpec{1, 0}};
  inst.horizon = 2;
  inst.capacity = 2;
  inst.alpha = Rational(10);
  inst.beta = Rational(1);
  inst.gamma_max = Rational(3);
  inst.autonomous = true;
  return inst;
}

Instance prop3_instance() {
  auto instance = figure2_instance(5);
  instance.gamma_max = Rational(5);
  instance.riders[0].gamma = Rational(3);
  instance.riders[1].gamma = Rational(4);
  validate_instance(instance);
  return instance;
}

std::vector<std::string> fixture_names() { return {"figure2", "figure2-short", "prop1", "prop3"}; }

Instance named_fixture(const std::string& name) {
  if (name == "figure2") return figure2_instance(5);
  if (name == "figure2-short") return figure2_instance(3);
  if (name == "prop1") return prop1_instance();
  if (name == "prop3") return prop3_instance();
  throw ContractError("unknown fixture '" + name + "'");
}

}  // namespace rsmech
