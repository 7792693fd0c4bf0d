#pragma once

#include <string>
#include <vector>

#include "rsmech/model.hpp"

namespace rsmech {

/// Two riders, two vehicles on A,B,C,D. Rider 1 goes A->B, rider 2 B->C;
/// vehicle 1 starts at C, vehicle 2 at D. Types default to (2, 1).
Instance figure2_instance(int horizon = 5);

/// Two riders with the same single-edge trip and one vehicle at the origin.
Instance prop1_instance();

/// Figure-2 network at T=5 with gamma_max = 5 and types (3, 4). Lowering
/// rider 1's type to 1 flips the order naive greedy serves the riders in.
Instance prop3_instance();

/// Names accepted by named_fixture.
std::vector<std::string> fixture_names();
/// Throws ContractError for an unknown name.
Instance named_fixture(const std::string& name);

}  // namespace rsmech
