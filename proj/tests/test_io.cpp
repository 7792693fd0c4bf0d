#include "doctest.h"

#include "rsmech/errors.hpp"
#include "rsmech/fixtures.hpp"
#include "rsmech/io.hpp"

using namespace rsmech;

TEST_CASE("rationals in json") {
  CHECK(rational_from_json(Json(3)) == Rational(3));
  CHECK(rational_from_json(Json("3/6")) == Rational(1, 2));
  CHECK(rational_from_json(Json("-2/4")) == Rational(-1, 2));
  CHECK(rational_from_json(Json("0.25")) == Rational(1, 4));
  CHECK(rational_to_json(Rational(6, 4)) == Json("3/2"));
  CHECK(rational_to_json(Rational(5)) == Json("5"));
  CHECK_THROWS_AS(rational_from_json(Json(0.5)), ContractError);
  CHECK_THROWS_AS(rational_from_json(Json("1/0")), ContractError);
  CHECK_THROWS_AS(rational_from_json(Json("abc")), ContractError);
  CHECK_THROWS_AS(rational_from_json(Json("99999999999999999999")), ContractError);
}

TEST_CASE("instances round-trip") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const auto inst = named_fixture(name);
    const auto json = instance_to_json(inst);
    const auto back = instance_from_json(Json::parse(dump(json)));
    CHECK(instance_to_json(back) == json);
    CHECK(back.true_profile() == inst.true_profile());
    CHECK(back.horizon == inst.horizon);
  }
}

TEST_CASE("malformed instances are rejected") {
  auto json = instance_to_json(figure2_instance(5));
  SUBCASE("missing field") {
    json.erase("horizon");
    CHECK_THROWS_AS(instance_from_json(json), ContractError);
  }
  SUBCASE("unknown vertex") {
    json["riders"][0]["origin"] = "Z";
    CHECK_THROWS_AS(instance_from_json(json), ContractError);
  }
  SUBCASE("type above the bound") {
    json["riders"][0]["gamma"] = "100";
    CHECK_THROWS_AS(instance_from_json(json), ContractError);
  }
  SUBCASE("bad edge") {
    json["network"]["edges"].push_back(Json::array({"A"}));
    CHECK_THROWS_AS(instance_from_json(json), ContractError);
  }
}

TEST_CASE("configs") {
  const Json base = {{"gamma_max", "2"}, {"seeds", 4}, {"mechanisms", {"vcg", "gars-nir"}}};
  const auto c = config_from_json(base);
  CHECK(c.gamma_max == Rational(2));
  CHECK(c.seeds == 4);
  CHECK(c.mechanisms == std::vector<MechanismKind>{MechanismKind::kVcg, MechanismKind::kGarsNir});
  const auto again = config_from_json(config_to_json(c));
  CHECK(config_to_json(again) == config_to_json(c));

  auto bad = base;
  bad["colour"] = 1;
  CHECK_THROWS_AS(config_from_json(bad), ContractError);
  bad = base;
  bad.erase("gamma_max");
  CHECK_THROWS_AS(config_from_json(bad), ContractError);
  bad = base;
  bad["mechanisms"] = {"auction"};
  CHECK_THROWS_AS(config_from_json(bad), ContractError);
  bad = base;
  bad["restriction"] = "sometimes";
  CHECK_THROWS_AS(config_from_json(bad), ContractError);
  bad = base;
  bad["seeds"] = 0;
  CHECK_THROWS_AS(config_from_json(bad), ContractError);
  bad = base;
  bad["demand"] = {{"source", "zones"}, {"file", "missing.csv"}};
  CHECK_THROWS_AS(config_from_json(bad, "data"), ContractError);

  const auto shipped = config_from_json(read_json_file("data/zones.json"), "data");
  REQUIRE(shipped.zones.has_value());
  CHECK(shipped.zones->zones.size() == 19);
}

TEST_CASE("outcomes and reports") {
  const auto inst = figure2_instance(5);
  MechanismCache cache(inst);
  const auto truth = inst.true_profile();
  const auto out = gars_nir(inst, truth, GarsOptions{}, cache);
  const auto json = outcome_to_json(inst, out, truth);
  CHECK(json["mechanism"] == "gars-nir");
  CHECK(json["payments"].size() == 2);
  CHECK(json.contains("c_fub"));
  CHECK(json["allocation"]["rider_routes"].size() == 2);

  PropertyReport report;
  report.property = "bb";
  report.instance_digest = instance_digest(inst);
  report.passed = false;
  report.cases = 1;
  report.witness = Witness{0, truth, {truth}, {Rational(0), Rational(3)}, "payments below fuel cost"};
  const auto r = report_to_json(report);
  CHECK(r["passed"] == false);
  CHECK(r["witness"]["rider"] == 1);
  CHECK(r["witness"]["values"] == Json::array({"0", "3"}));
  report.witness.reset();
  report.passed = true;
  CHECK(report_to_json(report)["witness"].is_null());
  CHECK(dump(Json{{"a", 1}}) == "{\n  \"a\": 1\n}\n");
}
