#include <doctest.h>

#include <algorithm>

#include "opaq/io.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_models.hpp"

using namespace opaq;
using namespace opaq::testing;
using nlohmann::json;

namespace {

std::string error_of(const json& j, bool allow_reserved = false) {
  try {
    model_from_json(j, "m.json", allow_reserved);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

json tiny() {
  return json::parse(R"({"alphabet": ["a"], "states": [{"name": "x", "initial": true},
                         {"name": "y", "secret": true}], "transitions": [["x", "a", "y"]]})");
}

}  // namespace

TEST_CASE("fixture parses") {
  Automaton g1 = fixture("g1.json");
  CHECK(g1.name() == "G1");
  CHECK(g1.num_states() == 6);
  CHECK(g1.num_transitions() == 6);
  CHECK(g1.secret_states().size() == 2);
  CHECK(g1.has_tau());
  Automaton t = model_from_json(tiny(), "tiny");
  CHECK_FALSE(t.state(1).initial);
  CHECK(t.state(1).secret);
}

TEST_CASE("model JSON round trip") {
  std::mt19937 rng(71);
  RandomParams p;
  for (int i = 0; i < 100; ++i) {
    Automaton a = random_automaton(rng, p, {pool_event(0), pool_event(1)}, "r");
    json j = model_to_json(a);
    Automaton b = model_from_json(j, "rt");
    CHECK(model_to_json(b) == j);
    CHECK(b.num_states() == a.num_states());
    CHECK(std::ranges::equal(b.transitions(), a.transitions()));
  }
}

TEST_CASE("system JSON round trip keeps mode and components") {
  ModularSystem sys = fixture_system("ex5.system");
  CHECK(sys.mode == SecretMode::And);
  REQUIRE(sys.components.size() == 2);
  ModularSystem back = system_from_json(system_to_json(sys), "inline", ".");
  CHECK(back.mode == sys.mode);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(model_to_json(back.components[i]) == model_to_json(sys.components[i]));
}

TEST_CASE("malformed models name the offending field") {
  json j = tiny();
  j["transitions"][0][0] = "z";
  CHECK(error_of(j) == "m.json: transitions[0][0]: unknown state 'z'");
  j = tiny();
  j["transitions"][0][1] = "b";
  CHECK(error_of(j).find("transitions[0][1]") != std::string::npos);
  j = tiny();
  j["states"][0]["initial"] = false;
  CHECK_FALSE(error_of(j).empty());
  j = tiny();
  j["states"][1]["name"] = "x";
  CHECK(error_of(j).find("duplicate state name") != std::string::npos);
  j = tiny();
  j.erase("states");
  CHECK(error_of(j) == "m.json: states: missing field");
  j = tiny();
  j["alphabet"] = json::array({"a", "a"});
  CHECK(error_of(j).find("duplicate event") != std::string::npos);
  j = tiny();
  j["states"][0]["marked"] = "yes";
  CHECK(error_of(j).find("expected a boolean") != std::string::npos);
}

TEST_CASE("reserved labels need opting in") {
  json j = tiny();
  j["alphabet"] = json::array({"(a,ε)", "__psi_1"});
  j["transitions"] = json::array({json::array({"x", "(a,ε)", "y"}), json::array({"y", "__psi_1", "x"})});
  CHECK(error_of(j).find("reserved") != std::string::npos);
  Automaton a = model_from_json(j, "m.json", true);
  CHECK(kind(a.alphabet()[0]) != EventKind::Plain);
  CHECK(parse_event_label("__psi_1", true) == EventTable::global().psi(1));
  CHECK(parse_event_label("(ε,a)", true) == EventTable::global().reverse(event("a")));
  CHECK_THROWS_AS(parse_event_label("__psi_x", true), InputError);
}

TEST_CASE("system errors") {
  json bad = json::parse(R"({"mode": "xor", "components": ["g1.json"]})");
  CHECK_THROWS_WITH_AS(system_from_json(bad, "s", OPAQ_FIXTURE_DIR), doctest::Contains("mode"),
                       InputError);
  bad = json::parse(R"({"mode": "or", "components": []})");
  CHECK_THROWS_AS(system_from_json(bad, "s", OPAQ_FIXTURE_DIR), InputError);
  bad = json::parse(R"({"mode": "or", "components": ["missing.json"]})");
  CHECK_THROWS_AS(system_from_json(bad, "s", OPAQ_FIXTURE_DIR), InputError);
  CHECK_THROWS_AS(load_model("/nonexistent/model.json"), InputError);
}

TEST_CASE("DOT export") {
  std::string dot = to_dot(fixture("g1.json"));
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("doublecircle") != std::string::npos);
  CHECK(dot.find("lightgrey") != std::string::npos);
  CHECK(dot.find("τ") != std::string::npos);
}
