#include <doctest.h>

#include <cstdlib>
#include <random>

#include "opaq/abstraction.hpp"
#include "opaq/benchgen.hpp"
#include "opaq/io.hpp"
#include "opaq/nonblocking.hpp"
#include "opaq/psi.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"
#include "support/random_models.hpp"

using namespace opaq;
using namespace opaq::testing;

namespace {

std::vector<std::vector<std::string>> member_names(const ObserverAutomaton& d, const StateSet& xs) {
  std::vector<std::vector<std::string>> r;
  for (StateId x : xs) r.push_back(names_of(*d.source, d.members[x]));
  return r;
}

}  // namespace

TEST_CASE("psi_states_cso") {
  Automaton tg1 = abstract_component(fixture("g1_ex4.json"));
  ObserverAutomaton d1 = determinize(tg1);
  CHECK(member_names(d1, psi_states_cso(d1, tg1.secret_states())) ==
        std::vector<std::vector<std::string>>{{"[s1]", "[s2]"}});
  CHECK(psi_states_cso(d1, {}).empty());
  Automaton g2 = fixture("g2.json");
  ObserverAutomaton d2 = determinize(g2);
  CHECK(member_names(d2, psi_states_cso(d2, g2.secret_states())) ==
        std::vector<std::vector<std::string>>{{"t1"}});
}

TEST_CASE("psi_states_kstep") {
  Automaton tg1 = abstract_component(fixture("g1.json"));
  TwoWayObserver h1 = two_way_observer(tg1);
  for (StepBound k : {StepBound::infinite(), StepBound(1)}) {
    StateSet ps = psi_states_kstep(h1, tg1.secret_states(), k);
    REQUIRE(ps.size() == 1);
    CHECK(names_of(tg1, h1.forward[ps[0]]) == std::vector<std::string>{"[s1]", "[s2]"});
    CHECK(names_of(tg1, h1.reverse[ps[0]]) == std::vector<std::string>{"[s1]"});
  }
  CHECK(psi_states_kstep(h1, tg1.secret_states(), StepBound(0)).empty());
  Automaton g2 = fixture("g2_open.json");
  TwoWayObserver h2 = two_way_observer(g2);
  for (StepBound k : {StepBound(0), StepBound(1), StepBound::infinite()})
    CHECK(psi_states_kstep(h2, {}, k).empty());
}

TEST_CASE("attach_psi builds O1") {
  Automaton tg1 = abstract_component(fixture("g1_ex4.json"));
  ObserverAutomaton d = determinize(tg1);
  EventId psi1 = EventTable::global().psi(1);
  PsiAutomaton o1 = attach_psi(d.automaton, psi_states_cso(d, tg1.secret_states()), psi1);
  REQUIRE(o1.dump);
  CHECK(o1.automaton.num_states() == d.automaton.num_states() + 1);
  for (StateId s = 0; s < o1.automaton.num_states(); ++s)
    CHECK(o1.automaton.state(s).marked == (s != *o1.dump));
  CHECK(o1.automaton.out(*o1.dump).empty());
  std::size_t psi_edges = 0;
  for (const Transition& t : o1.automaton.transitions())
    if (t.event == psi1) {
      ++psi_edges;
      CHECK(t.dst == *o1.dump);
      CHECK(std::binary_search(o1.psi_states.begin(), o1.psi_states.end(), t.src));
    }
  CHECK(psi_edges == 1);
  // the Σ-language is unchanged
  auto lang = oracle::language(o1.automaton, 4);
  std::set<Trace> without_psi;
  for (const Trace& t : lang)
    if (std::find(t.begin(), t.end(), psi1) == t.end()) without_psi.insert(t);
  CHECK(without_psi == oracle::language(d.automaton, 4));

  // freshness
  CHECK_THROWS_AS(attach_psi(o1.automaton, {}, psi1), InputError);
  // non-deterministic input
  CHECK_THROWS_AS(attach_psi(fixture("g1.json"), {}, EventTable::global().psi(7)), InputError);
}

TEST_CASE("attach_psi with no psi states") {
  Automaton g2 = fixture("g2_open.json");
  ObserverAutomaton d = determinize(g2);
  PsiAutomaton p = attach_psi(d.automaton, {}, EventTable::global().psi(2));
  CHECK_FALSE(p.dump);
  CHECK(p.automaton.num_states() == d.automaton.num_states());
  CHECK(p.automaton.has_event(EventTable::global().psi(2)));
  CHECK(p.automaton.marked_states().size() == p.automaton.num_states());
}

TEST_CASE("build_psi_system event discipline") {
  ModularSystem ex4 = fixture_system("ex4.system");
  PsiSystem orp = build_psi_system(ex4, Property::current_state());
  REQUIRE(orp.components.size() == 2);
  CHECK(label(orp.components[0].psi.psi_event) == "__psi_1");
  CHECK(label(orp.components[1].psi.psi_event) == "__psi_2");
  CHECK(orp.components[0].psi.psi_states.size() == 1);
  CHECK(orp.components[1].psi.psi_states.size() == 1);

  ex4.mode = SecretMode::And;
  PsiSystem andp = build_psi_system(ex4, Property::current_state());
  CHECK(label(andp.components[0].psi.psi_event) == "__psi");
  CHECK(andp.components[0].psi.psi_event == andp.components[1].psi.psi_event);

  ModularSystem open{{fixture("g2_open.json"), fixture("g2_open.json").renamed("copy")}, SecretMode::Or};
  for (Property prop : {Property::current_state(), Property::infinite_step(), Property::k_step(StepBound(2))}) {
    PsiSystem ps = build_psi_system(open, prop);
    for (const auto& c : ps.components) CHECK(c.psi.psi_states.empty());
  }
}

TEST_CASE("blocking lemmas for OR and AND psi products") {
  std::mt19937 rng(41);
  RandomParams p;
  p.deterministic = true;
  p.max_states = 4;
  for (int i = 0; i < 300; ++i) {
    ModularSystem sys = random_system(rng, p, i % 2 ? SecretMode::And : SecretMode::Or);
    CHECK(blocking_lemma_holds(sys, rng));
  }
}

TEST_CASE("psi system does not depend on the worker count") {
  ModularSystem sys = generate({BenchmarkKind::Houses, 6, SecretMode::Or});
  std::vector<std::string> runs;
  for (const char* threads : {"1", "4"}) {
    setenv("OPAQ_THREADS", threads, 1);
    CHECK(worker_threads() == unsigned(std::atoi(threads)));
    for (Property prop : {Property::current_state(), Property::k_step(StepBound(2))}) {
      PsiSystem ps = build_psi_system(sys, prop);
      runs.push_back(system_to_json({ps.automata(), ps.mode}).dump());
    }
  }
  unsetenv("OPAQ_THREADS");
  CHECK(runs[0] == runs[2]);
  CHECK(runs[1] == runs[3]);
}
