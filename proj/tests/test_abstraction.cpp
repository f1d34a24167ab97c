#include <doctest.h>

#include <random>

#include "opaq/abstraction.hpp"
#include "opaq/observers.hpp"
#include "opaq/psi.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_models.hpp"

using namespace opaq;
using namespace opaq::testing;

namespace {

std::vector<std::vector<std::string>> block_names(const Automaton& a, const Partition& p) {
  std::vector<std::vector<std::string>> r;
  for (const auto& b : p.blocks()) r.push_back(names_of(a, b));
  std::sort(r.begin(), r.end());
  return r;
}

bool same_as_relation(const Partition& p, const std::vector<std::vector<bool>>& rel) {
  for (StateId x = 0; x < rel.size(); ++x)
    for (StateId y = 0; y < rel.size(); ++y)
      if ((p.block_of(x) == p.block_of(y)) != rel[x][y]) return false;
  return true;
}

ModularSystem abstracted(const ModularSystem& sys) {
  ModularSystem r{{}, sys.mode};
  for (const auto& c : sys.components) r.components.push_back(abstract_component(c));
  return r;
}

}  // namespace

TEST_CASE("OOE of G1") {
  Automaton g1 = fixture("g1.json");
  Partition p = opaque_observation_equivalence(g1);
  CHECK(block_names(g1, p) ==
        std::vector<std::vector<std::string>>{{"s0"}, {"s1", "s3"}, {"s2", "s4"}, {"s5"}});
  Automaton tg1 = abstract_component(g1);
  CHECK(tg1.num_states() == 4);
  CHECK_FALSE(tg1.has_tau());
  CHECK(names_of(tg1, tg1.secret_states()) == std::vector<std::string>{"[s1]"});
}

TEST_CASE("OOE trivial cases") {
  AutomatonBuilder b("secret-only");
  for (int i = 0; i < 3; ++i) b.add_state("x" + std::to_string(i), i == 0, false, true);
  Automaton a = std::move(b).build();
  CHECK(opaque_observation_equivalence(a).size() == 1);

  Automaton g2 = fixture("g2.json");
  CHECK(abstract_component(g2).num_states() == g2.num_states());
  CHECK(abstract_component(g2).num_transitions() == g2.num_transitions());
}

TEST_CASE("OOE equals the naive greatest-fixpoint bisimulation") {
  std::mt19937 rng(17);
  RandomParams p;
  p.max_states = 6;
  for (int i = 0; i < 300; ++i) {
    Automaton a = random_automaton(rng, p, {pool_event(0), pool_event(1), pool_event(2)}, "r");
    Partition part = opaque_observation_equivalence(a);
    std::vector<int> labels;
    for (const StateInfo& s : a.states()) labels.push_back((s.secret ? 1 : 0) | (s.marked ? 2 : 0));
    CHECK(same_as_relation(part, oracle::weak_bisimulation(a, labels)));
    for (const auto& blk : part.blocks())
      for (StateId x : blk) CHECK(a.state(x).secret == a.state(blk[0]).secret);
    // fixed point: refining the quotient again changes nothing
    Automaton q = quotient(a, part);
    CHECK(opaque_observation_equivalence(q).size() == q.num_states());
    // the quotient accepts the same observable language
    CHECK(oracle::language(a, 4) == oracle::language(q, 4));
  }
}

TEST_CASE("marking observation equivalence") {
  // x -tau-> y -a-> z, all marked: x and y merge.
  AutomatonBuilder b("chain");
  b.add_state("x", true, true);
  b.add_state("y", false, true);
  b.add_state("z", false, true);
  b.add_event(event("α"));
  b.add_transition(0, kTau, 1);
  b.add_transition(1, event("α"), 2);
  Automaton chain = std::move(b).build();
  Partition p = marking_observation_equivalence(chain);
  CHECK(p.block_of(0) == p.block_of(1));
  CHECK(p.block_of(1) != p.block_of(2));

  // A psi component: the dump state stays alone.
  ObserverAutomaton d = determinize(abstract_component(fixture("g1_ex4.json")));
  PsiAutomaton psi = attach_psi(d.automaton, psi_states_cso(d, d.source->secret_states()),
                                EventTable::global().psi(1));
  REQUIRE(psi.dump.has_value());
  Partition pp = marking_observation_equivalence(psi.automaton);
  CHECK(pp.blocks()[pp.block_of(*psi.dump)].size() == 1);

  std::mt19937 rng(23);
  RandomParams rp;
  rp.max_states = 6;
  for (int i = 0; i < 300; ++i) {
    Automaton a = random_automaton(rng, rp, {pool_event(0), pool_event(1)}, "m");
    Partition mp = marking_observation_equivalence(a);
    std::vector<int> labels;
    for (const StateInfo& s : a.states()) labels.push_back(s.marked ? 1 : 0);
    CHECK(same_as_relation(mp, oracle::weak_bisimulation(a, labels)));
    CHECK(oracle::nonblocking(a) == oracle::nonblocking(quotient(a, mp)));
  }
}

TEST_CASE("abstraction preserves CSO and K-step verdicts of modular systems") {
  for (SecretMode mode : {SecretMode::Or, SecretMode::And}) {
    ModularSystem ex4 = fixture_system("ex4.system");
    ex4.mode = mode;
    CHECK(oracle::cso_opaque(sync_all(ex4)) == oracle::cso_opaque(sync_all(abstracted(ex4))));
  }
  std::mt19937 rng(31);
  RandomParams p;
  for (int i = 0; i < 300; ++i) {
    SecretMode mode = i % 2 ? SecretMode::And : SecretMode::Or;
    ModularSystem sys = random_system(rng, p, mode);
    Automaton mono = sync_all(sys), mono_abs = sync_all(abstracted(sys));
    CHECK(oracle::cso_opaque(mono) == oracle::cso_opaque(mono_abs));
    for (std::size_t k : {0u, 1u, 2u})
      CHECK(oracle::kstep_opaque(mono, k) == oracle::kstep_opaque(mono_abs, k));
  }
}
