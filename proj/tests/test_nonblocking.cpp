#include <doctest.h>

#include <random>

#include "opaq/benchgen.hpp"
#include "opaq/fsa.hpp"
#include "opaq/nonblocking.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_models.hpp"

using namespace opaq;
using namespace opaq::testing;

namespace {

// Shortest distance from the initial states to a blocking state, by layered search.
std::optional<std::size_t> blocking_distance(const Automaton& a) {
  auto co = oracle::coreachable(a);
  oracle::Set layer = oracle::initial(a), seen = layer;
  for (std::size_t d = 0; !layer.empty(); ++d) {
    for (StateId x : layer)
      if (!co.count(x)) return d;
    oracle::Set next;
    for (const Transition& t : a.transitions())
      if (layer.count(t.src) && seen.insert(t.dst).second) next.insert(t.dst);
    layer = next;
  }
  return std::nullopt;
}

// The counterexample's end tuple is reachable by its trace and blocking in the product.
bool replays_to_blocking(const std::vector<Automaton>& comps, const Counterexample& cex) {
  ModularSystem sys{comps, SecretMode::Or};
  Automaton prod = sync_all(sys);
  auto co = oracle::coreachable(prod);
  StateSet reach = weak_step(prod, prod.initial_states(), project(cex.trace));
  for (StateId s : reach) {
    auto o = prod.origin(s);
    std::vector<StateId> tuple(o.begin(), o.end());
    if (comps.size() == 1) tuple = {s};
    if (tuple == cex.end_state && !co.count(s)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("O1 || O2 blocks on α ψ₁") {
  PsiSystem ps = build_psi_system(fixture_system("ex4.system"), Property::current_state());
  ModularSystem psys{ps.automata(), SecretMode::Or};
  NonblockingResult r = check_nonblocking(sync_all(psys));
  CHECK_FALSE(r.nonblocking);
  CHECK(to_string(r.counterexample->trace) == "α ψ₁");
  CHECK(r.counterexample->component_blame == 0u);
}

TEST_CASE("all-marked automaton is nonblocking") {
  AutomatonBuilder b("m");
  b.add_state("x", true, true);
  b.add_state("y", false, true);
  b.add_event(event("α"));
  b.add_transition(0, event("α"), 1);
  CHECK(check_nonblocking(std::move(b).build()).nonblocking);
}

TEST_CASE("monolithic check agrees with the naive fixpoints") {
  std::mt19937 rng(51);
  RandomParams p;
  p.max_states = 6;
  for (int i = 0; i < 400; ++i) {
    Automaton a = random_automaton(rng, p, {pool_event(0), pool_event(1)}, "n");
    NonblockingResult r = check_nonblocking(a);
    CHECK(r.nonblocking == oracle::nonblocking(a));
    if (!r.nonblocking) {
      CHECK(r.counterexample->trace.size() == blocking_distance(a));
      CHECK(replays_to_blocking({a}, *r.counterexample));
    }
  }
}

TEST_CASE("compositional check on a singleton equals the monolithic one") {
  std::mt19937 rng(52);
  RandomParams p;
  for (int i = 0; i < 200; ++i) {
    Automaton a = random_automaton(rng, p, {pool_event(0), pool_event(1)}, "s");
    NonblockingResult r = check_nonblocking_compositional({a});
    CHECK(r.nonblocking == check_nonblocking(a).nonblocking);
    if (!r.nonblocking) CHECK(replays_to_blocking({a}, *r.counterexample));
  }
}

TEST_CASE("compositional check equals the monolithic check on random systems") {
  std::mt19937 rng(53);
  RandomParams p;
  for (int i = 0; i < 500; ++i) {
    ModularSystem sys = random_system(rng, p, SecretMode::Or, 2, 4);
    NonblockingResult mono = check_nonblocking(sync_all(sys));
    NonblockingResult comp = check_nonblocking_compositional(sys.components);
    REQUIRE(comp.nonblocking == mono.nonblocking);
    if (!comp.nonblocking) CHECK(replays_to_blocking(sys.components, *comp.counterexample));
  }
}

TEST_CASE("compositional check on psi systems keeps the psi witness") {
  PsiSystem ps = build_psi_system(fixture_system("ex4.system"), Property::current_state());
  NonblockingResult r = check_nonblocking_compositional(ps.automata());
  CHECK_FALSE(r.nonblocking);
  CHECK(to_string(r.counterexample->trace) == "α ψ₁");
  CHECK(r.counterexample->component_blame == 0u);
  CHECK(replays_to_blocking(ps.automata(), *r.counterexample));
}

TEST_CASE("players n=10 psi system blocks compositionally") {
  ModularSystem sys = generate({BenchmarkKind::Players, 10, SecretMode::Or});
  PsiSystem ps = build_psi_system(sys, Property::current_state());
  NonblockingResult r = check_nonblocking_compositional(ps.automata());
  CHECK_FALSE(r.nonblocking);
  CHECK(r.counterexample->component_blame.has_value());
}

TEST_CASE("diagnose_overapprox") {
  ModularSystem inf = fixture_system("inf.system");
  PsiSystem ps = build_psi_system(inf, Property::infinite_step());
  NonblockingResult r = check_nonblocking_compositional(ps.automata());
  REQUIRE_FALSE(r.nonblocking);
  CHECK(to_string(r.counterexample->trace) == "(α,ε) (ε,β) ψ₁");
  CHECK(diagnose_overapprox(inf, ps, *r.counterexample) == Diagnosis::OverApproximation);

  ModularSystem alone{{fixture("g1.json")}, SecretMode::Or};
  PsiSystem ps1 = build_psi_system(alone, Property::infinite_step());
  NonblockingResult r1 = check_nonblocking_compositional(ps1.automata());
  REQUIRE_FALSE(r1.nonblocking);
  CHECK(diagnose_overapprox(alone, ps1, *r1.counterexample) == Diagnosis::GenuineViolationConfirmed);

  Counterexample bad = *r.counterexample;
  bad.trace.pop_back();
  CHECK_THROWS_AS(diagnose_overapprox(inf, ps, bad), InputError);
  Counterexample wrong = *r.counterexample;
  wrong.trace.insert(wrong.trace.begin(), parse_event_label("(ε,α)", true));
  wrong.trace.insert(wrong.trace.begin(), parse_event_label("(ε,α)", true));
  wrong.trace.insert(wrong.trace.begin(), parse_event_label("(β,ε)", true));
  CHECK_THROWS_AS(diagnose_overapprox(inf, ps, wrong), InputError);
  PsiSystem cso = build_psi_system(inf, Property::current_state());
  CHECK_THROWS_AS(diagnose_overapprox(inf, cso, *r.counterexample), InputError);
}

TEST_CASE("diagnosis never confirms a monolithically opaque system") {
  std::mt19937 rng(54);
  RandomParams p;
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    ModularSystem sys = random_system(rng, p, i % 2 ? SecretMode::And : SecretMode::Or);
    StepBound k = i % 3 == 0 ? StepBound::infinite() : StepBound(i % 3);
    PsiSystem ps = build_psi_system(sys, Property::k_step(k));
    NonblockingResult r = check_nonblocking_compositional(ps.automata());
    if (r.nonblocking) continue;
    ++checked;
    Diagnosis d = diagnose_overapprox(sys, ps, *r.counterexample);
    bool mono_opaque = oracle::kstep_opaque(
        sync_all(sys), k.is_infinite() ? std::nullopt : std::optional<std::size_t>(k.value()));
    if (mono_opaque) CHECK(d != Diagnosis::GenuineViolationConfirmed);
    if (d == Diagnosis::GenuineViolationConfirmed) CHECK_FALSE(mono_opaque);
  }
  CHECK(checked > 0);
}
