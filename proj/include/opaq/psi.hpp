#pragma once

#include <variant>

#include "opaq/compose.hpp"
#include "opaq/observers.hpp"

namespace opaq {

struct Property {
  enum class Kind { CurrentState, KStep } kind = Kind::CurrentState;
  StepBound k = StepBound(0);

  static Property current_state() { return {}; }
  static Property k_step(StepBound k) { return {Kind::KStep, k}; }
  static Property infinite_step() { return {Kind::KStep, StepBound::infinite()}; }
  std::string to_string() const;
};

struct PsiAutomaton {
  Automaton automaton;
  EventId psi_event = kTau;
  StateSet psi_states;
  std::optional<StateId> dump;  // absent when psi_states is empty
};

// Observer states whose member set is a non-empty subset of secrets.
StateSet psi_states_cso(const ObserverAutomaton& d, const StateSet& secrets);
// Two-way states with X ∩ X_R non-empty, contained in secrets, and minimal reverse count ≤ k.
StateSet psi_states_kstep(const TwoWayObserver& h, const StateSet& secrets, StepBound k);

// All original states marked; an unmarked dump state with psi-transitions from psi_states.
// The psi event joins the alphabet even when psi_states is empty.
PsiAutomaton attach_psi(const Automaton& d, const StateSet& psi_states, EventId psi_event);

// Everything built per component on the way to the psi-system; kept for diagnosis.
struct PsiComponent {
  Automaton abstracted;
  Partition classes;  // abstracted state i = classes.blocks()[i] of the original
  std::variant<ObserverAutomaton, TwoWayObserver> observer;
  PsiAutomaton psi;
};

struct PsiSystem {
  std::vector<PsiComponent> components;
  SecretMode mode = SecretMode::Or;
  Property property;
  double ooe_ms = 0;
  double observer_ms = 0;

  std::vector<Automaton> automata() const;
};

// Abstract, build observers, select psi-states and attach psi_i (Or) or the shared psi (And).
// Per-component work runs on OPAQ_THREADS threads.
PsiSystem build_psi_system(const ModularSystem& sys, const Property& property);

// Worker count from OPAQ_THREADS (default: hardware concurrency, at least 1).
unsigned worker_threads();

}  // namespace opaq
