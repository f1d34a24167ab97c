#pragma once

#include <memory>

#include "opaq/fsa.hpp"
#include "opaq/verdict.hpp"

namespace opaq {

// Current-state estimator det(A). State i of `automaton` has member set members[i].
// An observer state is flagged secret when its members are all secret, and marked when
// some member is marked.
struct ObserverAutomaton {
  Automaton automaton;
  std::vector<StateSet> members;
  std::shared_ptr<const Automaton> source;
};

// Product of the renamed forward observer and the renamed observer of the reverse.
// A state is flagged secret when forward ∩ reverse is non-empty and all secret.
struct TwoWayObserver {
  Automaton automaton;
  std::vector<StateSet> forward;
  std::vector<StateSet> reverse;
  std::shared_ptr<const Automaton> source;

  StateSet intersection(StateId h) const;
  bool violating(StateId h) const;
};

ObserverAutomaton determinize(const Automaton& a);
TwoWayObserver two_way_observer(const Automaton& a);

// Minimum number of (eps, sigma) events on a path from the initial state, or
// UINT64_MAX for unreachable states. Optional parent links give one minimising path.
struct ReverseCounts {
  std::vector<std::uint64_t> count;
  std::vector<StateId> parent;
  std::vector<EventId> via;
  Trace path_to(StateId h) const;
};
ReverseCounts min_reverse_counts(const Automaton& h);

Verdict oracle_cso(const Automaton& a);
Verdict oracle_infinite(const Automaton& a);
Verdict oracle_kstep(const Automaton& a, StepBound k);

}  // namespace opaq
