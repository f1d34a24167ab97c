#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "opaq/automaton.hpp"

namespace opaq {

// Unobservable reach: tau-closure of b.
StateSet ur(const Automaton& a, const StateSet& b);

// States reachable from sources by some raw path whose projection is s.
StateSet weak_step(const Automaton& a, const StateSet& sources, const Trace& s);

// States reachable by exactly one observable event e (tau-closed on both sides).
StateSet weak_successors(const Automaton& a, const StateSet& closed_sources, EventId e);

// Removes tau.
Trace project(const Trace& t);

// Every event sigma becomes (sigma, eps) resp. (eps, sigma). Tau stays tau.
Automaton rename_forward(const Automaton& a);
Automaton rename_reverse(const Automaton& a);

// Flipped transitions; every state initial; marked/secret kept.
Automaton reverse(const Automaton& a);

// Disjoint non-empty blocks covering all states; blocks sorted by their smallest member.
class Partition {
 public:
  Partition() = default;
  // Throws InputError if the blocks do not partition {0..num_states-1}.
  static Partition from_blocks(std::vector<StateSet> blocks, std::size_t num_states);
  // block label per state; labels are renumbered canonically.
  static Partition from_labels(const std::vector<std::uint32_t>& labels);
  static Partition identity(std::size_t num_states);

  const std::vector<StateSet>& blocks() const { return blocks_; }
  std::uint32_t block_of(StateId s) const { return block_of_.at(s); }
  std::size_t size() const { return blocks_.size(); }

 private:
  std::vector<StateSet> blocks_;
  std::vector<std::uint32_t> block_of_;
};

// One state per block. Flags: initial/secret/marked if any member has them.
// Class names are the member name for singletons and "[first]" otherwise.
// Origin records the block members.
Automaton quotient(const Automaton& a, const Partition& p);

// Drops tau self-loops.
Automaton remove_tau_selfloops(const Automaton& a);

// Replaces the given events with tau and removes them from the alphabet.
Automaton hide(const Automaton& a, const std::vector<EventId>& events);

// States reachable from the initial states.
std::vector<bool> reachable(const Automaton& a);
// States from which a marked state is reachable.
std::vector<bool> coreachable(const Automaton& a);

}  // namespace opaq

namespace opaq {

struct Path {
  Trace trace;  // raw, may contain tau
  StateId end = 0;
};

// Breadth-first search from the initial states for the first state satisfying goal.
// Successors are expanded in canonical event order (tau first), then by target id,
// so the result is a shortest path with deterministic tie-breaking.
template <class Goal>
std::optional<Path> shortest_path(const Automaton& a, Goal goal);

// Alphabet plus tau, sorted by event_less with tau first.
std::vector<EventId> canonical_events(const Automaton& a);

}  // namespace opaq

#include <optional>

namespace opaq {

template <class Goal>
std::optional<Path> shortest_path(const Automaton& a, Goal goal) {
  const auto n = a.num_states();
  constexpr StateId kNone = UINT32_MAX;
  std::vector<StateId> parent(n, kNone);
  std::vector<EventId> via(n, kTau);
  std::vector<bool> seen(n, false);
  std::vector<StateId> queue;
  for (StateId s : a.initial_states()) {
    seen[s] = true;
    queue.push_back(s);
  }
  const auto events = canonical_events(a);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    StateId x = queue[head];
    if (goal(x)) {
      Path p;
      p.end = x;
      for (StateId y = x; parent[y] != kNone; y = parent[y]) p.trace.push_back(via[y]);
      std::reverse(p.trace.begin(), p.trace.end());
      return p;
    }
    for (EventId e : events)
      for (const Transition& t : a.out(x, e))
        if (!seen[t.dst]) {
          seen[t.dst] = true;
          parent[t.dst] = x;
          via[t.dst] = e;
          queue.push_back(t.dst);
        }
  }
  return std::nullopt;
}

}  // namespace opaq
