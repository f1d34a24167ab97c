#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opaq/error.hpp"
#include "opaq/events.hpp"

namespace opaq {

using StateId = std::uint32_t;

// Sorted, duplicate-free list of state ids.
using StateSet = std::vector<StateId>;

struct StateSetHash {
  std::size_t operator()(const StateSet& s) const noexcept;
};

struct Transition {
  StateId src;
  EventId event;
  StateId dst;
  friend bool operator==(const Transition&, const Transition&) = default;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

struct StateInfo {
  std::string name;
  bool initial = false;
  bool marked = false;
  bool secret = false;
};

// What a state's origin record means.
enum class OriginKind : std::uint8_t {
  None,
  Tuple,    // composition: one coordinate per component
  Members,  // observer subset or quotient class: sorted member ids
};

// Immutable nondeterministic automaton with tau transitions.
// Transitions are stored sorted by (src, event, dst) with a per-state index.
class Automaton {
 public:
  Automaton() = default;

  const std::string& name() const { return name_; }
  std::size_t num_states() const { return states_.size(); }
  std::size_t num_transitions() const { return transitions_.size(); }

  std::span<const EventId> alphabet() const { return alphabet_; }
  bool has_event(EventId e) const;

  const StateInfo& state(StateId s) const { return states_.at(s); }
  std::span<const StateInfo> states() const { return states_; }
  std::optional<StateId> find_state(std::string_view name) const;

  std::span<const Transition> transitions() const { return transitions_; }
  std::span<const Transition> out(StateId s) const;
  std::span<const Transition> out(StateId s, EventId e) const;

  StateSet initial_states() const;
  StateSet marked_states() const;
  StateSet secret_states() const;

  OriginKind origin_kind() const { return origin_kind_; }
  std::span<const StateId> origin(StateId s) const;

  bool has_tau() const;
  bool is_deterministic() const;

  // Same structure with the flags of every state rewritten.
  Automaton with_flags(const std::vector<StateInfo>& infos) const;
  Automaton renamed(std::string name) const;
  Automaton without_origin() const;

 private:
  friend class AutomatonBuilder;

  std::string name_;
  std::vector<EventId> alphabet_;
  std::vector<StateInfo> states_;
  std::vector<Transition> transitions_;
  std::vector<std::uint32_t> out_begin_;  // size num_states + 1
  OriginKind origin_kind_ = OriginKind::None;
  std::vector<std::uint32_t> origin_begin_;
  std::vector<StateId> origin_data_;
};

class AutomatonBuilder {
 public:
  explicit AutomatonBuilder(std::string name = {});

  StateId add_state(StateInfo info);
  StateId add_state(std::string name, bool initial = false, bool marked = false,
                    bool secret = false);
  void add_event(EventId e);
  void add_events(std::span<const EventId> es);
  void add_transition(StateId src, EventId e, StateId dst);
  void set_origin_kind(OriginKind k) { origin_kind_ = k; }
  void set_origin(StateId s, std::vector<StateId> origin);
  StateInfo& state(StateId s) { return states_.at(s); }
  std::size_t num_states() const { return states_.size(); }

  // Validates the fsa invariants and freezes the automaton. Throws InputError.
  Automaton build() &&;

 private:
  std::string name_;
  std::vector<EventId> alphabet_;
  std::vector<StateInfo> states_;
  std::vector<Transition> transitions_;
  OriginKind origin_kind_ = OriginKind::None;
  std::vector<std::vector<StateId>> origins_;
};

std::string set_name(const Automaton& a, const StateSet& s);  // "{s1,s2}"

}  // namespace opaq
