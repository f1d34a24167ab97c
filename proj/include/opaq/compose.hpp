#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "opaq/automaton.hpp"

namespace opaq {

enum class SecretMode { Or, And };

struct ModularSystem {
  std::vector<Automaton> components;
  SecretMode mode = SecretMode::Or;
};

struct SyncOptions {
  // Product construction throws BudgetExceeded beyond this many states.
  std::size_t max_states = std::numeric_limits<std::size_t>::max();
  // Skip building state names (they are only needed for display).
  bool names = true;
};

// Reachable synchronous product. Shared events move jointly, private events and tau
// interleave. Origins are flattened tuples: a Tuple-origin operand contributes all its
// coordinates, any other operand contributes its own state id.
Automaton sync(const Automaton& a, const Automaton& b, SecretMode mode,
               const SyncOptions& opts = {});

// Left fold of sync; secrecy is evaluated on the full tuple.
// A singleton system returns the component itself.
Automaton sync_all(const ModularSystem& sys, const SyncOptions& opts = {});

std::optional<EventId> project_event(EventId sigma, std::span<const EventId> target_alphabet);
Trace project_trace(const Trace& t, std::span<const EventId> target_alphabet);

const char* to_string(SecretMode m);
SecretMode parse_mode(std::string_view s);

}  // namespace opaq
