#pragma once

#include <vector>

#include "opaq/compose.hpp"
#include "opaq/psi.hpp"
#include "opaq/verdict.hpp"

namespace opaq {

struct NonblockingResult {
  bool nonblocking = true;
  // Shortest trace to a blocking state. For the compositional engine the trace is over the
  // original component events without tau, and end_state holds one state per component.
  std::optional<Counterexample> counterexample;
  // Instrumentation: largest automaton built (components count too) and number of merges.
  std::size_t max_intermediate_states = 0;
  std::size_t compositions = 0;
};

NonblockingResult check_nonblocking(const Automaton& a);

struct CompositionalOptions {
  // Events occurring in more live intermediates than this are not used to propose pairs.
  std::size_t max_event_fanout = 64;
};

// Compose, hide local events, abstract by marking-uniform weak bisimulation, repeat.
NonblockingResult check_nonblocking_compositional(const std::vector<Automaton>& components,
                                                  const CompositionalOptions& opts = {});

// Blame from the last per-component psi event of a trace.
std::optional<std::size_t> psi_blame(const Trace& t);

// Decides whether a blocking two-way psi-system counterexample is caused by the modular
// over-approximation. `psi` must be the psi-system the counterexample came from.
Diagnosis diagnose_overapprox(const ModularSystem& sys, const PsiSystem& psi,
                              const Counterexample& cex, std::size_t state_budget = 200000);

}  // namespace opaq
