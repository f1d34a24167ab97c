#pragma once

#include "opaq/fsa.hpp"

namespace opaq {

// Coarsest weak bisimulation whose blocks agree on the secret and the marked flag.
Partition opaque_observation_equivalence(const Automaton& a);

// Coarsest weak bisimulation whose blocks agree on the marked flag.
Partition marking_observation_equivalence(const Automaton& a);

// Coarsest weak bisimulation refining the given initial labelling.
Partition weak_bisimulation(const Automaton& a, const std::vector<std::uint32_t>& initial_labels);

// Quotient by opaque observation equivalence without tau self-loops.
Automaton abstract_component(const Automaton& a);

}  // namespace opaq
