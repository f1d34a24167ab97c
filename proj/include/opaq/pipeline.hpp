#pragma once

#include <optional>

#include "opaq/nonblocking.hpp"

namespace opaq {

enum class Engine { Monolithic, Compositional };

struct VerifyOptions {
  Engine engine = Engine::Compositional;
  // When set, an Inconclusive K-step result is retried monolithically within this many
  // product states.
  std::optional<std::size_t> confirm_budget;
  std::size_t diagnosis_budget = 200000;
};

// Current-state opacity. Exact for both engines.
Verdict verify_cso(const ModularSystem& sys, const VerifyOptions& opts = {});

// K-step opacity (StepBound::infinite() for infinite-step). The compositional engine is
// sufficient only: a blocking psi-system is reported NotOpaque only after the violation is
// confirmed, Inconclusive otherwise. K = 0 is current-state opacity.
Verdict verify_kstep(const ModularSystem& sys, StepBound k, const VerifyOptions& opts = {});

Engine parse_engine(std::string_view s);
const char* to_string(Engine e);

}  // namespace opaq
