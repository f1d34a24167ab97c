#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "opaq/automaton.hpp"

namespace opaq {

// K for K-step opacity; infinite() is infinite-step opacity.
class StepBound {
 public:
  constexpr explicit StepBound(std::uint64_t k) : k_(k) {}
  static constexpr StepBound infinite() { return StepBound(kInf); }
  constexpr bool is_infinite() const { return k_ == kInf; }
  constexpr std::uint64_t value() const { return k_; }
  constexpr bool admits(std::uint64_t count) const { return is_infinite() || count <= k_; }
  friend constexpr bool operator==(StepBound, StepBound) = default;
  std::string to_string() const { return is_infinite() ? "inf" : std::to_string(k_); }

 private:
  static constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t k_;
};

enum class Status { Opaque, NotOpaque, Inconclusive };
enum class Diagnosis { GenuineViolationConfirmed, OverApproximation, Unknown };

struct Counterexample {
  Trace trace;
  // Tuple of component states (compositional) or the state id of the checked automaton.
  std::vector<StateId> end_state;
  std::string end_description;
  std::optional<std::size_t> component_blame;  // 0-based, from the psi_i label
};

struct PhaseTimings {
  double ooe_ms = 0;
  double observer_ms = 0;
  double nonblocking_ms = 0;
  double diagnosis_ms = 0;
  double total_ms() const { return ooe_ms + observer_ms + nonblocking_ms + diagnosis_ms; }
};

struct Verdict {
  Status status = Status::Opaque;
  std::optional<Counterexample> witness;
  std::optional<Diagnosis> diagnosis;
  PhaseTimings timings;
  std::size_t max_intermediate_states = 0;
};

// Forward / reverse halves of a trace over the doubled alphabet, mapped back to plain events.
Trace decode_forward(const Trace& t);
Trace decode_reverse(const Trace& t);

const char* to_string(Status s);
const char* to_string(Diagnosis d);

}  // namespace opaq
