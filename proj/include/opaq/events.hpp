#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace opaq {

using EventId = std::uint32_t;

// The single unobservable event. It never appears in a declared alphabet.
inline constexpr EventId kTau = 0;

enum class EventKind : std::uint8_t { Tau, Plain, Forward, Reverse, Psi };

struct EventInfo {
  std::string label;
  EventKind kind = EventKind::Plain;
  // For Forward/Reverse pair events: the underlying plain event.
  EventId base = kTau;
  // For per-component psi events: the 1-based component index, 0 for the shared psi.
  std::uint32_t psi_index = 0;
};

// Process-wide label interner. Events with equal labels are the same event,
// which is how shared events are recognised across automata.
// Thread-safe; references returned by info() stay valid for the process lifetime.
class EventTable {
 public:
  static EventTable& global();

  // Interns a plain observable event. Reserved labels are rejected.
  EventId intern(std::string_view label);
  std::optional<EventId> find(std::string_view label) const;

  EventId forward(EventId base);  // (sigma, eps)
  EventId reverse(EventId base);  // (eps, sigma)
  EventId psi(std::uint32_t index);  // __psi_<index>, or __psi when index == 0

  const EventInfo& info(EventId e) const;
  std::size_t size() const;

 private:
  EventTable();
  EventId intern_with(std::string label, EventKind kind, EventId base, std::uint32_t psi_index);

  struct Impl;
  Impl* impl_;
};

// Shorthands over the global table.
EventId event(std::string_view label);
const std::string& label(EventId e);
// Human readable label: psi events render as "ψ1" / "ψ", everything else as its label.
std::string display_label(EventId e);
EventKind kind(EventId e);
bool is_psi(EventId e);
bool is_reserved_label(std::string_view label);

// Canonical event order used for tie-breaking in searches: plain < forward < reverse < psi,
// then by label. Independent of interning order.
bool event_less(EventId a, EventId b);

using Trace = std::vector<EventId>;

std::string to_string(const Trace& t);  // display labels, space separated; "ε" when empty

}  // namespace opaq
