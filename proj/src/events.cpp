#include "opaq/events.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

#include "opaq/error.hpp"

namespace opaq {

struct EventTable::Impl {
  mutable std::shared_mutex mu;
  std::deque<EventInfo> infos;
  std::unordered_map<std::string, EventId> by_label;
};

EventTable::EventTable() : impl_(new Impl) {
  impl_->infos.push_back(EventInfo{"tau", EventKind::Tau, kTau, 0});
}

EventTable& EventTable::global() {
  static EventTable table;
  return table;
}

EventId EventTable::intern_with(std::string label, EventKind kind, EventId base,
                                std::uint32_t psi_index) {
  {
    std::shared_lock lock(impl_->mu);
    auto it = impl_->by_label.find(label);
    if (it != impl_->by_label.end()) return it->second;
  }
  std::unique_lock lock(impl_->mu);
  auto it = impl_->by_label.find(label);
  if (it != impl_->by_label.end()) return it->second;
  auto id = static_cast<EventId>(impl_->infos.size());
  impl_->infos.push_back(EventInfo{label, kind, base, psi_index});
  impl_->by_label.emplace(std::move(label), id);
  return id;
}

bool is_reserved_label(std::string_view label) {
  return label.starts_with("__psi") || label.starts_with("(");
}

EventId EventTable::intern(std::string_view label) {
  if (label.empty()) throw InputError("empty event label");
  if (is_reserved_label(label))
    throw InputError("event label '" + std::string(label) + "' is reserved");
  return intern_with(std::string(label), EventKind::Plain, kTau, 0);
}

std::optional<EventId> EventTable::find(std::string_view label) const {
  std::shared_lock lock(impl_->mu);
  auto it = impl_->by_label.find(std::string(label));
  if (it == impl_->by_label.end()) return std::nullopt;
  return it->second;
}

EventId EventTable::forward(EventId base) {
  const EventInfo& b = info(base);
  if (b.kind != EventKind::Plain) throw InputError("cannot rename non-plain event " + b.label);
  return intern_with("(" + b.label + ",ε)", EventKind::Forward, base, 0);
}

EventId EventTable::reverse(EventId base) {
  const EventInfo& b = info(base);
  if (b.kind != EventKind::Plain) throw InputError("cannot rename non-plain event " + b.label);
  return intern_with("(ε," + b.label + ")", EventKind::Reverse, base, 0);
}

EventId EventTable::psi(std::uint32_t index) {
  std::string l = index == 0 ? "__psi" : "__psi_" + std::to_string(index);
  return intern_with(std::move(l), EventKind::Psi, kTau, index);
}

const EventInfo& EventTable::info(EventId e) const {
  std::shared_lock lock(impl_->mu);
  if (e >= impl_->infos.size()) throw std::out_of_range("unknown event id");
  return impl_->infos[e];
}

std::size_t EventTable::size() const {
  std::shared_lock lock(impl_->mu);
  return impl_->infos.size();
}

EventId event(std::string_view label) { return EventTable::global().intern(label); }
const std::string& label(EventId e) { return EventTable::global().info(e).label; }
EventKind kind(EventId e) { return EventTable::global().info(e).kind; }
bool is_psi(EventId e) { return kind(e) == EventKind::Psi; }

std::string display_label(EventId e) {
  const EventInfo& i = EventTable::global().info(e);
  if (i.kind == EventKind::Tau) return "τ";
  if (i.kind == EventKind::Psi) {
    std::string out = "ψ";
    if (i.psi_index == 0) return out;
    static const char* sub[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
    for (char c : std::to_string(i.psi_index)) out += sub[c - '0'];
    return out;
  }
  return i.label;
}

bool event_less(EventId a, EventId b) {
  if (a == b) return false;
  const EventInfo& x = EventTable::global().info(a);
  const EventInfo& y = EventTable::global().info(b);
  if (x.kind != y.kind) return x.kind < y.kind;
  if (x.kind == EventKind::Psi) return x.psi_index < y.psi_index;
  return x.label < y.label;
}

std::string to_string(const Trace& t) {
  if (t.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ' ';
    out += display_label(t[i]);
  }
  return out;
}

}  // namespace opaq
