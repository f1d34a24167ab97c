#include "opaq/automaton.hpp"

#include <algorithm>

namespace opaq {

std::size_t StateSetHash::operator()(const StateSet& s) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (StateId x : s) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

bool Automaton::has_event(EventId e) const {
  return std::binary_search(alphabet_.begin(), alphabet_.end(), e);
}

std::optional<StateId> Automaton::find_state(std::string_view name) const {
  for (StateId s = 0; s < states_.size(); ++s)
    if (states_[s].name == name) return s;
  return std::nullopt;
}

std::span<const Transition> Automaton::out(StateId s) const {
  return std::span<const Transition>(transitions_).subspan(out_begin_[s],
                                                           out_begin_[s + 1] - out_begin_[s]);
}

std::span<const Transition> Automaton::out(StateId s, EventId e) const {
  auto all = out(s);
  auto lo = std::lower_bound(all.begin(), all.end(), e,
                             [](const Transition& t, EventId ev) { return t.event < ev; });
  auto hi = std::upper_bound(lo, all.end(), e,
                             [](EventId ev, const Transition& t) { return ev < t.event; });
  return std::span<const Transition>(lo, hi);
}

static StateSet collect(const std::vector<StateInfo>& states, bool StateInfo::*flag) {
  StateSet r;
  for (StateId s = 0; s < states.size(); ++s)
    if (states[s].*flag) r.push_back(s);
  return r;
}

StateSet Automaton::initial_states() const { return collect(states_, &StateInfo::initial); }
StateSet Automaton::marked_states() const { return collect(states_, &StateInfo::marked); }
StateSet Automaton::secret_states() const { return collect(states_, &StateInfo::secret); }

std::span<const StateId> Automaton::origin(StateId s) const {
  if (origin_kind_ == OriginKind::None) return {};
  return std::span<const StateId>(origin_data_).subspan(origin_begin_[s],
                                                        origin_begin_[s + 1] - origin_begin_[s]);
}

bool Automaton::has_tau() const {
  return std::any_of(transitions_.begin(), transitions_.end(),
                     [](const Transition& t) { return t.event == kTau; });
}

bool Automaton::is_deterministic() const {
  if (initial_states().size() != 1) return false;
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    if (transitions_[i].event == kTau) return false;
    if (i > 0 && transitions_[i - 1].src == transitions_[i].src &&
        transitions_[i - 1].event == transitions_[i].event)
      return false;
  }
  return true;
}

Automaton Automaton::with_flags(const std::vector<StateInfo>& infos) const {
  if (infos.size() != states_.size()) throw InputError("with_flags: state count mismatch");
  Automaton a = *this;
  a.states_ = infos;
  if (a.initial_states().empty()) throw InputError("automaton '" + name_ + "' has no initial state");
  return a;
}

Automaton Automaton::renamed(std::string name) const {
  Automaton a = *this;
  a.name_ = std::move(name);
  return a;
}

Automaton Automaton::without_origin() const {
  Automaton a = *this;
  a.origin_kind_ = OriginKind::None;
  a.origin_begin_.clear();
  a.origin_data_.clear();
  return a;
}

AutomatonBuilder::AutomatonBuilder(std::string name) : name_(std::move(name)) {}

StateId AutomatonBuilder::add_state(StateInfo info) {
  states_.push_back(std::move(info));
  origins_.emplace_back();
  return static_cast<StateId>(states_.size() - 1);
}

StateId AutomatonBuilder::add_state(std::string name, bool initial, bool marked, bool secret) {
  return add_state(StateInfo{std::move(name), initial, marked, secret});
}

void AutomatonBuilder::add_event(EventId e) {
  if (e == kTau) throw InputError("tau cannot be part of an alphabet");
  alphabet_.push_back(e);
}

void AutomatonBuilder::add_events(std::span<const EventId> es) {
  for (EventId e : es) add_event(e);
}

void AutomatonBuilder::add_transition(StateId src, EventId e, StateId dst) {
  transitions_.push_back({src, e, dst});
}

void AutomatonBuilder::set_origin(StateId s, std::vector<StateId> origin) {
  origins_.at(s) = std::move(origin);
}

Automaton AutomatonBuilder::build() && {
  Automaton a;
  a.name_ = std::move(name_);
  std::sort(alphabet_.begin(), alphabet_.end());
  alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
  a.alphabet_ = std::move(alphabet_);
  const auto n = states_.size();
  for (const Transition& t : transitions_) {
    if (t.src >= n || t.dst >= n)
      throw InputError("automaton '" + a.name_ + "': transition refers to an undeclared state");
    if (t.event != kTau && !a.has_event(t.event))
      throw InputError("automaton '" + a.name_ + "': event '" + label(t.event) +
                       "' is not in the alphabet");
  }
  if (std::none_of(states_.begin(), states_.end(), [](const StateInfo& s) { return s.initial; }))
    throw InputError("automaton '" + a.name_ + "' has no initial state");
  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
  a.out_begin_.assign(n + 1, 0);
  for (const Transition& t : transitions_) ++a.out_begin_[t.src + 1];
  for (std::size_t i = 0; i < n; ++i) a.out_begin_[i + 1] += a.out_begin_[i];
  a.transitions_ = std::move(transitions_);
  a.states_ = std::move(states_);
  a.origin_kind_ = origin_kind_;
  if (origin_kind_ != OriginKind::None) {
    a.origin_begin_.reserve(n + 1);
    a.origin_begin_.push_back(0);
    for (auto& o : origins_) {
      a.origin_data_.insert(a.origin_data_.end(), o.begin(), o.end());
      a.origin_begin_.push_back(static_cast<std::uint32_t>(a.origin_data_.size()));
    }
  }
  return a;
}

std::string set_name(const Automaton& a, const StateSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += a.state(s[i]).name;
  }
  return out + "}";
}

}  // namespace opaq
