#include "opaq/compose.hpp"

#include <algorithm>
#include <unordered_map>

namespace opaq {

namespace {

struct PairHash {
  std::size_t operator()(std::uint64_t k) const noexcept { return std::hash<std::uint64_t>{}(k); }
};

void append_coords(const Automaton& a, StateId s, std::vector<StateId>& out) {
  if (a.origin_kind() == OriginKind::Tuple) {
    auto o = a.origin(s);
    out.insert(out.end(), o.begin(), o.end());
  } else {
    out.push_back(s);
  }
}

std::string strip_parens(const Automaton& a, StateId s) {
  const std::string& n = a.state(s).name;
  if (a.origin_kind() == OriginKind::Tuple && n.size() >= 2 && n.front() == '(' && n.back() == ')')
    return n.substr(1, n.size() - 2);
  return n;
}

}  // namespace

Automaton sync(const Automaton& a, const Automaton& b, SecretMode mode, const SyncOptions& opts) {
  AutomatonBuilder out(a.name().empty() || b.name().empty() ? a.name() + b.name()
                                                           : a.name() + "||" + b.name());
  out.set_origin_kind(OriginKind::Tuple);
  out.add_events(a.alphabet());
  out.add_events(b.alphabet());

  std::unordered_map<std::uint64_t, StateId, PairHash> index;
  std::vector<std::pair<StateId, StateId>> pairs;
  auto key = [](StateId x, StateId y) { return (std::uint64_t(x) << 32) | y; };
  auto get = [&](StateId x, StateId y, bool initial) -> StateId {
    auto [it, fresh] = index.try_emplace(key(x, y), static_cast<StateId>(pairs.size()));
    if (fresh) {
      if (pairs.size() >= opts.max_states)
        throw BudgetExceeded("synchronous product exceeds " + std::to_string(opts.max_states) +
                             " states");
      pairs.emplace_back(x, y);
      const StateInfo& sa = a.state(x);
      const StateInfo& sb = b.state(y);
      StateInfo info;
      if (opts.names) info.name = "(" + strip_parens(a, x) + "," + strip_parens(b, y) + ")";
      info.initial = initial;
      info.marked = sa.marked && sb.marked;
      info.secret = mode == SecretMode::Or ? (sa.secret || sb.secret) : (sa.secret && sb.secret);
      StateId id = out.add_state(std::move(info));
      std::vector<StateId> coords;
      append_coords(a, x, coords);
      append_coords(b, y, coords);
      out.set_origin(id, std::move(coords));
    }
    return it->second;
  };

  for (StateId x : a.initial_states())
    for (StateId y : b.initial_states()) get(x, y, true);

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [x, y] = pairs[i];
    auto src = static_cast<StateId>(i);
    for (const Transition& t : a.out(x)) {
      if (t.event != kTau && b.has_event(t.event)) {
        for (const Transition& u : b.out(y, t.event))
          out.add_transition(src, t.event, get(t.dst, u.dst, false));
      } else {
        out.add_transition(src, t.event, get(t.dst, y, false));
      }
    }
    for (const Transition& u : b.out(y)) {
      if (u.event == kTau || !a.has_event(u.event))
        out.add_transition(src, u.event, get(x, u.dst, false));
    }
  }
  return std::move(out).build();
}

Automaton sync_all(const ModularSystem& sys, const SyncOptions& opts) {
  if (sys.components.empty()) throw InputError("sync_all: empty system");
  if (sys.components.size() == 1) return sys.components.front();
  auto plain = [](const Automaton& c) {
    return c.origin_kind() == OriginKind::Tuple ? c.without_origin() : c;
  };
  Automaton acc = sync(plain(sys.components[0]), plain(sys.components[1]), sys.mode, opts);
  for (std::size_t i = 2; i < sys.components.size(); ++i)
    acc = sync(acc, plain(sys.components[i]), sys.mode, opts);
  // Re-evaluate secrecy on full tuples. With a uniform mode this equals the nested value,
  // but the tuple rule is the definition.
  std::vector<StateInfo> infos(acc.states().begin(), acc.states().end());
  for (StateId s = 0; s < acc.num_states(); ++s) {
    auto coords = acc.origin(s);
    bool any = false, all = true;
    for (std::size_t j = 0; j < coords.size(); ++j) {
      bool sec = sys.components[j].state(coords[j]).secret;
      any |= sec;
      all &= sec;
    }
    infos[s].secret = sys.mode == SecretMode::Or ? any : all;
  }
  return acc.with_flags(infos);
}

std::optional<EventId> project_event(EventId sigma, std::span<const EventId> target_alphabet) {
  if (std::binary_search(target_alphabet.begin(), target_alphabet.end(), sigma)) return sigma;
  return std::nullopt;
}

Trace project_trace(const Trace& t, std::span<const EventId> target_alphabet) {
  Trace r;
  for (EventId e : t)
    if (auto p = project_event(e, target_alphabet)) r.push_back(*p);
  return r;
}

const char* to_string(SecretMode m) { return m == SecretMode::Or ? "or" : "and"; }

SecretMode parse_mode(std::string_view s) {
  if (s == "or" || s == "OR") return SecretMode::Or;
  if (s == "and" || s == "AND") return SecretMode::And;
  throw InputError("unknown secret mode '" + std::string(s) + "' (expected or|and)");
}

}  // namespace opaq
