#include "opaq/observers.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "opaq/compose.hpp"

namespace opaq {

namespace {

bool all_secret(const Automaton& a, const StateSet& s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [&](StateId x) { return a.state(x).secret; });
}

}  // namespace

ObserverAutomaton determinize(const Automaton& a) {
  ObserverAutomaton obs;
  obs.source = std::make_shared<const Automaton>(a);
  AutomatonBuilder b(a.name());
  b.set_origin_kind(OriginKind::Members);
  b.add_events(a.alphabet());
  std::unordered_map<StateSet, StateId, StateSetHash> index;
  auto get = [&](StateSet set, bool initial) -> StateId {
    auto it = index.find(set);
    if (it != index.end()) return it->second;
    StateInfo info;
    info.name = set_name(a, set);
    info.initial = initial;
    info.secret = all_secret(a, set);
    info.marked = std::any_of(set.begin(), set.end(), [&](StateId x) { return a.state(x).marked; });
    StateId id = b.add_state(std::move(info));
    b.set_origin(id, set);
    index.emplace(set, id);
    obs.members.push_back(std::move(set));
    return id;
  };
  get(ur(a, a.initial_states()), true);
  for (std::size_t i = 0; i < obs.members.size(); ++i) {
    for (EventId e : a.alphabet()) {
      StateSet next = weak_successors(a, obs.members[i], e);
      if (next.empty()) continue;
      StateId dst = get(std::move(next), false);
      b.add_transition(static_cast<StateId>(i), e, dst);
    }
  }
  obs.automaton = std::move(b).build();
  return obs;
}

StateSet TwoWayObserver::intersection(StateId h) const {
  StateSet r;
  std::set_intersection(forward[h].begin(), forward[h].end(), reverse[h].begin(),
                        reverse[h].end(), std::back_inserter(r));
  return r;
}

bool TwoWayObserver::violating(StateId h) const { return all_secret(*source, intersection(h)); }

TwoWayObserver two_way_observer(const Automaton& a) {
  ObserverAutomaton fwd = determinize(a);
  ObserverAutomaton rev = determinize(reverse(a));
  Automaton product = sync(rename_forward(fwd.automaton.without_origin()),
                           rename_reverse(rev.automaton.without_origin()), SecretMode::Or);
  TwoWayObserver h;
  h.source = fwd.source;
  std::vector<StateInfo> infos(product.states().begin(), product.states().end());
  for (StateId s = 0; s < product.num_states(); ++s) {
    auto o = product.origin(s);
    h.forward.push_back(fwd.members[o[0]]);
    h.reverse.push_back(rev.members[o[1]]);
  }
  h.automaton = product.renamed(a.name());
  for (StateId s = 0; s < product.num_states(); ++s) {
    infos[s].secret = h.violating(s);
    infos[s].marked = true;
  }
  h.automaton = h.automaton.with_flags(infos);
  return h;
}

Trace ReverseCounts::path_to(StateId h) const {
  Trace t;
  for (StateId y = h; parent[y] != UINT32_MAX; y = parent[y]) t.push_back(via[y]);
  std::reverse(t.begin(), t.end());
  return t;
}

ReverseCounts min_reverse_counts(const Automaton& h) {
  const auto n = h.num_states();
  ReverseCounts rc;
  rc.count.assign(n, UINT64_MAX);
  rc.parent.assign(n, UINT32_MAX);
  rc.via.assign(n, kTau);
  std::deque<StateId> dq;
  for (StateId s : h.initial_states()) {
    rc.count[s] = 0;
    dq.push_back(s);
  }
  const auto events = canonical_events(h);
  while (!dq.empty()) {
    StateId x = dq.front();
    dq.pop_front();
    for (EventId e : events) {
      const std::uint64_t w = kind(e) == EventKind::Reverse ? 1 : 0;
      for (const Transition& t : h.out(x, e)) {
        if (rc.count[x] + w < rc.count[t.dst]) {
          rc.count[t.dst] = rc.count[x] + w;
          rc.parent[t.dst] = x;
          rc.via[t.dst] = e;
          if (w == 0)
            dq.push_front(t.dst);
          else
            dq.push_back(t.dst);
        }
      }
    }
  }
  return rc;
}

Verdict oracle_cso(const Automaton& a) {
  ObserverAutomaton d = determinize(a);
  Verdict v;
  auto path = shortest_path(d.automaton, [&](StateId x) { return d.automaton.state(x).secret; });
  if (path) {
    v.status = Status::NotOpaque;
    v.witness = Counterexample{path->trace, {path->end}, d.automaton.state(path->end).name, {}};
  }
  return v;
}

namespace {

Counterexample two_way_witness(const TwoWayObserver& h, const Trace& t, StateId end) {
  return Counterexample{t, {end}, "(" + set_name(*h.source, h.forward[end]) + "," +
                                      set_name(*h.source, h.reverse[end]) + ")",
                        {}};
}

}  // namespace

Verdict oracle_infinite(const Automaton& a) {
  TwoWayObserver h = two_way_observer(a);
  Verdict v;
  auto path = shortest_path(h.automaton, [&](StateId x) { return h.violating(x); });
  if (path) {
    v.status = Status::NotOpaque;
    v.witness = two_way_witness(h, path->trace, path->end);
  }
  return v;
}

Verdict oracle_kstep(const Automaton& a, StepBound k) {
  if (k.is_infinite()) return oracle_infinite(a);
  TwoWayObserver h = two_way_observer(a);
  ReverseCounts rc = min_reverse_counts(h.automaton);
  Verdict v;
  std::optional<StateId> best;
  for (StateId x = 0; x < h.automaton.num_states(); ++x) {
    if (rc.count[x] == UINT64_MAX || !k.admits(rc.count[x]) || !h.violating(x)) continue;
    if (!best || rc.count[x] < rc.count[*best]) best = x;
  }
  if (best) {
    v.status = Status::NotOpaque;
    v.witness = two_way_witness(h, rc.path_to(*best), *best);
  }
  return v;
}

Trace decode_forward(const Trace& t) {
  Trace r;
  for (EventId e : t)
    if (kind(e) == EventKind::Forward) r.push_back(EventTable::global().info(e).base);
  return r;
}

Trace decode_reverse(const Trace& t) {
  Trace r;
  for (EventId e : t)
    if (kind(e) == EventKind::Reverse) r.push_back(EventTable::global().info(e).base);
  return r;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Opaque: return "opaque";
    case Status::NotOpaque: return "not_opaque";
    case Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(Diagnosis d) {
  switch (d) {
    case Diagnosis::GenuineViolationConfirmed: return "genuine_violation_confirmed";
    case Diagnosis::OverApproximation: return "over_approximation";
    case Diagnosis::Unknown: return "unknown";
  }
  return "?";
}

}  // namespace opaq
