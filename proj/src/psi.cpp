#include "opaq/psi.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "opaq/abstraction.hpp"

namespace opaq {

std::string Property::to_string() const {
  if (kind == Kind::CurrentState) return "cso";
  if (k.is_infinite()) return "inf";
  return "kstep(" + k.to_string() + ")";
}

namespace {

bool subset_of(const StateSet& s, const StateSet& secrets) {
  return !s.empty() && std::includes(secrets.begin(), secrets.end(), s.begin(), s.end());
}

}  // namespace

StateSet psi_states_cso(const ObserverAutomaton& d, const StateSet& secrets) {
  StateSet r;
  for (StateId x = 0; x < d.members.size(); ++x)
    if (subset_of(d.members[x], secrets)) r.push_back(x);
  return r;
}

StateSet psi_states_kstep(const TwoWayObserver& h, const StateSet& secrets, StepBound k) {
  StateSet r;
  ReverseCounts rc;
  if (!k.is_infinite()) rc = min_reverse_counts(h.automaton);
  for (StateId x = 0; x < h.automaton.num_states(); ++x) {
    if (!subset_of(h.intersection(x), secrets)) continue;
    if (!k.is_infinite() && (rc.count[x] == UINT64_MAX || !k.admits(rc.count[x]))) continue;
    r.push_back(x);
  }
  return r;
}

PsiAutomaton attach_psi(const Automaton& d, const StateSet& psi_states, EventId psi_event) {
  if (!d.is_deterministic()) throw InputError("attach_psi: automaton '" + d.name() + "' is not deterministic");
  if (psi_event == kTau || d.has_event(psi_event))
    throw InputError("attach_psi: event '" + label(psi_event) + "' is not fresh for '" + d.name() + "'");
  PsiAutomaton p;
  p.psi_event = psi_event;
  p.psi_states = psi_states;
  std::sort(p.psi_states.begin(), p.psi_states.end());
  AutomatonBuilder b(d.name());
  b.set_origin_kind(d.origin_kind());
  for (StateId s = 0; s < d.num_states(); ++s) {
    StateInfo info = d.state(s);
    info.marked = true;
    b.add_state(std::move(info));
    if (d.origin_kind() != OriginKind::None) b.set_origin(s, {d.origin(s).begin(), d.origin(s).end()});
  }
  b.add_events(d.alphabet());
  b.add_event(psi_event);
  for (const Transition& t : d.transitions()) b.add_transition(t.src, t.event, t.dst);
  if (!p.psi_states.empty()) {
    StateId dump = b.add_state("⊥", false, false, false);
    p.dump = dump;
    for (StateId s : p.psi_states) {
      if (s >= d.num_states()) throw InputError("attach_psi: psi state out of range");
      b.add_transition(s, psi_event, dump);
    }
  }
  p.automaton = std::move(b).build();
  return p;
}

std::vector<Automaton> PsiSystem::automata() const {
  std::vector<Automaton> r;
  r.reserve(components.size());
  for (const auto& c : components) r.push_back(c.psi.automaton);
  return r;
}

unsigned worker_threads() {
  if (const char* env = std::getenv("OPAQ_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

template <class Fn>
void parallel_for(std::size_t n, Fn fn) {
  unsigned threads = std::min<std::size_t>(worker_threads(), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

PsiSystem build_psi_system(const ModularSystem& sys, const Property& property) {
  if (sys.components.empty()) throw InputError("build_psi_system: empty system");
  const std::size_t n = sys.components.size();
  PsiSystem out;
  out.mode = sys.mode;
  out.property = property;
  std::vector<Automaton> abstracted(n);
  std::vector<Partition> classes(n);

  auto t0 = std::chrono::steady_clock::now();
  parallel_for(n, [&](std::size_t i) {
    const Automaton& g = sys.components[i];
    classes[i] = opaque_observation_equivalence(g);
    abstracted[i] = remove_tau_selfloops(quotient(g, classes[i]));
  });
  out.ooe_ms = ms_since(t0);

  // Intern psi events up front so ids do not depend on thread scheduling.
  std::vector<EventId> psi_events(n);
  for (std::size_t i = 0; i < n; ++i)
    psi_events[i] = EventTable::global().psi(sys.mode == SecretMode::Or ? i + 1 : 0);
  if (property.kind == Property::Kind::KStep)
    for (const Automaton& g : sys.components)
      for (EventId e : g.alphabet()) {
        EventTable::global().forward(e);
        EventTable::global().reverse(e);
      }

  std::vector<std::optional<PsiComponent>> comps(n);
  t0 = std::chrono::steady_clock::now();
  parallel_for(n, [&](std::size_t i) {
    const Automaton& g = abstracted[i];
    StateSet secrets = g.secret_states();
    if (property.kind == Property::Kind::CurrentState) {
      ObserverAutomaton d = determinize(g);
      StateSet ps = psi_states_cso(d, secrets);
      PsiAutomaton p = attach_psi(d.automaton, ps, psi_events[i]);
      comps[i] = PsiComponent{g, classes[i], std::move(d), std::move(p)};
    } else {
      TwoWayObserver h = two_way_observer(g);
      StateSet ps = psi_states_kstep(h, secrets, property.k);
      PsiAutomaton p = attach_psi(h.automaton, ps, psi_events[i]);
      comps[i] = PsiComponent{g, classes[i], std::move(h), std::move(p)};
    }
  });
  out.observer_ms = ms_since(t0);
  for (auto& c : comps) out.components.push_back(std::move(*c));
  return out;
}

}  // namespace opaq
