#include "opaq/benchgen.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "opaq/psi.hpp"

namespace opaq {

namespace {

std::string ev(std::size_t house, const char* name) {
  return "h" + std::to_string(house) + "." + name;
}

// Player A of a room. Secret: R4, entered and left unobservably from R3.
// In a chained house the player starts outside and enters R1 on `entry`.
Automaton player_a(std::size_t h, std::optional<EventId> entry) {
  AutomatonBuilder b("A" + std::to_string(h));
  bool outside = entry.has_value();
  StateId r1 = b.add_state("R1", !outside, true, false);
  StateId r2 = b.add_state("R2");
  StateId r3 = b.add_state("R3");
  StateId r4 = b.add_state("R4", false, false, true);
  StateId r5 = b.add_state("R5");
  EventId a2 = event(ev(h, "uA2")), u3 = event(ev(h, "u3")), a5 = event(ev(h, "uA5")),
          a1 = event(ev(h, "uA1"));
  b.add_events(std::vector<EventId>{a2, u3, a5, a1});
  b.add_transition(r1, a2, r2);
  b.add_transition(r2, u3, r3);
  b.add_transition(r3, kTau, r4);
  b.add_transition(r4, kTau, r3);
  b.add_transition(r3, a5, r5);
  b.add_transition(r5, a1, r1);
  if (outside) {
    StateId out = b.add_state("out", true, false, false);
    b.add_event(*entry);
    b.add_transition(out, *entry, r1);
    for (StateId s : {r1, r2, r3, r4, r5}) b.add_transition(s, *entry, s);
  }
  return std::move(b).build();
}

// Player B of a room. Secret: R5. Starts in R1 or R2; returns from R3 directly or via R5.
Automaton player_b(std::size_t h, std::optional<EventId> entry) {
  AutomatonBuilder b("B" + std::to_string(h));
  bool outside = entry.has_value();
  StateId r1 = b.add_state("R1", !outside, true, false);
  StateId r2 = b.add_state("R2", !outside, false, false);
  StateId r3 = b.add_state("R3");
  StateId r5 = b.add_state("R5", false, false, true);
  EventId b2 = event(ev(h, "uB2")), u3 = event(ev(h, "u3")), b1 = event(ev(h, "uB1")),
          b5 = event(ev(h, "uB5")), b1p = event(ev(h, "uB1'"));
  b.add_events(std::vector<EventId>{b2, u3, b1, b5, b1p});
  b.add_transition(r1, b2, r2);
  b.add_transition(r2, u3, r3);
  b.add_transition(r3, b1, r1);
  b.add_transition(r3, b5, r5);
  b.add_transition(r5, b1p, r1);
  if (outside) {
    StateId out = b.add_state("out", true, false, false);
    b.add_event(*entry);
    b.add_transition(out, *entry, r1);
    for (StateId s : {r1, r2, r3, r5}) b.add_transition(s, *entry, s);
  }
  return std::move(b).build();
}

}  // namespace

ModularSystem generate(const BenchmarkSpec& spec) {
  if (spec.n == 0) throw InputError("benchmark scale n must be at least 1");
  ModularSystem sys;
  sys.mode = spec.mode;
  sys.components.reserve(2 * spec.n);
  for (std::size_t h = 1; h <= spec.n; ++h) {
    std::optional<EventId> entry_a, entry_b;
    if (spec.kind == BenchmarkKind::Houses && h > 1) {
      entry_a = event(ev(h - 1, "uA1"));
      entry_b = event(ev(h - 1, "uB1'"));
    }
    sys.components.push_back(player_a(h, entry_a));
    sys.components.push_back(player_b(h, entry_b));
  }
  return sys;
}

std::vector<HarnessRow> run_harness(BenchmarkKind kind, const std::vector<std::size_t>& scales,
                                    Engine engine) {
  std::vector<HarnessRow> rows;
  for (std::size_t n : scales) {
    ModularSystem sys = generate({kind, n, SecretMode::Or});
    VerifyOptions opts;
    opts.engine = engine;
    Verdict v = verify_cso(sys, opts);
    HarnessRow r;
    r.kind = kind;
    r.n = n;
    r.automata = sys.components.size();
    r.status = v.status;
    r.timings = v.timings;
    r.max_intermediate_states = v.max_intermediate_states;
    double lg = 0;
    for (const Automaton& c : sys.components) lg += std::log10(double(c.num_states()));
    r.monolithic_bound_log10 = static_cast<std::size_t>(lg);
    rows.push_back(r);
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<HarnessRow>& rows) {
  os << "model,n,automata,opaque,ooe_ms,cse_ms,nonb_ms,total_ms,max_intermediate_states,"
        "product_bound_log10\n";
  os << std::fixed << std::setprecision(3);
  for (const HarnessRow& r : rows) {
    os << to_string(r.kind) << ',' << r.n << ',' << r.automata << ','
       << (r.status == Status::Opaque ? "True" : r.status == Status::NotOpaque ? "False" : "Unknown")
       << ',' << r.timings.ooe_ms << ',' << r.timings.observer_ms << ',' << r.timings.nonblocking_ms
       << ',' << r.timings.total_ms() << ',' << r.max_intermediate_states << ','
       << r.monolithic_bound_log10 << '\n';
  }
}

void write_table(std::ostream& os, const std::vector<HarnessRow>& rows) {
  os << std::left << std::setw(8) << "Model" << std::right << std::setw(7) << "n" << std::setw(7)
     << "Aut" << std::setw(9) << "Opaque" << std::setw(11) << "OOE(ms)" << std::setw(11)
     << "CSE(ms)" << std::setw(11) << "Nonb.(ms)" << std::setw(10) << "MaxInt" << '\n';
  os << std::fixed << std::setprecision(1);
  for (const HarnessRow& r : rows) {
    os << std::left << std::setw(8) << to_string(r.kind) << std::right << std::setw(7) << r.n
       << std::setw(7) << r.automata << std::setw(9)
       << (r.status == Status::Opaque ? "True" : r.status == Status::NotOpaque ? "False" : "?")
       << std::setw(11) << r.timings.ooe_ms << std::setw(11) << r.timings.observer_ms
       << std::setw(11) << r.timings.nonblocking_ms << std::setw(10) << r.max_intermediate_states
       << '\n';
  }
}

std::string hardware_summary() {
  std::ostringstream os;
  os << "threads=" << worker_threads() << " hw_concurrency=" << std::thread::hardware_concurrency();
#if defined(__clang__)
  os << " compiler=clang-" << __clang_major__ << "." << __clang_minor__;
#elif defined(__GNUC__)
  os << " compiler=gcc-" << __GNUC__ << "." << __GNUC_MINOR__;
#endif
  return os.str();
}

BenchmarkKind parse_benchmark_kind(std::string_view s) {
  if (s == "players") return BenchmarkKind::Players;
  if (s == "houses") return BenchmarkKind::Houses;
  throw InputError("unknown benchmark kind '" + std::string(s) + "' (expected players|houses)");
}

const char* to_string(BenchmarkKind k) { return k == BenchmarkKind::Players ? "players" : "houses"; }

}  // namespace opaq
