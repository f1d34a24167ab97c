#include "opaq/pipeline.hpp"

#include <chrono>

namespace opaq {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Verdict monolithic(const ModularSystem& sys, std::optional<StepBound> k,
                   std::size_t budget = SIZE_MAX) {
  auto t0 = Clock::now();
  SyncOptions so;
  so.max_states = budget;
  Automaton mono = sync_all(sys, so);
  Verdict v = k ? oracle_kstep(mono, *k) : oracle_cso(mono);
  v.max_intermediate_states = mono.num_states();
  v.timings.observer_ms = ms_since(t0);
  return v;
}

}  // namespace

Verdict verify_cso(const ModularSystem& sys, const VerifyOptions& opts) {
  if (opts.engine == Engine::Monolithic) return monolithic(sys, std::nullopt);
  PsiSystem psi = build_psi_system(sys, Property::current_state());
  Verdict v;
  v.timings.ooe_ms = psi.ooe_ms;
  v.timings.observer_ms = psi.observer_ms;
  auto t0 = Clock::now();
  NonblockingResult nb = check_nonblocking_compositional(psi.automata());
  v.timings.nonblocking_ms = ms_since(t0);
  v.max_intermediate_states = nb.max_intermediate_states;
  if (!nb.nonblocking) {
    v.status = Status::NotOpaque;
    v.witness = nb.counterexample;
  }
  return v;
}

Verdict verify_kstep(const ModularSystem& sys, StepBound k, const VerifyOptions& opts) {
  if (k == StepBound(0)) return verify_cso(sys, opts);
  if (opts.engine == Engine::Monolithic) return monolithic(sys, k);
  PsiSystem psi = build_psi_system(sys, Property::k_step(k));
  Verdict v;
  v.timings.ooe_ms = psi.ooe_ms;
  v.timings.observer_ms = psi.observer_ms;
  auto t0 = Clock::now();
  NonblockingResult nb = check_nonblocking_compositional(psi.automata());
  v.timings.nonblocking_ms = ms_since(t0);
  v.max_intermediate_states = nb.max_intermediate_states;
  if (nb.nonblocking) return v;

  v.witness = nb.counterexample;
  t0 = Clock::now();
  Diagnosis d = diagnose_overapprox(sys, psi, *nb.counterexample, opts.diagnosis_budget);
  v.diagnosis = d;
  v.status = d == Diagnosis::GenuineViolationConfirmed ? Status::NotOpaque : Status::Inconclusive;
  if (v.status == Status::Inconclusive && opts.confirm_budget) {
    try {
      Verdict m = monolithic(sys, k, *opts.confirm_budget);
      v.status = m.status;
      v.witness = m.witness;
    } catch (const BudgetExceeded&) {
    }
  }
  v.timings.diagnosis_ms = ms_since(t0);
  return v;
}

Engine parse_engine(std::string_view s) {
  if (s == "monolithic") return Engine::Monolithic;
  if (s == "compositional") return Engine::Compositional;
  throw InputError("unknown engine '" + std::string(s) + "' (expected monolithic|compositional)");
}

const char* to_string(Engine e) { return e == Engine::Monolithic ? "monolithic" : "compositional"; }

}  // namespace opaq
