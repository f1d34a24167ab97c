#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "opaq/abstraction.hpp"
#include "opaq/benchgen.hpp"
#include "opaq/io.hpp"
#include "opaq/pipeline.hpp"

using namespace opaq;
using nlohmann::json;

namespace {

constexpr int kExitError = 3;

// A system file or a single model, which is read as a one-component system.
ModularSystem load_any(const std::string& path, bool allow_reserved = false) {
  json j = read_json_file(path);
  if (j.is_object() && j.contains("components"))
    return system_from_json(j, path, std::filesystem::path(path).parent_path(), allow_reserved);
  Automaton a = model_from_json(j, path, allow_reserved);
  if (!j.contains("name")) a = a.renamed(std::filesystem::path(path).stem().string());
  return ModularSystem{{std::move(a)}, SecretMode::Or};
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw InputError(out_path + ": cannot write file");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json labels(const Trace& t) {
  json out = json::array();
  for (EventId e : t) out.push_back(label(e));
  return out;
}

json counterexample_json(const Counterexample& c) {
  json j{{"trace", labels(c.trace)}, {"display", to_string(c.trace)}, {"end_state", c.end_state}};
  if (!c.end_description.empty()) j["end_description"] = c.end_description;
  j["component_blame"] = c.component_blame ? json(*c.component_blame) : json(nullptr);
  return j;
}

json members_json(const Automaton& src, const StateSet& s) {
  json out = json::array();
  for (StateId x : s) out.push_back(src.state(x).name);
  return out;
}

std::string summary(const Automaton& a) {
  std::ostringstream os;
  os << a.name() << ": " << a.num_states() << " states, " << a.num_transitions() << " transitions, "
     << a.secret_states().size() << " secret";
  return os.str();
}

json summary_json(const Automaton& a) {
  json alphabet = json::array();
  std::vector<EventId> ev(a.alphabet().begin(), a.alphabet().end());
  std::sort(ev.begin(), ev.end(), event_less);
  for (EventId e : ev) alphabet.push_back(label(e));
  return {{"name", a.name()},
          {"states", a.num_states()},
          {"transitions", a.num_transitions()},
          {"secret", a.secret_states().size()},
          {"marked", a.marked_states().size()},
          {"initial", a.initial_states().size()},
          {"deterministic", a.is_deterministic()},
          {"alphabet", alphabet}};
}

int status_exit(Status s) {
  switch (s) {
    case Status::Opaque: return 0;
    case Status::NotOpaque: return 1;
    case Status::Inconclusive: return 2;
  }
  return kExitError;
}

Property parse_property(const std::string& p, std::optional<std::uint64_t> k) {
  if (p == "cso") {
    if (k) throw InputError("--k is not accepted for cso");
    return Property::current_state();
  }
  if (p == "inf") {
    if (k) throw InputError("--k is not accepted for inf");
    return Property::infinite_step();
  }
  if (p == "kstep") {
    if (!k) throw InputError("kstep needs --k");
    return Property::k_step(StepBound(*k));
  }
  throw InputError("unknown property '" + p + "' (expected cso|kstep|inf)");
}

std::vector<std::size_t> parse_scales(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t pos = 0;
      unsigned long long v = std::stoull(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw InputError("--scales: '" + item + "' is not a number");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opaq: compositional opacity verification for modular discrete event systems"};
  app.require_subcommand(1);
  bool as_json = false;
  std::string out_path;
  app.add_flag("--json", as_json, "Machine-readable output");
  app.add_option("-o,--out", out_path, "Write the main output to a file");
  app.fallthrough();

  std::string input;
  std::optional<std::string> mode_opt;

  auto* parse = app.add_subcommand("parse", "Validate a model or system and summarise it");
  parse->add_option("input", input, "Model or system file")->required();

  auto* compose = app.add_subcommand("compose", "Synchronous composition of a system");
  compose->add_option("system", input)->required();
  compose->add_option("--mode", mode_opt, "Secret combination: or|and");

  auto* abstract = app.add_subcommand("abstract", "Quotient a model by an observation equivalence");
  abstract->add_option("model", input)->required();
  bool ooe = false, marking = false;
  auto* ooe_flag = abstract->add_flag("--ooe", ooe, "Opaque observation equivalence (default)");
  abstract->add_flag("--marking", marking, "Marking observation equivalence")->excludes(ooe_flag);

  bool dot = false;
  auto* observer = app.add_subcommand("observer", "Current-state estimator of a model");
  observer->add_option("model", input)->required();
  observer->add_flag("--dot", dot, "Emit Graphviz");
  auto* twoway = app.add_subcommand("twoway", "Two-way observer of a model");
  twoway->add_option("model", input)->required();
  twoway->add_flag("--dot", dot, "Emit Graphviz");

  std::string property = "cso";
  std::optional<std::uint64_t> k;
  auto* psi = app.add_subcommand("psi", "Emit the psi-transformed components of a system");
  psi->add_option("system", input)->required();
  psi->add_option("--property", property, "cso|kstep|inf")->check(CLI::IsMember({"cso", "kstep", "inf"}));
  psi->add_option("--k", k, "Step bound for kstep");
  psi->add_option("--mode", mode_opt, "or|and");

  std::string engine = "compositional";
  std::string cex_out;
  auto* nonblocking = app.add_subcommand("nonblocking", "Nonblocking check of a model or system");
  nonblocking->add_option("system", input)->required();
  nonblocking->add_option("--engine", engine, "monolithic|compositional");
  nonblocking->add_option("--cex-out", cex_out, "Write the counterexample trace as JSON");

  std::optional<std::size_t> confirm_budget;
  std::size_t diagnosis_budget = 200000;
  bool timings = false;
  auto* verify = app.add_subcommand("verify", "Verify an opacity property");
  verify->add_option("property", property, "cso|kstep|inf")
      ->required()
      ->check(CLI::IsMember({"cso", "kstep", "inf"}));
  verify->add_option("system", input)->required();
  verify->add_option("--k", k, "Step bound for kstep");
  verify->add_option("--mode", mode_opt, "or|and (overrides the system file)");
  verify->add_option("--engine", engine, "monolithic|compositional");
  verify->add_option("--confirm-budget", confirm_budget,
                     "Retry an inconclusive K-step result monolithically within this many states");
  verify->add_option("--diagnosis-budget", diagnosis_budget, "State budget of the diagnosis");
  verify->add_flag("--timings", timings, "Report per-phase timings");

  std::string kind = "players";
  std::size_t n = 1;
  auto* gen = app.add_subcommand("gen", "Generate a scalable benchmark system");
  gen->add_option("kind", kind, "players|houses")->required();
  gen->add_option("--n", n, "Scale")->required();
  gen->add_option("--mode", mode_opt, "or|and");

  std::string scales = "10,100";
  std::string csv;
  auto* bench = app.add_subcommand("bench", "Run the benchmark harness");
  bench->add_option("--kind", kind, "players|houses");
  bench->add_option("--scales", scales, "Comma-separated scales");
  bench->add_option("--engine", engine, "monolithic|compositional");
  bench->add_option("--csv", csv, "Write rows as CSV");

  auto* exp = app.add_subcommand("export", "Export a model");
  exp->add_option("model", input)->required();
  exp->add_flag("--dot", dot, "Graphviz (the only format)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*parse) {
      ModularSystem sys = load_any(input);
      if (as_json) {
        json j{{"mode", to_string(sys.mode)}, {"components", json::array()}};
        for (const Automaton& a : sys.components) j["components"].push_back(summary_json(a));
        emit(dump(j), out_path);
      } else {
        std::string text;
        if (sys.components.size() > 1) text += "system (" + std::string(to_string(sys.mode)) + ")\n";
        for (const Automaton& a : sys.components) text += summary(a) + "\n";
        emit(text, out_path);
      }
      return 0;
    }

    if (*compose) {
      ModularSystem sys = load_any(input);
      if (mode_opt) sys.mode = parse_mode(*mode_opt);
      emit(dump(model_to_json(sync_all(sys))), out_path);
      return 0;
    }

    if (*abstract) {
      ModularSystem sys = load_any(input);
      if (sys.components.size() != 1) throw InputError(input + ": abstract expects a single model");
      const Automaton& a = sys.components[0];
      Partition p = marking ? marking_observation_equivalence(a) : opaque_observation_equivalence(a);
      Automaton q = remove_tau_selfloops(quotient(a, p));
      json blocks = json::object();
      for (StateId c = 0; c < q.num_states(); ++c) blocks[q.state(c).name] = members_json(a, p.blocks()[c]);
      emit(dump({{"relation", marking ? "marking" : "ooe"}, {"quotient", model_to_json(q)}, {"blocks", blocks}}),
           out_path);
      return 0;
    }

    if (*observer || *twoway) {
      ModularSystem sys = load_any(input);
      if (sys.components.size() != 1) throw InputError(input + ": expects a single model");
      const Automaton& a = sys.components[0];
      json states = json::array();
      Automaton obs = [&] {
        if (*observer) {
          ObserverAutomaton d = determinize(a);
          for (StateId x = 0; x < d.automaton.num_states(); ++x)
            states.push_back({{"state", d.automaton.state(x).name}, {"members", members_json(a, d.members[x])}});
          return d.automaton;
        }
        TwoWayObserver h = two_way_observer(a);
        for (StateId x = 0; x < h.automaton.num_states(); ++x)
          states.push_back({{"state", h.automaton.state(x).name},
                            {"forward", members_json(a, h.forward[x])},
                            {"reverse", members_json(a, h.reverse[x])},
                            {"violating", h.violating(x)}});
        return h.automaton;
      }();
      if (dot)
        emit(to_dot(obs), out_path);
      else
        emit(dump({{"automaton", model_to_json(obs)}, {"states", states}}), out_path);
      return 0;
    }

    if (*psi) {
      ModularSystem sys = load_any(input);
      if (mode_opt) sys.mode = parse_mode(*mode_opt);
      PsiSystem ps = build_psi_system(sys, parse_property(property, k));
      json j = system_to_json({ps.automata(), sys.mode});
      j["property"] = ps.property.to_string();
      for (std::size_t i = 0; i < ps.components.size(); ++i) {
        json names = json::array();
        for (StateId x : ps.components[i].psi.psi_states)
          names.push_back(ps.components[i].psi.automaton.state(x).name);
        j["psi_states"].push_back(names);
      }
      emit(dump(j), out_path);
      return 0;
    }

    if (*nonblocking) {
      ModularSystem sys = load_any(input, true);
      NonblockingResult r = parse_engine(engine) == Engine::Monolithic
                                ? check_nonblocking(sync_all(sys))
                                : check_nonblocking_compositional(sys.components);
      if (!cex_out.empty() && r.counterexample) {
        std::ofstream f(cex_out);
        if (!f) throw InputError(cex_out + ": cannot write file");
        f << dump(counterexample_json(*r.counterexample));
      }
      if (as_json) {
        json j{{"nonblocking", r.nonblocking}, {"max_intermediate_states", r.max_intermediate_states}};
        if (r.counterexample) j["counterexample"] = counterexample_json(*r.counterexample);
        emit(dump(j), out_path);
      } else if (r.nonblocking) {
        emit("nonblocking\n", out_path);
      } else {
        emit("blocking\ntrace: " + to_string(r.counterexample->trace) + "\n", out_path);
      }
      return r.nonblocking ? 0 : 1;
    }

    if (*verify) {
      ModularSystem sys = load_any(input);
      if (mode_opt) sys.mode = parse_mode(*mode_opt);
      Property prop = parse_property(property, k);
      VerifyOptions opts;
      opts.engine = parse_engine(engine);
      opts.confirm_budget = confirm_budget;
      opts.diagnosis_budget = diagnosis_budget;
      Verdict v = prop.kind == Property::Kind::CurrentState ? verify_cso(sys, opts)
                                                            : verify_kstep(sys, prop.k, opts);
      if (as_json) {
        json j{{"property", prop.to_string()},
               {"mode", to_string(sys.mode)},
               {"engine", to_string(opts.engine)},
               {"status", to_string(v.status)},
               {"witness", v.witness ? counterexample_json(*v.witness) : json(nullptr)},
               {"diagnosis", v.diagnosis ? json(to_string(*v.diagnosis)) : json(nullptr)},
               {"max_intermediate_states", v.max_intermediate_states}};
        if (timings)
          j["timings_ms"] = {{"ooe", v.timings.ooe_ms},
                             {"observer", v.timings.observer_ms},
                             {"nonblocking", v.timings.nonblocking_ms},
                             {"diagnosis", v.timings.diagnosis_ms}};
        emit(dump(j), out_path);
      } else {
        std::ostringstream os;
        os << "verdict: " << to_string(v.status) << "\n";
        if (v.witness) {
          os << "witness: " << to_string(v.witness->trace) << "\n";
          if (v.witness->component_blame) {
            std::size_t c = *v.witness->component_blame;
            os << "blame: component " << c + 1;
            if (c < sys.components.size()) os << " (" << sys.components[c].name() << ")";
            os << "\n";
          }
        }
        if (v.diagnosis) os << "diagnosis: " << to_string(*v.diagnosis) << "\n";
        os << "max intermediate states: " << v.max_intermediate_states << "\n";
        if (timings)
          os << "timings (ms): ooe " << v.timings.ooe_ms << ", observer " << v.timings.observer_ms
             << ", nonblocking " << v.timings.nonblocking_ms << ", diagnosis " << v.timings.diagnosis_ms
             << "\n";
        emit(os.str(), out_path);
      }
      return status_exit(v.status);
    }

    if (*gen) {
      ModularSystem sys =
          generate({parse_benchmark_kind(kind), n, mode_opt ? parse_mode(*mode_opt) : SecretMode::Or});
      emit(dump(system_to_json(sys)), out_path);
      return 0;
    }

    if (*bench) {
      auto rows = run_harness(parse_benchmark_kind(kind), parse_scales(scales), parse_engine(engine));
      if (!csv.empty()) {
        std::ofstream f(csv);
        if (!f) throw InputError(csv + ": cannot write file");
        write_csv(f, rows);
      }
      std::ostringstream os;
      if (as_json) {
        std::ostringstream c;
        write_csv(c, rows);
        os << dump({{"hardware", hardware_summary()}, {"csv", c.str()}});
      } else {
        os << hardware_summary() << "\n";
        write_table(os, rows);
      }
      emit(os.str(), out_path);
      return 0;
    }

    if (*exp) {
      ModularSystem sys = load_any(input, true);
      if (sys.components.size() != 1) throw InputError(input + ": export expects a single model");
      emit(to_dot(sys.components[0]), out_path);
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "opaq: error: " << e.what() << "\n";
    return kExitError;
  } catch (const BudgetExceeded& e) {
    std::cerr << "opaq: budget exceeded: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "opaq: internal error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
