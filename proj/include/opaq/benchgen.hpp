#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "opaq/pipeline.hpp"

namespace opaq {

enum class BenchmarkKind { Players, Houses };

struct BenchmarkSpec {
  BenchmarkKind kind = BenchmarkKind::Players;
  std::size_t n = 1;  // player pairs (Players) or houses (Houses); 2n automata either way
  SecretMode mode = SecretMode::Or;
};

// Players: n independent rooms, each with its own players A and B.
// Houses: n rooms in series; a player leaving room h enters room h+1.
ModularSystem generate(const BenchmarkSpec& spec);

struct HarnessRow {
  BenchmarkKind kind;
  std::size_t n = 0;
  std::size_t automata = 0;
  Status status = Status::Opaque;
  PhaseTimings timings;
  std::size_t max_intermediate_states = 0;
  std::size_t monolithic_bound_log10 = 0;  // log10 of the product of component sizes
};

std::vector<HarnessRow> run_harness(BenchmarkKind kind, const std::vector<std::size_t>& scales,
                                    Engine engine);

void write_csv(std::ostream& os, const std::vector<HarnessRow>& rows);
void write_table(std::ostream& os, const std::vector<HarnessRow>& rows);
std::string hardware_summary();

BenchmarkKind parse_benchmark_kind(std::string_view s);
const char* to_string(BenchmarkKind k);

}  // namespace opaq
