#pragma once

// Command-line layer: turns a RunConfig into a Dataset (metadata plus one or
// more tables) and serializes it as CSV or JSON. Argument parsing lives in
// main_entry so the tool's main() stays a one-liner and tests can
// drive the full surface in-process.

#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "esl/families.hpp"
#include "esl/fock.hpp"
#include "esl/observables.hpp"
#include "esl/quasiprob.hpp"

namespace esl::cli {

enum class Command {
  photon_dist,
  stats,
  phase_dist,
  quadrature,
  husimi,
  wigner,
  build_empty,
  empty_fock,
  validate,
  figure,
};

enum class Format { csv, json };

enum class FamilyKind { coherent, r_state, norm_varying };

const char* to_string(Command c);
std::optional<Command> parse_command(std::string_view name);
const char* to_string(FamilyKind f);

// Exit statuses of the tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitTruncation = 3;
inline constexpr int kExitDivergence = 4;
inline constexpr int kExitCondition = 5;

struct RunConfig {
  Command command = Command::stats;

  // EC parameter points. Series commands (photon-dist, phase-dist) put one
  // column per point; sweeps (stats, quadrature) one row per point; grids one
  // block per point.
  std::vector<ECParams> points;

  // Splits sweep rows into consecutive blocks of this many points (0 = one
  // block), labelled by series_labels when given.
  std::size_t series_length = 0;
  std::vector<std::string> series_labels;

  // build-empty / empty-fock on the R family.
  FamilyKind family = FamilyKind::coherent;
  std::optional<RStateParams> r_params;
  double source_phase = 0.0;

  std::optional<GridSpec> grid;
  bool numeric = false;  // husimi/wigner through the Fock-space routines
  int phase_resolution = kDefaultPhaseResolution;

  // Explicit truncation N; otherwise ESL_DEFAULT_TRUNC, otherwise the
  // |alpha|-dependent default rule.
  std::optional<int> truncation;

  std::string output_path;  // empty or "-" writes to the caller's stream
  Format format = Format::csv;
  Tolerances tol;

  int figure = 0;  // preset id this config was built from, 0 if none
};

using Cell = std::variant<double, std::string>;

struct Block {
  nlohmann::ordered_json label;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  // Grid blocks: rows per scan line. CSV output puts a blank line after each
  // scan line so gnuplot's splot/pm3d reads the block as a grid.
  std::size_t scan_length = 0;
};

struct Dataset {
  nlohmann::ordered_json meta;
  std::vector<Block> blocks;
  // Exit status implied by the content (kExitCondition when the necessary
  // condition fails, kExitFailure when a validation check fails).
  int status = kExitOk;
};

// Parameter sets of the six figure presets. Throws InvalidArgument
// outside 1..6.
RunConfig figure_preset(int id);

// Resolved truncation for a state of the given magnitude.
int resolve_truncation(const RunConfig& config, double mag);

// Computes the dataset; throws esl::Error subclasses on failure. Metadata
// includes a generation timestamp; everything else is deterministic.
Dataset compute(const RunConfig& config);

void write_csv(const Dataset& data, std::ostream& out);
void write_json(const Dataset& data, std::ostream& out);
nlohmann::ordered_json to_json(const Dataset& data);

// Shortest round-trip text form; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double x);

int exit_code_for(const std::exception& e);

// One-line JSON error record: {"error": code, "exit": status, "message": ...}.
std::string error_line(const std::exception& e);

// compute + write. Output goes to config.output_path, or `out` when the path
// is empty or "-". Errors are reported on `err` as a single error line.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Full command-line entry point (argv[0] is the program name).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace esl::cli
