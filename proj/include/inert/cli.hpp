// Command-line front end: subcommands, flag parsing and result export.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "inert/ensemble.hpp"
#include "inert/hitting.hpp"

namespace inert::cli {

enum class Command {
  stationary,
  strong_law,
  fluctuations,
  cycles,
  hitting,
  zero_noise,
  trace,
};

enum class Format { csv, json };

std::string to_string(Command command);

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct ExperimentSpec {
  Command command = Command::stationary;
  mc::EnsembleConfig ensemble;
  mc::HittingConfig hitting;
  /// Initial state for zero-noise and trace.
  double x0 = 0.0;
  double s0 = 0.0;
  double v0 = 0.0;
  /// Cycle target per path for `cycles`.
  std::int64_t cycles = 1000;
  /// Checkpoint times for `fluctuations`.
  std::vector<double> checkpoints{1e2, 1e3, 1e4};
  /// KS threshold for `stationary`.
  double ks_max = 0.02;
  bool check = true;
  std::string output_path = "-";
  Format format = Format::csv;
};

/// Bad flags or values. The message is meant for the user.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was requested; the message holds the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// args excludes the program name. Throws UsageError or HelpRequested.
ExperimentSpec parse_args(const std::vector<std::string>& args);

// ---------------------------------------------------------------------------
// Result documents

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Everything one run produces. `config` echoes all effective flag values
/// under their flag names; `results` holds scalar results; `table` is the
/// row data, stored in JSON under `table_name`.
struct Report {
  nlohmann::ordered_json config;
  nlohmann::ordered_json results;
  std::string table_name;
  Table table;
  /// Threshold violations; non-empty means exit code 1 when checking.
  std::vector<std::string> failures;
};

/// Shortest decimal with 17 significant digits, round-trip exact.
std::string format_double(double value);

/// RFC 4180 quoting: fields containing a comma, quote, CR or LF are
/// wrapped in double quotes with embedded quotes doubled.
std::string csv_field(const std::string& text);

/// '#' comment lines with the config and scalar results, then the header
/// row and data rows.
void write_csv(std::ostream& out, const Report& report);

/// {"config": {...}, "results": {..., table_name: [rows as objects]}}
void write_json(std::ostream& out, const Report& report);

/// Runs the experiment and returns its report without writing anything.
Report build_report(const ExperimentSpec& spec);

/// Runs, writes the output, and returns the exit code.
int run_experiment(const ExperimentSpec& spec, std::ostream& out,
                   std::ostream& err);

/// Full program: parse, run, map errors to exit codes.
int main_entry(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err);

}  // namespace inert::cli
